#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "degenwave/errors.hpp"
#include "degenwave/picard.hpp"
#include "degenwave/quadrature.hpp"

using namespace degenwave;

namespace {

constexpr double pi = std::numbers::pi;

// -M^{-1} (d(u_h, v_h), phi_i) from 6-point Gauss on every element, written
// independently of the library's assembly.
Vector reference_forcing(const SpatialOperators& ops, const DampingLaw& law, const Vector& u,
                         const Vector& v) {
  const std::size_t n = ops.size();
  const double h = ops.mesh.h();
  const auto rule = gauss_legendre_unit(6);
  Vector load(n, 0.0);
  for (std::size_t e = 0; e <= n; ++e) {
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = (static_cast<double>(e) + rule.nodes[q]) * h;
      const double val = law.pointwise(evaluate(ops.mesh, u, x), evaluate(ops.mesh, v, x));
      for (std::size_t i : {e, e + 1}) {
        if (i == 0 || i > n) continue;
        const double phi = std::max(0.0, 1.0 - std::abs(x - ops.mesh.node(i - 1)) / h);
        load[i - 1] += rule.weights[q] * h * val * phi;
      }
    }
  }
  ops.mass_factor.solve_in_place(load);
  for (double& x : load) x = -x;
  return load;
}

struct Fixture {
  SpatialOperators ops = assemble(Mesh(31));
  BlockGenerator gen{ops};
  DuhamelStepper stepper{gen, 0.01};

  State sine_data(double amplitude, std::size_t k = 1) const {
    State y(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i)
      y.u()[i] = amplitude * std::sin(static_cast<double>(k) * pi * ops.mesh.node(i));
    return y;
  }
};

}  // namespace

TEST(DampingLaw, PointwiseValues) {
  EXPECT_DOUBLE_EQ(DampingLaw::degenerate(2.0, 1).pointwise(3.0, 0.5), 2.0 * 9.0 * 0.5);
  EXPECT_DOUBLE_EQ(DampingLaw::degenerate(1.0, 2).pointwise(2.0, 1.0), 16.0);
  EXPECT_DOUBLE_EQ(DampingLaw::linear(0.4).pointwise(9.0, 2.0), 0.8);
  EXPECT_DOUBLE_EQ(DampingLaw::primitive(1.0, 1).pointwise(0.0, 2.0), 8.0 / 3.0);
  EXPECT_TRUE(DampingLaw::degenerate(0.0, 1).is_zero());
}

TEST(Forcing, TensorAndQuadraturePathsMatchReference) {
  const auto ops = assemble(Mesh(17));
  Vector u(17), v(17);
  for (std::size_t i = 0; i < 17; ++i) {
    const double x = ops.mesh.node(i);
    u[i] = std::sin(pi * x) + 0.3 * std::sin(4 * pi * x);
    v[i] = std::cos(2 * x) * x * (1 - x) * 5;
  }
  for (const DampingLaw& law : {DampingLaw::degenerate(1.3, 1), DampingLaw::degenerate(0.7, 2),
                                DampingLaw::primitive(1.0, 1), DampingLaw::primitive(2.0, 2)}) {
    Vector out(17);
    ForcingOperator(ops, law).evaluate(u, v, out);
    const Vector ref = reference_forcing(ops, law, u, v);
    for (std::size_t i = 0; i < 17; ++i) EXPECT_NEAR(out[i], ref[i], 1e-12 * (1 + std::abs(ref[i])));
  }
  const Vector cubic = cubic_forcing(ops, u, v, 1.3, 1);
  const Vector ref = reference_forcing(ops, DampingLaw::degenerate(1.3, 1), u, v);
  for (std::size_t i = 0; i < 17; ++i) EXPECT_NEAR(cubic[i], ref[i], 1e-12 * (1 + std::abs(ref[i])));
}

TEST(Forcing, LinearLawIsMinusBetaV) {
  const auto ops = assemble(Mesh(5));
  const Vector u(5, 1.0), v = {1, 2, 3, 4, 5};
  Vector out(5);
  ForcingOperator(ops, DampingLaw::linear(0.5)).evaluate(u, v, out);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(out[i], -0.5 * v[i]);
}

TEST(Forcing, RejectsBadLaws) {
  const auto ops = assemble(Mesh(5));
  EXPECT_THROW(ForcingOperator(ops, DampingLaw::degenerate(-1.0, 1)), std::invalid_argument);
  EXPECT_THROW(ForcingOperator(ops, DampingLaw::degenerate(1.0, 0)), std::invalid_argument);
}

TEST(Picard, ZeroLawIsASingleLinearSolve) {
  Fixture f;
  const ForcingOperator zero(f.ops, DampingLaw::degenerate(0.0, 1));
  const State y0 = f.sine_data(0.5);
  Trajectory out;
  const WindowReport r = picard_window(f.stepper, zero, y0, 0.0, 50, PicardConfig{}, out);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.converged);
  const Trajectory lin = solve_linear_inhomogeneous(f.stepper, y0, nullptr, 0.0, 50);
  EXPECT_EQ(sup_energy_distance(f.ops, out, lin), 0.0);
}

TEST(Picard, ConvergesToAFixedPoint) {
  Fixture f;
  const ForcingOperator forcing(f.ops, DampingLaw::degenerate(1.0, 1));
  PicardConfig cfg;
  cfg.delta = 0.01;
  const PicardResult r = picard_solve(f.stepper, forcing, f.sine_data(2.0 / pi), 2.0, cfg);
  EXPECT_TRUE(r.converged());
  EXPECT_EQ(r.windows.size(), 2u);
  EXPECT_LE(r.max_iterations(), 12);
  EXPECT_LT(r.max_distance(), 1e-8);
  EXPECT_EQ(r.trajectory.size(), 201u);
  // Distances shrink geometrically.
  const auto& d = r.windows[0].distances;
  ASSERT_GE(d.size(), 3u);
  EXPECT_LT(d.back(), d.front());
  // Each window is a fixed point of its own map up to the tolerance.
  Trajectory first(0.0, 0.01);
  for (std::size_t i = 0; i <= 100; ++i) first.push_back(r.trajectory[i]);
  EXPECT_LT(fixed_point_residual(f.stepper, forcing, first), 1e-7);
}

TEST(Picard, EnergyDecaysUnderDegenerateDamping) {
  Fixture f;
  const ForcingOperator forcing(f.ops, DampingLaw::degenerate(1.0, 1));
  const PicardResult r = picard_solve(f.stepper, forcing, f.sine_data(2.0 / pi), 3.0, PicardConfig{});
  double prev = energy(f.ops, r.trajectory[0]);
  for (std::size_t i = 1; i < r.trajectory.size(); ++i) {
    const double e = energy(f.ops, r.trajectory[i]);
    EXPECT_LE(e, prev * (1 + 1e-6));
    prev = e;
  }
  EXPECT_LT(prev, energy(f.ops, r.trajectory[0]));
}

TEST(Picard, DivergenceIsReported) {
  Fixture f;
  const ForcingOperator strong(f.ops, DampingLaw::degenerate(200.0, 1));
  PicardConfig cfg;
  cfg.window = 2.0;
  EXPECT_THROW(picard_solve(f.stepper, strong, f.sine_data(1.5), 2.0, cfg), NumericalFailure);
}

TEST(Picard, RejectsMisalignedGrids) {
  Fixture f;
  const ForcingOperator forcing(f.ops, DampingLaw::degenerate(1.0, 1));
  PicardConfig cfg;
  cfg.window = 0.015;
  EXPECT_THROW(picard_solve(f.stepper, forcing, f.sine_data(0.1), 1.0, cfg), std::invalid_argument);
  EXPECT_THROW(picard_solve(f.stepper, forcing, f.sine_data(0.1), 1.005, PicardConfig{}),
               std::invalid_argument);
}

TEST(Contraction, EstimateAndCertifiedBound) {
  EXPECT_NEAR(estimate_contraction(std::sqrt(2.0), 1.0, 1.0, 1), 1.5, 1e-15);
  EXPECT_NEAR(estimate_contraction(1.0, 0.5, 2.0, 2), 0.5 * 2.0 * 5.0 / 16.0, 1e-15);
  EXPECT_NEAR(certified_error_bound(1e-8, 0.5), 1e-8, 1e-22);
  EXPECT_EQ(certified_error_bound(1e-8, 1.0), std::numeric_limits<double>::infinity());
  EXPECT_THROW(estimate_contraction(0.0, 1.0, 1.0, 1), std::invalid_argument);
}
