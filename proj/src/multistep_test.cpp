#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "degenwave/errors.hpp"
#include "degenwave/multistep.hpp"

using namespace degenwave;

namespace {

constexpr double pi = std::numbers::pi;

const RhsFunction decay = [](double, std::span<const double> y, std::span<double> g) {
  g[0] = -y[0];
};

// AB5 on y' = -y, y(0) = 1, seeded with exact values; relative error at T.
double ab5_error(double step, double horizon) {
  std::vector<double> times;
  std::vector<Vector> tail;
  for (int i = 0; i < 5; ++i) {
    times.push_back(i * step);
    tail.push_back({std::exp(-i * step)});
  }
  ABState s = ab5_init(times, tail, decay);
  const auto steps = static_cast<int>(std::llround(horizon / step)) - 4;
  for (int i = 0; i < steps; ++i) ab5_step(s, decay);
  return std::abs(s.current()[0] - std::exp(-horizon)) / std::exp(-horizon);
}

State sine_state(const SpatialOperators& ops, double amplitude) {
  State y(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) y.u()[i] = amplitude * std::sin(pi * ops.mesh.node(i));
  return y;
}

}  // namespace

TEST(AdamsBashforth5, CoefficientsAreConsistent) {
  double s = 0;
  for (double b : kAdamsBashforth5) s += b;
  EXPECT_NEAR(s, 1.0, 1e-15);
  EXPECT_NEAR(kAdamsBashforth5[0], 1901.0 / 720.0, 1e-15);
}

TEST(AdamsBashforth5, FifthOrderOnExponentialDecay) {
  const double coarse = ab5_error(0.02, 10.0), fine = ab5_error(0.01, 10.0);
  EXPECT_NEAR(coarse / fine, 32.0, 0.2 * 32.0) << coarse << " " << fine;
}

TEST(AdamsBashforth5, InitValidatesHistory) {
  std::vector<Vector> tail(5, Vector{1.0});
  const std::vector<double> ok = {0, 1, 2, 3, 4}, uneven = {0, 1, 2, 3.5, 4}, back = {4, 3, 2, 1, 0};
  EXPECT_NO_THROW(ab5_init(ok, tail, decay));
  EXPECT_THROW(ab5_init(uneven, tail, decay), std::invalid_argument);
  EXPECT_THROW(ab5_init(back, tail, decay), std::invalid_argument);
  EXPECT_THROW(ab5_init(std::span(ok).first(4), std::span(tail).first(4), decay), std::invalid_argument);
}

TEST(AdamsBashforth5, StepAdvancesTime) {
  const std::vector<double> t = {0, 0.1, 0.2, 0.3, 0.4};
  std::vector<Vector> tail;
  for (double x : t) tail.push_back({std::exp(-x)});
  ABState s = ab5_init(t, tail, decay);
  EXPECT_DOUBLE_EQ(s.time(), 0.4);
  ab5_step(s, decay);
  EXPECT_NEAR(s.time(), 0.5, 1e-15);
  EXPECT_NEAR(s.current()[0], std::exp(-0.5), 1e-6);  // local error ~ (95/288) h^6
}

TEST(Extension, PlainSchemeBlowsUpOnTheFineWave) {
  // delta * omega_max ~ 0.69 lies outside the AB5 stability region.
  const auto ops = assemble(Mesh(99));
  const BlockGenerator gen(ops);
  const DuhamelStepper stepper(gen, 2e-3);
  const ForcingOperator none(ops, DampingLaw::degenerate(0.0, 1));
  State y0 = sine_state(ops, 2.0 / pi);
  y0.u()[50] += 1e-3;  // excite the top of the spectrum
  const Trajectory start = solve_linear_inhomogeneous(stepper, y0, nullptr, 0.0, 10);
  ExtensionOptions plain;
  plain.scheme = ABScheme::plain;
  EXPECT_THROW(extend_trajectory(start, gen, none, 10.0, plain), NumericalFailure);
}

TEST(Extension, ExponentialSchemeIsExactForTheLinearPart) {
  const auto ops = assemble(Mesh(99));
  const BlockGenerator gen(ops);
  const DuhamelStepper stepper(gen, 2e-3);
  const ForcingOperator none(ops, DampingLaw::degenerate(0.0, 1));
  const State y0 = sine_state(ops, 2.0 / pi);
  const Trajectory start = solve_linear_inhomogeneous(stepper, y0, nullptr, 0.0, 10);
  const Trajectory ext = extend_trajectory(start, gen, none, 2.0);
  EXPECT_EQ(ext.size(), 1001u);
  EXPECT_NEAR(energy(ops, ext.back()), energy(ops, y0), 1e-9);
}

TEST(Extension, ExponentialSchemeTracksPicard) {
  const auto ops = assemble(Mesh(31));
  const BlockGenerator gen(ops);
  const DuhamelStepper stepper(gen, 0.01);
  const ForcingOperator forcing(ops, DampingLaw::degenerate(1.0, 1));
  const State y0 = sine_state(ops, 2.0 / pi);
  const PicardResult full = picard_solve(stepper, forcing, y0, 4.0, PicardConfig{});
  const PicardResult head = picard_solve(stepper, forcing, y0, 2.0, PicardConfig{});
  const Trajectory ext = extend_trajectory(head.trajectory, gen, forcing, 4.0);
  ASSERT_EQ(ext.size(), full.trajectory.size());
  EXPECT_LT(sup_energy_distance(ops, ext, full.trajectory), 1e-4);
  for (std::size_t i = 1; i < ext.size(); ++i)
    EXPECT_LE(energy(ops, ext[i]), energy(ops, ext[i - 1]) * (1 + 1e-6));
}

TEST(Extension, ArgumentChecks) {
  const auto ops = assemble(Mesh(7));
  const BlockGenerator gen(ops);
  const DuhamelStepper stepper(gen, 0.1);
  const ForcingOperator none(ops, DampingLaw::degenerate(0.0, 1));
  const Trajectory t = solve_linear_inhomogeneous(stepper, State(7), nullptr, 0.0, 6);
  EXPECT_EQ(extend_trajectory(t, gen, none, t.end_time()).size(), t.size());
  EXPECT_THROW(extend_trajectory(t, gen, none, 0.3), std::invalid_argument);
  EXPECT_THROW(extend_trajectory(t, gen, none, 1.05), std::invalid_argument);
  const Trajectory short_t = solve_linear_inhomogeneous(stepper, State(7), nullptr, 0.0, 3);
  EXPECT_THROW(extend_trajectory(short_t, gen, none, 1.0), std::invalid_argument);
}
