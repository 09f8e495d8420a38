#pragma once

// Independent references: the per-point Runge-Kutta solution of the
// eigenfunction ansatz u = phi(t; x) E_k(x), and the degenerately damped
// harmonic oscillator.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "degenwave/linwave.hpp"

namespace degenwave {

// Classical fourth-order Runge-Kutta step for a small autonomous system.
template <class Rhs, std::size_t D>
std::array<double, D> rk4_step(const Rhs& f, const std::array<double, D>& y, double h) {
  auto axpy = [](const std::array<double, D>& a, double s, const std::array<double, D>& b) {
    std::array<double, D> r;
    for (std::size_t i = 0; i < D; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, 0.5 * h, k1));
  const auto k3 = f(axpy(y, 0.5 * h, k2));
  const auto k4 = f(axpy(y, h, k3));
  std::array<double, D> out;
  for (std::size_t i = 0; i < D; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
  return out;
}

// phi'' + lambda_k phi + alpha E_k(x)^{2m} phi^{2m} phi' = 0 at every sample x,
// with phi(0) = c0, phi'(0) = c1 (coefficients of E_k).
struct AnsatzProblem {
  std::size_t k = 1;
  double c0 = 0.0;
  double c1 = 0.0;
  double alpha = 1.0;
  int m = 1;
  Vector samples;

  // Data u0 = a0 sin(k pi x), u1 = a1 sin(k pi x).
  static AnsatzProblem from_sine_amplitude(std::size_t k, double a0, double a1, double alpha,
                                           int m, Vector samples);

  std::array<double, 2> rhs(const std::array<double, 2>& psi, double x) const;
};

struct OracleSolution {
  std::size_t k = 1;
  double record_step = 0.0;
  Vector samples;
  std::vector<Vector> phi;   // [time index][sample]
  std::vector<Vector> dphi;

  std::size_t size() const { return phi.size(); }
  double time(std::size_t i) const { return static_cast<double>(i) * record_step; }
  // Index of t on the record grid; throws std::invalid_argument if off-grid.
  std::size_t index_of(double t) const;
};

// RK4 with `step` on [0, T], recording every record_step (which step must
// divide, as must record_step divide T).
OracleSolution rk4_ansatz(const AnsatzProblem& problem, double horizon, double step,
                          double record_step);

// Nodal (u, v) = (phi E_k, phi' E_k); samples must be the mesh nodes.
State oracle_field(const OracleSolution& sol, std::size_t time_index, const Mesh& mesh);
State oracle_field_at(const OracleSolution& sol, double t, const Mesh& mesh);

struct EnergyComparison {
  // max_i | ||y_fem(t_i)||_E - ||y_oracle(t_i)||_E |
  double norm_gap = 0.0;
  // max_i ||y_fem(t_i) - y_oracle(t_i)||_E
  double state_distance = 0.0;
};

// Trajectory and oracle must share t0 = 0 and the recording step; the
// comparison covers the oracle's span, which may end before the trajectory.
EnergyComparison compare_energy_norm(const SpatialOperators& ops, const Trajectory& fem,
                                     const OracleSolution& oracle);

// x'' + khat x + alpha x^{2m} x' = 0.
struct OscillatorProblem {
  double stiffness = 1.0;
  double alpha = 1.0;
  int m = 1;
  double x0 = 0.0;
  double x1 = 0.0;
};

// |v|^2 = khat v1^2 / 2 + v2^2 / 2
double equivalent_norm(double stiffness, const std::array<double, 2>& y);

struct OscillatorTrajectory {
  double step = 0.0;
  std::vector<std::array<double, 2>> states;
  std::vector<double> norms;
};

OscillatorTrajectory simulate_oscillator(const OscillatorProblem& problem, double horizon,
                                         double step);

struct StabilitySample {
  std::array<double, 2> initial{};
  double initial_norm = 0.0;
  double time_to_target = -1.0;  // negative: not reached within the horizon
  bool monotone = true;
  double max_norm_increase = 0.0;  // largest relative per-step increase
};

struct UniformStabilityReport {
  std::vector<StabilitySample> samples;
  double max_time = 0.0;
  bool all_reached = true;
  bool all_monotone = true;
  std::size_t unreached = 0;
};

struct SweepOptions {
  double horizon = 2000.0;
  double step = 1e-2;
  std::uint64_t seed = 0;  // rotates the spiral; 0 keeps it unrotated
  double monotone_tolerance = 1e-12;
};

// Initial data on a golden-angle spiral filling the equivalent-norm ball of
// the given radius; reports the first time each trajectory enters |y| < target.
UniformStabilityReport uniform_stability_sweep(double stiffness, double alpha, int m,
                                               double radius, std::size_t n_samples,
                                               double target, const SweepOptions& opts = {});

}  // namespace degenwave
