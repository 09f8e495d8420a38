#include "degenwave/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "degenwave/parallel.hpp"

namespace degenwave {
namespace {

std::size_t exact_ratio(double num, double den, const char* what) {
  const double r = num / den;
  const double n = std::round(r);
  if (!(den > 0.0) || n < 1.0 || std::abs(r - n) > 1e-9 * r) throw std::invalid_argument(what);
  return static_cast<std::size_t>(n);
}

}  // namespace

AnsatzProblem AnsatzProblem::from_sine_amplitude(std::size_t k, double a0, double a1,
                                                 double alpha, int m, Vector samples) {
  AnsatzProblem p;
  p.k = k;
  p.c0 = a0 / std::numbers::sqrt2;
  p.c1 = a1 / std::numbers::sqrt2;
  p.alpha = alpha;
  p.m = m;
  p.samples = std::move(samples);
  return p;
}

std::array<double, 2> AnsatzProblem::rhs(const std::array<double, 2>& psi, double x) const {
  const double lambda = laplacian_eigenvalue(k);
  const double ek = laplacian_eigenfunction(k, x);
  const double coef = alpha * std::pow(ek * psi[0], 2 * m);
  return {psi[1], -lambda * psi[0] - coef * psi[1]};
}

std::size_t OracleSolution::index_of(double t) const {
  const double r = t / record_step;
  const double n = std::round(r);
  if (n < 0.0 || std::abs(r - n) > 1e-9 * std::max(1.0, r) ||
      static_cast<std::size_t>(n) >= phi.size())
    throw std::invalid_argument("oracle: time is not on the recorded grid");
  return static_cast<std::size_t>(n);
}

OracleSolution rk4_ansatz(const AnsatzProblem& problem, double horizon, double step,
                          double record_step) {
  if (problem.k == 0) throw std::invalid_argument("rk4_ansatz: k must be >= 1");
  if (problem.samples.size() < 2) throw std::invalid_argument("rk4_ansatz: need >= 2 samples");
  const std::size_t sub = exact_ratio(record_step, step, "rk4_ansatz: step must divide record_step");
  const std::size_t records = exact_ratio(horizon, record_step, "rk4_ansatz: record_step must divide T");
  const std::size_t s_count = problem.samples.size();

  OracleSolution sol;
  sol.k = problem.k;
  sol.record_step = record_step;
  sol.samples = problem.samples;
  sol.phi.assign(records + 1, Vector(s_count));
  sol.dphi.assign(records + 1, Vector(s_count));

  parallel_for(s_count, [&](std::size_t s) {
    const double x = problem.samples[s];
    auto f = [&](const std::array<double, 2>& psi) { return problem.rhs(psi, x); };
    std::array<double, 2> psi{problem.c0, problem.c1};
    sol.phi[0][s] = psi[0];
    sol.dphi[0][s] = psi[1];
    for (std::size_t r = 1; r <= records; ++r) {
      for (std::size_t i = 0; i < sub; ++i) psi = rk4_step(f, psi, step);
      sol.phi[r][s] = psi[0];
      sol.dphi[r][s] = psi[1];
    }
  });
  return sol;
}

State oracle_field(const OracleSolution& sol, std::size_t time_index, const Mesh& mesh) {
  const std::size_t n = mesh.size();
  if (sol.samples.size() != n) throw std::invalid_argument("oracle_field: samples are not the mesh nodes");
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(sol.samples[i] - mesh.node(i)) > 1e-12)
      throw std::invalid_argument("oracle_field: samples are not the mesh nodes");
  if (time_index >= sol.size()) throw std::out_of_range("oracle_field: time index");
  State y(n);
  auto u = y.u();
  auto v = y.v();
  for (std::size_t i = 0; i < n; ++i) {
    const double ek = laplacian_eigenfunction(sol.k, mesh.node(i));
    u[i] = sol.phi[time_index][i] * ek;
    v[i] = sol.dphi[time_index][i] * ek;
  }
  return y;
}

State oracle_field_at(const OracleSolution& sol, double t, const Mesh& mesh) {
  return oracle_field(sol, sol.index_of(t), mesh);
}

EnergyComparison compare_energy_norm(const SpatialOperators& ops, const Trajectory& fem,
                                     const OracleSolution& oracle) {
  if (std::abs(fem.t0()) > 1e-12 || std::abs(fem.step() - oracle.record_step) > 1e-12 * fem.step() ||
      fem.size() < oracle.size())
    throw std::invalid_argument("compare_energy_norm: time grids differ");
  EnergyComparison out;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    const State yo = oracle_field(oracle, i, ops.mesh);
    out.norm_gap = std::max(out.norm_gap, std::abs(energy_norm(ops, fem[i]) - energy_norm(ops, yo)));
    out.state_distance = std::max(out.state_distance, energy_norm(ops, fem[i] - yo));
  }
  return out;
}

double equivalent_norm(double stiffness, const std::array<double, 2>& y) {
  return std::sqrt(0.5 * stiffness * y[0] * y[0] + 0.5 * y[1] * y[1]);
}

namespace {

auto oscillator_rhs(double stiffness, double alpha, int m) {
  return [=](const std::array<double, 2>& y) -> std::array<double, 2> {
    return {y[1], -alpha * std::pow(y[0], 2 * m) * y[1] - stiffness * y[0]};
  };
}

}  // namespace

OscillatorTrajectory simulate_oscillator(const OscillatorProblem& p, double horizon, double step) {
  if (!(p.stiffness > 0.0)) throw std::invalid_argument("oscillator: stiffness must be > 0");
  if (!(step > 0.0)) throw std::invalid_argument("oscillator: step must be > 0");
  const auto steps = static_cast<std::size_t>(std::llround(horizon / step));
  const auto f = oscillator_rhs(p.stiffness, p.alpha, p.m);
  OscillatorTrajectory out;
  out.step = step;
  out.states.reserve(steps + 1);
  out.norms.reserve(steps + 1);
  std::array<double, 2> y{p.x0, p.x1};
  out.states.push_back(y);
  out.norms.push_back(equivalent_norm(p.stiffness, y));
  for (std::size_t i = 0; i < steps; ++i) {
    y = rk4_step(f, y, step);
    out.states.push_back(y);
    out.norms.push_back(equivalent_norm(p.stiffness, y));
  }
  return out;
}

UniformStabilityReport uniform_stability_sweep(double stiffness, double alpha, int m,
                                               double radius, std::size_t n_samples,
                                               double target, const SweepOptions& opts) {
  if (n_samples < 1) throw std::invalid_argument("uniform_stability_sweep: n_samples must be >= 1");
  if (!(stiffness > 0.0) || !(radius > 0.0) || !(target > 0.0))
    throw std::invalid_argument("uniform_stability_sweep: stiffness, radius, target must be > 0");
  double rotation = 0.0;
  if (opts.seed != 0) {
    std::mt19937_64 rng(opts.seed);
    rotation = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  UniformStabilityReport report;
  report.samples.resize(n_samples);
  const auto steps = static_cast<std::size_t>(std::llround(opts.horizon / opts.step));
  const auto f = oscillator_rhs(stiffness, alpha, m);

  parallel_for(n_samples, [&](std::size_t i) {
    const double r = radius * std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(n_samples));
    const double theta = rotation + golden * static_cast<double>(i);
    StabilitySample& s = report.samples[i];
    s.initial = {r * std::cos(theta) * std::sqrt(2.0 / stiffness), r * std::sin(theta) * std::sqrt(2.0)};
    std::array<double, 2> y = s.initial;
    double norm = equivalent_norm(stiffness, y);
    s.initial_norm = norm;
    if (norm < target) s.time_to_target = 0.0;
    for (std::size_t k = 1; k <= steps; ++k) {
      y = rk4_step(f, y, opts.step);
      const double next = equivalent_norm(stiffness, y);
      if (next > norm) {
        const double rel = (next - norm) / norm;
        s.max_norm_increase = std::max(s.max_norm_increase, rel);
        if (rel > opts.monotone_tolerance) s.monotone = false;
      }
      norm = next;
      if (s.time_to_target < 0.0 && norm < target)
        s.time_to_target = static_cast<double>(k) * opts.step;
    }
  });

  for (const auto& s : report.samples) {
    report.all_monotone = report.all_monotone && s.monotone;
    if (s.time_to_target < 0.0) {
      report.all_reached = false;
      ++report.unreached;
    } else {
      report.max_time = std::max(report.max_time, s.time_to_target);
    }
  }
  return report;
}

}  // namespace degenwave
