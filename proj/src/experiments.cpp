#include "degenwave/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "degenwave/errors.hpp"
#include "degenwave/parallel.hpp"

namespace degenwave {

EnergyTrace make_energy_trace(const SpatialOperators& ops, const Trajectory& traj,
                              RunMetadata meta) {
  EnergyTrace tr;
  tr.meta = std::move(meta);
  const std::size_t n = traj.size();
  tr.times.resize(n);
  tr.energy.resize(n);
  tr.l2.resize(n);
  tr.h1.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    tr.times[i] = traj.time(i);
    tr.energy[i] = energy(ops, traj[i]);
    tr.l2[i] = l2_norm(ops, traj[i].u());
    tr.h1[i] = h1_seminorm(ops, traj[i].u());
  }
  return tr;
}

MonotonicityReport check_energy_monotonicity(const EnergyTrace& trace, double per_step_tolerance,
                                             double window, double floor) {
  MonotonicityReport r;
  const std::size_t n = trace.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double prev = trace.energy[i - 1];
    const double rel = (trace.energy[i] - prev) / std::max(prev, 1e-300);
    r.max_relative_increase = std::max(r.max_relative_increase, rel);
  }
  r.nonincreasing = r.max_relative_increase <= per_step_tolerance;
  if (n < 2) return r;
  const double step = trace.times[1] - trace.times[0];
  const auto lag = static_cast<std::size_t>(std::llround(window / step));
  for (std::size_t i = 0; i + lag < n; ++i) {
    if (trace.energy[i] <= floor) continue;
    const double ratio = trace.energy[i + lag] / trace.energy[i];
    r.worst_window_ratio = std::max(r.worst_window_ratio, ratio);
    if (!(trace.energy[i + lag] < trace.energy[i])) r.strictly_decreasing = false;
  }
  return r;
}

double frequency_amplitude(std::size_t k) {
  if (k == 0) throw std::invalid_argument("frequency k must be >= 1");
  return 2.0 / (static_cast<double>(k) * std::numbers::pi);
}

State frequency_initial_state(const SpatialOperators& ops, std::size_t k) {
  const double a = frequency_amplitude(k);
  const double kp = static_cast<double>(k) * std::numbers::pi;
  Vector u = ritz_project_h1(ops, [a, kp](double x) { return a * std::sin(kp * x); });
  return State(u, Vector(ops.size(), 0.0));
}

bool SimulationRun::picard_converged() const {
  return std::all_of(picard_windows.begin(), picard_windows.end(),
                     [](const WindowReport& w) { return w.converged; });
}

Simulator::Simulator(const SpatialOperators& ops, double delta, NewtonCotesRule rule)
    : ops_(&ops), rule_(rule), gen_(ops), stepper_(gen_, delta, rule) {}

SimulationRun Simulator::run(const State& y0, const DampingLaw& law,
                             const SimulationOptions& opts, std::size_t k) const {
  PicardConfig pc = opts.picard;
  pc.delta = delta();
  const double picard_horizon = std::min(opts.handoff, opts.horizon);
  ForcingOperator forcing(*ops_, law);
  PicardResult pr = picard_solve(stepper_, forcing, y0, picard_horizon, pc);

  SimulationRun out;
  out.meta = RunMetadata{k, law, ops_->mesh.h(), delta(),
                         rule_ == NewtonCotesRule::boole ? "duhamel-boole" : "duhamel-simpson38"};
  out.picard_windows = std::move(pr.windows);
  out.trajectory = std::move(pr.trajectory);
  if (opts.horizon > picard_horizon + 0.5 * delta()) {
    ExtensionOptions eo;
    eo.scheme = opts.ab_scheme;
    out.trajectory = extend_trajectory(out.trajectory, gen_, forcing, opts.horizon, eo);
    out.meta.scheme += opts.ab_scheme == ABScheme::exponential ? "+ab5-exponential" : "+ab5";
  }
  out.trace = make_energy_trace(*ops_, out.trajectory, out.meta);
  return out;
}

std::size_t max_resolved_frequency(const Mesh& mesh) { return mesh.size() / 8; }

std::vector<SimulationRun> frequency_sweep(const Simulator& sim, const std::vector<std::size_t>& ks,
                                           const DampingLaw& law, const SimulationOptions& opts) {
  const std::size_t kmax = max_resolved_frequency(sim.operators().mesh);
  for (std::size_t k : ks)
    if (k == 0 || k > kmax)
      throw ConfigError("frequency k = " + std::to_string(k) +
                        " is not resolved by the mesh (need 1 <= k <= N/8 = " +
                        std::to_string(kmax) + ")");
  std::vector<SimulationRun> runs(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    runs[i] = sim.run(frequency_initial_state(sim.operators(), ks[i]), law, opts, ks[i]);
  });
  return runs;
}

ConservativeComparison conservative_comparison(const Simulator& sim, const Trajectory& u) {
  const SpatialOperators& ops = sim.operators();
  if (std::abs(u.step() - sim.delta()) > 1e-12 * sim.delta())
    throw std::invalid_argument("conservative_comparison: step mismatch");
  ConservativeComparison out;
  const Propagator& prop = sim.stepper().propagator();
  const std::size_t full = prop.max_power();
  State w = u[0];
  State next(w.dofs());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i > 0) {
      prop.apply(full, w, next);
      std::swap(w, next);
    }
    out.times.push_back(u.time(i));
    out.energy_z.push_back(energy(ops, u[i] - w));
    out.energy_w.push_back(energy(ops, w));
  }
  return out;
}

PrimitiveSetup primitive_setup(const SpatialOperators& ops, std::size_t k, int m, double alpha) {
  if (k == 0 || k > max_resolved_frequency(ops.mesh))
    throw ConfigError("primitive_setup: frequency not resolved by the mesh");
  if (m < 1) throw ConfigError("primitive_setup: m must be >= 1");
  PrimitiveSetup s;
  s.k = k;
  s.m = m;
  s.alpha = alpha;
  const State y0 = frequency_initial_state(ops, k);
  s.displacement.assign(y0.u().begin(), y0.u().end());

  // The forcing operator of the primitive law at v = u0 gives -M^{-1} b with
  // b = (alpha u0^{2m+1}/(2m+1), phi_i); the potential solves K Phi = -b = M f.
  const std::size_t n = ops.size();
  ForcingOperator primitive(ops, DampingLaw::primitive(alpha, m));
  Vector f(n), rhs(n);
  primitive.evaluate(s.displacement, s.displacement, f);
  ops.mass.apply(f, rhs);
  s.potential = ops.stiffness_factor.solve(rhs);

  Vector check(n);
  ops.stiffness.apply(s.potential, check);
  for (std::size_t i = 0; i < n; ++i)
    s.elliptic_residual = std::max(s.elliptic_residual, std::abs(check[i] - rhs[i]));
  s.h1_potential_sq = ops.stiffness.quadratic_form(s.potential);
  s.l2_data_sq = ops.mass.quadratic_form(s.displacement);
  return s;
}

PrimitiveRun primitive_solve(const Simulator& sim, const PrimitiveSetup& setup,
                             const SimulationOptions& opts, const Trajectory* reference,
                             double gap_until) {
  PrimitiveRun out;
  out.run = sim.run(setup.initial_state(), DampingLaw::primitive(setup.alpha, setup.m), opts,
                    setup.k);
  if (gap_until < 0.0) gap_until = std::min(opts.handoff, opts.horizon);
  if (reference)
    out.velocity_gap = velocity_gap(sim.operators(), out.run.trajectory, *reference, gap_until);
  return out;
}

double velocity_gap(const SpatialOperators& ops, const Trajectory& primitive, const Trajectory& u,
                    double until) {
  if (std::abs(primitive.step() - u.step()) > 1e-12 * u.step() ||
      std::abs(primitive.t0() - u.t0()) > 1e-12)
    throw std::invalid_argument("velocity_gap: trajectories are on different time grids");
  const std::size_t n = std::min(primitive.size(), u.size());
  Vector diff(ops.size());
  double gap = 0.0;
  for (std::size_t i = 0; i < n && u.time(i) <= until + 1e-9 * u.step(); ++i) {
    const auto a = primitive[i].v();
    const auto b = u[i].u();
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = a[j] - b[j];
    gap = std::max(gap, l2_norm(ops, diff));
  }
  return gap;
}

DecayFit decay_rate_fit(const Vector& times, const Vector& values, double t1, double t2) {
  if (times.size() != values.size()) throw std::invalid_argument("decay_rate_fit: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < t1 || t > t2 || t <= 0.0) continue;
    if (!(values[i] > 0.0))
      throw std::invalid_argument("decay_rate_fit: nonpositive value at t = " + std::to_string(t));
    const double x = std::log(t), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("decay_rate_fit: fewer than two samples in range");
  const double dn = static_cast<double>(n);
  const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  DecayFit fit;
  fit.exponent = -slope;
  fit.log_prefactor = (sy - slope * sx) / dn;
  fit.points = n;
  return fit;
}

DecayFit decay_rate_fit(const EnergyTrace& trace, double t1, double t2) {
  return decay_rate_fit(trace.times, trace.energy, t1, t2);
}

LowerOrderReport lower_order_decay(const EnergyTrace& trace, const PrimitiveSetup& setup) {
  LowerOrderReport r;
  r.bound = setup.twice_initial_energy();
  r.times = trace.times;
  r.l2 = trace.l2;
  r.min_slack = r.bound;
  for (double n : trace.l2) {
    const double slack = r.bound - n * n;
    r.min_slack = std::min(r.min_slack, slack);
    if (slack < 0.0) ++r.violations;
  }
  return r;
}

double spectral_norm_sq(const Mesh& mesh, std::span<const double> u, double s) {
  const std::size_t n = mesh.size();
  if (u.size() != n) throw std::invalid_argument("spectral_norm_sq: size mismatch");
  const double scale = std::sqrt(2.0 / static_cast<double>(n + 1));
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      c += u[i] * std::sin(static_cast<double>(j) * std::numbers::pi * mesh.node(i));
    c *= scale;
    total += std::pow(laplacian_eigenvalue(j), s) * c * c;
  }
  return mesh.h() * total;
}

}  // namespace degenwave
