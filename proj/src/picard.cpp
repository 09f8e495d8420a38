#include "degenwave/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "degenwave/errors.hpp"
#include "degenwave/quadrature.hpp"

namespace degenwave {

double DampingLaw::pointwise(double u, double v) const {
  switch (kind) {
    case Kind::degenerate: return coefficient * std::pow(u, 2 * m) * v;
    case Kind::linear: return coefficient * v;
    case Kind::primitive: return coefficient * std::pow(v, 2 * m + 1) / (2 * m + 1);
  }
  return 0.0;
}

ForcingOperator::ForcingOperator(const SpatialOperators& ops, DampingLaw law)
    : ops_(&ops), law_(law), gauss_points_(law.m + 2) {
  if (law.coefficient < 0.0) throw std::invalid_argument("damping coefficient must be >= 0");
  if (law.kind != DampingLaw::Kind::linear && law.m < 1)
    throw std::invalid_argument("damping exponent m must be >= 1");
}

void ForcingOperator::quadrature_load(std::span<const double> u, std::span<const double> v,
                                      std::span<double> load) const {
  const std::size_t n = ops_->size();
  const double h = ops_->mesh.h();
  static thread_local QuadratureRule rule;
  if (static_cast<int>(rule.nodes.size()) != gauss_points_)
    rule = gauss_legendre_unit(gauss_points_);
  std::fill(load.begin(), load.end(), 0.0);
  for (std::size_t e = 0; e <= n; ++e) {
    const double ul = e > 0 ? u[e - 1] : 0.0, ur = e < n ? u[e] : 0.0;
    const double vl = e > 0 ? v[e - 1] : 0.0, vr = e < n ? v[e] : 0.0;
    double left = 0.0, right = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = rule.nodes[q];
      const double val =
          law_.pointwise((1 - s) * ul + s * ur, (1 - s) * vl + s * vr) * rule.weights[q] * h;
      left += val * (1 - s);
      right += val * s;
    }
    if (e > 0) load[e - 1] += left;
    if (e < n) load[e] += right;
  }
}

void ForcingOperator::evaluate(std::span<const double> u, std::span<const double> v,
                               std::span<double> out) const {
  const std::size_t n = ops_->size();
  if (u.size() != n || v.size() != n || out.size() != n)
    throw std::invalid_argument("forcing: dimension mismatch");
  if (law_.is_zero()) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  if (law_.kind == DampingLaw::Kind::linear) {
    // v is already in the finite element space, so R0_h(beta v) = beta v.
    for (std::size_t i = 0; i < n; ++i) out[i] = -law_.coefficient * v[i];
    return;
  }
  if (law_.m == 1 && law_.kind == DampingLaw::Kind::degenerate) {
    ops_->quartic.contract(u, u, v, out);
    for (double& x : out) x *= law_.coefficient;
  } else if (law_.m == 1 && law_.kind == DampingLaw::Kind::primitive) {
    ops_->quartic.contract(v, v, v, out);
    for (double& x : out) x *= law_.coefficient / 3.0;
  } else {
    quadrature_load(u, v, out);
  }
  ops_->mass_factor.solve_in_place(out);
  for (double& x : out) x = -x;
}

Vector cubic_forcing(const SpatialOperators& ops, std::span<const double> u,
                     std::span<const double> v, double alpha, int m) {
  Vector out(ops.size());
  ForcingOperator(ops, DampingLaw::degenerate(alpha, m)).evaluate(u, v, out);
  return out;
}

bool PicardResult::converged() const {
  return std::all_of(windows.begin(), windows.end(),
                     [](const WindowReport& w) { return w.converged; });
}

int PicardResult::max_iterations() const {
  int m = 0;
  for (const auto& w : windows) m = std::max(m, w.iterations);
  return m;
}

double PicardResult::max_distance() const {
  double m = 0.0;
  for (const auto& w : windows) m = std::max(m, w.distance);
  return m;
}

double sup_energy_distance(const SpatialOperators& ops, const Trajectory& a,
                           const Trajectory& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_energy_distance: grid mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, energy_norm(ops, a[i] - b[i]));
  return d;
}

namespace {

// Forcing from a stored iterate, linear in time between grid states.
TimeForcing interpolated_forcing(const ForcingOperator& forcing, const Trajectory& iterate) {
  const std::size_t n = iterate[0].dofs();
  return [&forcing, &iterate, n, state = State(n)](double t, std::span<double> out) mutable {
    const double s = (t - iterate.t0()) / iterate.step();
    const double last = static_cast<double>(iterate.size() - 1);
    const double clamped = std::clamp(s, 0.0, last);
    auto j = static_cast<std::size_t>(std::floor(clamped));
    if (j + 1 >= iterate.size()) j = iterate.size() - 1;
    const double w = clamped - static_cast<double>(j);
    if (w < 1e-12 || j + 1 >= iterate.size()) {
      forcing.evaluate(iterate[j], out);
      return;
    }
    if (w > 1.0 - 1e-12) {
      forcing.evaluate(iterate[j + 1], out);
      return;
    }
    auto dst = state.data();
    const auto a = iterate[j].data(), b = iterate[j + 1].data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (1.0 - w) * a[i] + w * b[i];
    forcing.evaluate(state, out);
  };
}

}  // namespace

WindowReport picard_window(const DuhamelStepper& stepper, const ForcingOperator& forcing,
                           const State& y0, double t0, std::size_t steps,
                           const PicardConfig& config, Trajectory& out) {
  const SpatialOperators& ops = forcing.operators();
  WindowReport report;
  report.t0 = t0;

  if (forcing.law().is_zero()) {
    out = solve_linear_inhomogeneous(stepper, y0, nullptr, t0, steps);
    report.iterations = 1;
    report.converged = true;
    report.distances.push_back(0.0);
    return report;
  }

  // Initial guess: the constant state y0, hence constant forcing.
  Trajectory previous(t0, stepper.delta());
  previous.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) previous.push_back(y0);

  int growth = 0;
  for (int it = 1; it <= config.max_iterations; ++it) {
    Trajectory current = solve_linear_inhomogeneous(
        stepper, y0, interpolated_forcing(forcing, previous), t0, steps);
    const double d = sup_energy_distance(ops, current, previous);
    if (!std::isfinite(d)) {
      std::ostringstream msg;
      msg << "Picard iteration produced non-finite states at t0 = " << t0
          << "; try a shorter window";
      throw NumericalFailure(msg.str());
    }
    growth = (!report.distances.empty() && d > report.distances.back()) ? growth + 1 : 0;
    report.distances.push_back(d);
    report.iterations = it;
    report.distance = d;
    previous = std::move(current);
    if (d < config.tolerance) {
      report.converged = true;
      break;
    }
    if (growth >= config.divergence_patience) {
      std::ostringstream msg;
      msg << "Picard iteration diverging on window starting at t = " << t0 << " (distance "
          << d << " grew " << growth << " times in a row); use a shorter window than "
          << stepper.delta() * static_cast<double>(steps);
      throw NumericalFailure(msg.str());
    }
  }
  out = std::move(previous);
  return report;
}

PicardResult picard_solve(const DuhamelStepper& stepper, const ForcingOperator& forcing,
                          const State& y0, double horizon, const PicardConfig& config) {
  if (!(config.window > 0.0) || !(config.tolerance > 0.0) || config.max_iterations < 1)
    throw std::invalid_argument("picard_solve: window, tolerance and iteration cap must be positive");
  const double delta = stepper.delta();
  const double total_ratio = horizon / delta;
  const auto total_steps = static_cast<std::size_t>(std::llround(total_ratio));
  if (!(horizon >= 0.0) || std::abs(total_ratio - static_cast<double>(total_steps)) > 1e-9 * std::max(1.0, total_ratio))
    throw std::invalid_argument("picard_solve: horizon is not a multiple of delta");
  const double window_ratio = config.window / delta;
  const auto window_steps = static_cast<std::size_t>(std::llround(window_ratio));
  if (window_steps == 0 || std::abs(window_ratio - static_cast<double>(window_steps)) > 1e-9 * window_ratio)
    throw std::invalid_argument("picard_solve: delta must divide the window length");

  PicardResult result;
  result.trajectory = Trajectory(0.0, delta);
  result.trajectory.push_back(y0);
  std::size_t done = 0;
  while (done < total_steps) {
    const std::size_t steps = std::min(window_steps, total_steps - done);
    const double t0 = static_cast<double>(done) * delta;
    Trajectory window;
    result.windows.push_back(
        picard_window(stepper, forcing, result.trajectory.back(), t0, steps, config, window));
    result.trajectory.append_continuation(window);
    done += steps;
  }
  return result;
}

double fixed_point_residual(const DuhamelStepper& stepper, const ForcingOperator& forcing,
                            const Trajectory& traj) {
  Trajectory again = solve_linear_inhomogeneous(
      stepper, traj[0], interpolated_forcing(forcing, traj), traj.t0(), traj.size() - 1);
  return sup_energy_distance(forcing.operators(), again, traj);
}

double estimate_contraction(double radius, double window, double alpha, int m) {
  if (!(radius > 0.0) || !(window > 0.0) || alpha < 0.0 || m < 1)
    throw std::invalid_argument("estimate_contraction: need R, T > 0, alpha >= 0, m >= 1");
  return window * alpha * (2.0 * m + 1.0) * std::pow(0.5 * radius, 2 * m);
}

double certified_error_bound(double tolerance, double gamma) {
  if (gamma >= 1.0) return std::numeric_limits<double>::infinity();
  return tolerance * gamma / (1.0 - gamma);
}

}  // namespace degenwave
