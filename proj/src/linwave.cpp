#include "degenwave/linwave.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "degenwave/errors.hpp"

namespace degenwave {

ModalState exact_group(const ModalState& modal, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("exact_group: t not finite");
  std::set<std::size_t> seen;
  ModalState out;
  out.modes.reserve(modal.modes.size());
  for (const auto& m : modal.modes) {
    if (m.k == 0 || !seen.insert(m.k).second)
      throw std::invalid_argument("exact_group: mode indices must be distinct and >= 1");
    const double w = std::sqrt(laplacian_eigenvalue(m.k));
    const double c = std::cos(w * t), s = std::sin(w * t);
    out.modes.push_back({m.k, c * m.a + s / w * m.b, -w * s * m.a + c * m.b});
  }
  return out;
}

double modal_energy(const ModalCoefficient& c) {
  return 0.5 * laplacian_eigenvalue(c.k) * c.a * c.a + 0.5 * c.b * c.b;
}

NewtonCotesWeights newton_cotes(NewtonCotesRule rule) {
  switch (rule) {
    case NewtonCotesRule::boole:
      return {5, {7.0 / 90, 32.0 / 90, 12.0 / 90, 32.0 / 90, 7.0 / 90}};
    case NewtonCotesRule::simpson38:
      return {4, {1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8}};
  }
  throw std::invalid_argument("unknown Newton-Cotes rule");
}

DuhamelStepper::DuhamelStepper(const BlockGenerator& gen, double delta,
                               NewtonCotesRule rule)
    : delta_(delta),
      weights_(newton_cotes(rule)),
      prop_(gen, delta / static_cast<double>(newton_cotes(rule).points - 1),
            newton_cotes(rule).points - 1) {
  if (!(delta > 0.0)) throw std::invalid_argument("DuhamelStepper: delta must be > 0");
}

double DuhamelStepper::abscissa(std::size_t j) const {
  return delta_ * static_cast<double>(j) / static_cast<double>(weights_.points - 1);
}

void DuhamelStepper::step(const State& y, std::span<const Vector> forcing,
                          State& out) const {
  const std::size_t m = weights_.points;
  if (forcing.size() != m)
    throw std::invalid_argument("duhamel step: expected one forcing sample per abscissa");
  const std::size_t n = y.dofs();
  // The j = 0 term shares Q^{m-1} with the homogeneous part.
  State shifted = y;
  auto sv = shifted.v();
  const double w0 = delta_ * weights_.weights[0];
  for (std::size_t i = 0; i < n; ++i) sv[i] += w0 * forcing[0][i];
  prop_.apply(m - 1, shifted, out);
  Vector scaled(n);
  for (std::size_t j = 1; j < m; ++j) {
    if (forcing[j].size() != n) throw std::invalid_argument("duhamel step: forcing size");
    const double w = delta_ * weights_.weights[j];
    for (std::size_t i = 0; i < n; ++i) scaled[i] = w * forcing[j][i];
    prop_.apply_forcing_add(m - 1 - j, scaled, out);
  }
}

void Trajectory::append_continuation(const Trajectory& other) {
  if (other.empty()) return;
  if (empty()) {
    *this = other;
    return;
  }
  if (std::abs(other.step() - step_) > 1e-12 * step_ ||
      std::abs(other.t0() - end_time()) > 1e-9 * std::max(1.0, end_time()))
    throw std::invalid_argument("append_continuation: time grids do not line up");
  states_.insert(states_.end(), other.states_.begin() + 1, other.states_.end());
}

Trajectory solve_linear_inhomogeneous(const DuhamelStepper& stepper, const State& y0,
                                      const TimeForcing& forcing, double t0,
                                      std::size_t steps) {
  const std::size_t n = y0.dofs();
  const std::size_t m = stepper.points();
  const double delta = stepper.delta();
  Trajectory traj(t0, delta);
  traj.reserve(steps + 1);
  traj.push_back(y0);
  std::vector<Vector> samples(m, Vector(n, 0.0));
  if (forcing) forcing(t0, samples[0]);
  State next(n);
  for (std::size_t s = 0; s < steps; ++s) {
    const double tbar = t0 + static_cast<double>(s) * delta;
    if (forcing) {
      for (std::size_t j = 1; j < m; ++j) {
        const double tj = j + 1 == m ? t0 + static_cast<double>(s + 1) * delta
                                     : tbar + stepper.abscissa(j);
        forcing(tj, samples[j]);
      }
    }
    stepper.step(traj.back(), samples, next);
    traj.push_back(next);
    if (forcing) std::swap(samples[0], samples[m - 1]);
  }
  return traj;
}

Trajectory solve_linear_inhomogeneous(const DuhamelStepper& stepper, const State& y0,
                                      const TimeForcing& forcing, double horizon) {
  const double ratio = horizon / stepper.delta();
  const double steps = std::round(ratio);
  if (!(horizon >= 0.0) || std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("solve_linear_inhomogeneous: horizon is not a multiple of delta");
  return solve_linear_inhomogeneous(stepper, y0, forcing, 0.0,
                                    static_cast<std::size_t>(steps));
}

namespace {

double damped_frequency(double beta, std::size_t k) {
  const double lambda = laplacian_eigenvalue(k);
  if (!(beta > 0.0) || beta * beta >= 4.0 * lambda)
    throw std::invalid_argument(
        "analytic_linear_damped: requires 0 < beta < 2 sqrt(lambda_k) (underdamped)");
  return std::sqrt(lambda - 0.25 * beta * beta);
}

}  // namespace

double linear_damped_amplitude(double beta, std::size_t k, double c0, double t) {
  const double w = damped_frequency(beta, k);
  return c0 * std::exp(-0.5 * beta * t) *
         (std::cos(w * t) + beta / (2.0 * w) * std::sin(w * t));
}

double linear_damped_rate(double beta, std::size_t k, double c0, double t) {
  // d/dt of the amplitude: -(w + beta^2/(4w)) e^{-beta t/2} sin wt.
  const double w = damped_frequency(beta, k);
  return -c0 * std::exp(-0.5 * beta * t) * (w + beta * beta / (4.0 * w)) * std::sin(w * t);
}

NodalPair analytic_linear_damped(const Mesh& mesh, double beta, std::size_t k, double c0,
                                 double t) {
  const double a = linear_damped_amplitude(beta, k, c0, t);
  const double b = linear_damped_rate(beta, k, c0, t);
  NodalPair out{Vector(mesh.size()), Vector(mesh.size())};
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double s = std::sin(static_cast<double>(k) * std::numbers::pi * mesh.node(i));
    out.u[i] = a * s;
    out.v[i] = b * s;
  }
  return out;
}

}  // namespace degenwave
