#include "degenwave/multistep.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "degenwave/errors.hpp"
#include "degenwave/kernels.hpp"

namespace degenwave {

ABState ab5_init(std::span<const double> times, std::span<const Vector> tail,
                 const RhsFunction& rhs) {
  if (times.size() != 5 || tail.size() != 5)
    throw std::invalid_argument("ab5_init: need exactly five history points");
  const double step = times[1] - times[0];
  if (!(step > 0.0)) throw std::invalid_argument("ab5_init: times must increase");
  for (std::size_t i = 1; i < 5; ++i)
    if (std::abs((times[i] - times[i - 1]) - step) > 1e-9 * step)
      throw std::invalid_argument("ab5_init: history is not uniformly spaced");
  ABState state;
  state.step = step;
  for (std::size_t i = 0; i < 5; ++i) {
    ABEntry& e = state.history[4 - i];
    e.t = times[i];
    e.y = tail[i];
    e.g.assign(e.y.size(), 0.0);
    rhs(e.t, e.y, e.g);
  }
  return state;
}

const Vector& ab5_step(ABState& state, const RhsFunction& rhs) {
  ABEntry next{state.history[0].t + state.step, state.history[0].y, {}};
  for (std::size_t j = 0; j < 5; ++j)
    kernels::axpy(state.step * kAdamsBashforth5[j], state.history[j].g, next.y);
  next.g.assign(next.y.size(), 0.0);
  rhs(next.t, next.y, next.g);
  for (std::size_t j = 4; j > 0; --j) state.history[j] = std::move(state.history[j - 1]);
  state.history[0] = std::move(next);
  return state.history[0].y;
}

RhsFunction semilinear_rhs(const BlockGenerator& gen, const ForcingOperator& forcing) {
  const std::size_t n = gen.dofs();
  return [&gen, &forcing, n, y_state = State(n), g_state = State(n),
          f = Vector(n)](double, std::span<const double> y, std::span<double> g) mutable {
    std::copy(y.begin(), y.end(), y_state.data().begin());
    gen.apply(y_state, g_state);
    forcing.evaluate(y_state, f);
    auto gv = g_state.v();
    for (std::size_t i = 0; i < n; ++i) gv[i] += f[i];
    std::copy(g_state.data().begin(), g_state.data().end(), g.begin());
  };
}

ExponentialAB5::ExponentialAB5(const BlockGenerator& gen, const ForcingOperator& forcing,
                               double delta)
    : forcing_(&forcing), prop_(gen, delta, 5), current_(gen.dofs()), next_(gen.dofs()) {}

void ExponentialAB5::init(std::span<const State> tail, double t_last) {
  if (tail.size() != 5) throw std::invalid_argument("ExponentialAB5: need five history states");
  for (std::size_t i = 0; i < 5; ++i) {
    history_[4 - i].assign(tail[i].dofs(), 0.0);
    forcing_->evaluate(tail[i], history_[4 - i]);
  }
  current_ = tail[4];
  t_ = t_last;
  ready_ = true;
}

const State& ExponentialAB5::step() {
  if (!ready_) throw std::logic_error("ExponentialAB5: step before init");
  const std::size_t n = current_.dofs();
  prop_.apply(1, current_, next_);
  Vector scaled(n);
  for (std::size_t j = 0; j < 5; ++j) {
    const double w = prop_.tau() * kAdamsBashforth5[j];
    for (std::size_t i = 0; i < n; ++i) scaled[i] = w * history_[j][i];
    prop_.apply_forcing_add(j + 1, scaled, next_);
  }
  std::swap(current_, next_);
  t_ += prop_.tau();
  for (std::size_t j = 4; j > 0; --j) std::swap(history_[j], history_[j - 1]);
  forcing_->evaluate(current_, history_[0]);
  return current_;
}

Trajectory extend_trajectory(const Trajectory& traj, const BlockGenerator& gen,
                             const ForcingOperator& forcing, double t_final,
                             const ExtensionOptions& opts) {
  const double delta = traj.step();
  const double t1 = traj.end_time();
  if (t_final < t1 - 1e-12) throw std::invalid_argument("extend_trajectory: t_final before end");
  const auto extra = static_cast<std::size_t>(std::llround((t_final - t1) / delta));
  if (extra == 0) return traj;
  if (std::abs(t1 + static_cast<double>(extra) * delta - t_final) > 1e-9 * std::max(1.0, t_final))
    throw std::invalid_argument("extend_trajectory: delta must divide the extension");
  if (traj.size() < 5) throw std::invalid_argument("extend_trajectory: need at least five states");

  const SpatialOperators& ops = gen.operators();
  const double e_ref = energy(ops, traj.back());
  const double limit = opts.blowup_factor * std::max(e_ref, 1e-300);
  auto check = [&](const State& y, double t) {
    const double e = energy(ops, y);
    if (!std::isfinite(e) || e > limit) {
      std::ostringstream msg;
      msg << "Adams-Bashforth blow-up at t = " << t << ": energy " << e << " exceeds "
          << opts.blowup_factor << "x the handoff energy " << e_ref
          << "; the explicit scheme is unstable at delta = " << delta
          << ", use a smaller step";
      throw NumericalFailure(msg.str());
    }
  };

  Trajectory out = traj;
  out.reserve(traj.size() + extra);
  const std::size_t first = traj.size() - 5;
  if (opts.scheme == ABScheme::exponential) {
    ExponentialAB5 ab(gen, forcing, delta);
    ab.init(std::span<const State>(traj.states()).subspan(first, 5), t1);
    for (std::size_t s = 0; s < extra; ++s) {
      const State& y = ab.step();
      check(y, ab.time());
      out.push_back(y);
    }
  } else {
    std::array<double, 5> times{};
    std::array<Vector, 5> tail;
    for (std::size_t i = 0; i < 5; ++i) {
      times[i] = traj.time(first + i);
      const auto d = traj[first + i].data();
      tail[i].assign(d.begin(), d.end());
    }
    const RhsFunction rhs = semilinear_rhs(gen, forcing);
    ABState state = ab5_init(times, tail, rhs);
    const std::size_t n = gen.dofs();
    for (std::size_t s = 0; s < extra; ++s) {
      const Vector& y = ab5_step(state, rhs);
      State st(std::span<const double>(y.data(), n), std::span<const double>(y.data() + n, n));
      check(st, state.time());
      out.push_back(std::move(st));
    }
  }
  return out;
}

}  // namespace degenwave
