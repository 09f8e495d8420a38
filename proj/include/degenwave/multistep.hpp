#pragma once

// Five-step Adams-Bashforth continuation of a trajectory.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "degenwave/linwave.hpp"
#include "degenwave/picard.hpp"

namespace degenwave {

// Weights on g_n, g_{n-1}, ..., g_{n-4}.
inline constexpr std::array<double, 5> kAdamsBashforth5 = {
    1901.0 / 720.0, -2774.0 / 720.0, 2616.0 / 720.0, -1274.0 / 720.0, 251.0 / 720.0};

using RhsFunction = std::function<void(double t, std::span<const double> y, std::span<double> g)>;

struct ABEntry {
  double t;
  Vector y;
  Vector g;
};

// Last five (t, y, g) triples; history[0] is the newest.
struct ABState {
  double step = 0.0;
  std::array<ABEntry, 5> history;

  double time() const { return history[0].t; }
  const Vector& current() const { return history[0].y; }
};

// tail holds five uniformly spaced (oldest first) points. Throws
// std::invalid_argument on a wrong count or non-uniform spacing.
ABState ab5_init(std::span<const double> times, std::span<const Vector> tail,
                 const RhsFunction& rhs);

// y_{n+1} = y_n + step * sum_j b_j g_{n-j}; rotates the buffer and evaluates
// the right-hand side at the new point.
const Vector& ab5_step(ABState& state, const RhsFunction& rhs);

// Right-hand side of the full semi-discrete system, A_h y + (0, F(y)).
RhsFunction semilinear_rhs(const BlockGenerator& gen, const ForcingOperator& forcing);

enum class ABScheme {
  plain,        // AB5 applied to y' = A_h y + F(y)
  exponential,  // AB5 applied to z = e^{-t A_h} y; the linear part is exact
};

// Integrating-factor AB5: y_{n+1} = P y_n + delta sum_j b_j P^{j+1} (0, F_{n-j}).
class ExponentialAB5 {
 public:
  ExponentialAB5(const BlockGenerator& gen, const ForcingOperator& forcing, double delta);

  double delta() const { return prop_.tau(); }
  void init(std::span<const State> tail, double t_last);
  const State& step();
  const State& current() const { return current_; }
  double time() const { return t_; }

 private:
  const ForcingOperator* forcing_;
  Propagator prop_;
  std::array<Vector, 5> history_;  // F at t_n, t_{n-1}, ...
  State current_;
  State next_;
  double t_ = 0.0;
  bool ready_ = false;
};

struct ExtensionOptions {
  ABScheme scheme = ABScheme::exponential;
  double blowup_factor = 10.0;  // energy above this multiple of the handoff energy
};

// Continues traj to t_final with the same step, seeded from its last five
// states. Throws NumericalFailure on blow-up.
Trajectory extend_trajectory(const Trajectory& traj, const BlockGenerator& gen,
                             const ForcingOperator& forcing, double t_final,
                             const ExtensionOptions& opts = {});

}  // namespace degenwave
