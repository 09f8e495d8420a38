#pragma once

// Successive approximations for u'' - u_xx + d(u, u') = 0: each iterate solves
// the linear wave problem forced by the damping of the previous iterate.

#include <cstddef>
#include <span>
#include <vector>

#include "degenwave/linwave.hpp"

namespace degenwave {

// The damping term d(u, v) moved to the right-hand side as -R0_h d(u, v).
struct DampingLaw {
  enum class Kind {
    degenerate,  // alpha u^{2m} v
    linear,      // beta v
    primitive,   // alpha v^{2m+1} / (2m+1)
  };
  Kind kind = Kind::degenerate;
  double coefficient = 1.0;
  int m = 1;

  static DampingLaw degenerate(double alpha, int m) { return {Kind::degenerate, alpha, m}; }
  static DampingLaw linear(double beta) { return {Kind::linear, beta, 0}; }
  static DampingLaw primitive(double alpha, int m) { return {Kind::primitive, alpha, m}; }

  bool is_zero() const { return coefficient == 0.0; }
  // Pointwise value of d(u, v).
  double pointwise(double u, double v) const;
};

class ForcingOperator {
 public:
  ForcingOperator(const SpatialOperators& ops, DampingLaw law);

  const DampingLaw& law() const { return law_; }
  const SpatialOperators& operators() const { return *ops_; }

  // out = -M^{-1} (d(u_h, v_h), phi_i). m = 1 laws use the quartic tensor,
  // others per-element Gauss quadrature exact for the polynomial integrand.
  void evaluate(std::span<const double> u, std::span<const double> v,
                std::span<double> out) const;
  void evaluate(const State& y, std::span<double> out) const { evaluate(y.u(), y.v(), out); }

 private:
  void quadrature_load(std::span<const double> u, std::span<const double> v,
                       std::span<double> load) const;

  const SpatialOperators* ops_;
  DampingLaw law_;
  int gauss_points_;
};

// Coefficients of -R0_h[alpha u^{2m} v].
Vector cubic_forcing(const SpatialOperators& ops, std::span<const double> u,
                     std::span<const double> v, double alpha, int m);

struct PicardConfig {
  double window = 1.0;  // length of each contraction window
  double delta = 2e-3;
  int max_iterations = 50;
  double tolerance = 1e-8;  // sup-in-time energy-norm distance of iterates
  int divergence_patience = 3;
};

struct WindowReport {
  double t0 = 0.0;
  int iterations = 0;
  double distance = 0.0;
  bool converged = false;
  std::vector<double> distances;
};

struct PicardResult {
  Trajectory trajectory;
  std::vector<WindowReport> windows;

  bool converged() const;
  int max_iterations() const;
  double max_distance() const;
};

// sup_i ||a_i - b_i||_E over two trajectories on the same grid.
double sup_energy_distance(const SpatialOperators& ops, const Trajectory& a,
                           const Trajectory& b);

// One contraction window of `steps` steps from y0 at t0. Throws
// NumericalFailure when the distance grows for divergence_patience
// consecutive iterations.
WindowReport picard_window(const DuhamelStepper& stepper, const ForcingOperator& forcing,
                           const State& y0, double t0, std::size_t steps,
                           const PicardConfig& config, Trajectory& out);

// [0, horizon] split into windows of config.window, each restarted from the
// previous window's endpoint.
PicardResult picard_solve(const DuhamelStepper& stepper, const ForcingOperator& forcing,
                          const State& y0, double horizon, const PicardConfig& config);

// Re-solves the linear problem forced by `traj` itself and returns the
// sup energy distance to it (zero for an exact fixed point).
double fixed_point_residual(const DuhamelStepper& stepper, const ForcingOperator& forcing,
                            const Trajectory& traj);

// Upper bound on the Lipschitz constant of the Picard map on the ball of
// radius R in H^1_0 x L^2 over a window of length T:
//   gamma = T alpha (2m+1) (R/2)^{2m},
// from ||w||_inf <= |w|_1 / 2 on H^1_0(0,1) and |M(s,r)| <= 2m alpha (R/2)^{2m-1}.
double estimate_contraction(double radius, double window, double alpha, int m);

// eps gamma / (1 - gamma); infinity when gamma >= 1.
double certified_error_bound(double tolerance, double gamma);

}  // namespace degenwave
