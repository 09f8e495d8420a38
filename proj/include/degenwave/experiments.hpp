#pragma once

// Experiment drivers: frequency sweeps at fixed initial energy, comparison
// with the conservative flow, the velocity-potential ("primitive") problem,
// and decay diagnostics.

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "degenwave/multistep.hpp"
#include "degenwave/picard.hpp"

namespace degenwave {

struct RunMetadata {
  std::size_t k = 0;
  DampingLaw law;
  double h = 0.0;
  double delta = 0.0;
  std::string scheme;
};

struct EnergyTrace {
  RunMetadata meta;
  Vector times;
  Vector energy;
  Vector l2;  // |u|_0
  Vector h1;  // |u|_1

  std::size_t size() const { return times.size(); }
};

EnergyTrace make_energy_trace(const SpatialOperators& ops, const Trajectory& traj,
                              RunMetadata meta);

struct MonotonicityReport {
  double max_relative_increase = 0.0;  // over single steps
  bool nonincreasing = true;
  bool strictly_decreasing = true;  // over every unit window while E > floor
  double worst_window_ratio = 0.0;  // max E(t+window)/E(t) over checked windows
};

MonotonicityReport check_energy_monotonicity(const EnergyTrace& trace,
                                             double per_step_tolerance = 1e-6,
                                             double window = 1.0, double floor = 1e-4);

// u0 = (2 / (k pi)) sin(k pi x), u1 = 0: unit energy for every k.
double frequency_amplitude(std::size_t k);
State frequency_initial_state(const SpatialOperators& ops, std::size_t k);

struct SimulationOptions {
  double horizon = 10.0;
  double handoff = 10.0;  // Picard on [0, handoff], AB5 beyond
  PicardConfig picard;
  ABScheme ab_scheme = ABScheme::exponential;
};

struct SimulationRun {
  RunMetadata meta;
  Trajectory trajectory;
  EnergyTrace trace;
  std::vector<WindowReport> picard_windows;

  bool picard_converged() const;
};

// Owns the generator and propagator powers for one mesh and step; read-only
// after construction and shared across concurrent runs.
class Simulator {
 public:
  Simulator(const SpatialOperators& ops, double delta,
            NewtonCotesRule rule = NewtonCotesRule::boole);

  const SpatialOperators& operators() const { return *ops_; }
  const BlockGenerator& generator() const { return gen_; }
  const DuhamelStepper& stepper() const { return stepper_; }
  double delta() const { return stepper_.delta(); }
  NewtonCotesRule rule() const { return rule_; }

  SimulationRun run(const State& y0, const DampingLaw& law, const SimulationOptions& opts,
                    std::size_t k = 0) const;

 private:
  const SpatialOperators* ops_;
  NewtonCotesRule rule_;
  BlockGenerator gen_;
  DuhamelStepper stepper_;
};

// Largest k the mesh resolves: k <= N / 8.
std::size_t max_resolved_frequency(const Mesh& mesh);

// One run per k (in input order); runs fan out over the worker pool.
std::vector<SimulationRun> frequency_sweep(const Simulator& sim, const std::vector<std::size_t>& ks,
                                           const DampingLaw& law, const SimulationOptions& opts);

struct ConservativeComparison {
  Vector times;
  Vector energy_z;  // energy of u - w
  Vector energy_w;
};

// w evolves the same initial state under the undamped semi-discrete group.
ConservativeComparison conservative_comparison(const Simulator& sim, const Trajectory& u);

struct PrimitiveSetup {
  std::size_t k = 1;
  int m = 1;
  double alpha = 1.0;
  Vector potential;      // Phi: Phi'' = alpha u0^{2m+1}/(2m+1), Phi(0) = Phi(1) = 0
  Vector displacement;   // u0
  double h1_potential_sq = 0.0;  // |Phi|_1^2
  double l2_data_sq = 0.0;       // |u0|_0^2
  double elliptic_residual = 0.0;

  // 2 E_phi(0) = |Phi|_1^2 + |u0|_0^2
  double twice_initial_energy() const { return h1_potential_sq + l2_data_sq; }
  State initial_state() const { return State(potential, displacement); }
};

PrimitiveSetup primitive_setup(const SpatialOperators& ops, std::size_t k, int m,
                               double alpha = 1.0);

struct PrimitiveRun {
  SimulationRun run;
  double velocity_gap = -1.0;  // sup_t |phi_t - u|_0; negative when no reference given
};

// The velocity gap is measured for t <= gap_until (default: the Picard part).
PrimitiveRun primitive_solve(const Simulator& sim, const PrimitiveSetup& setup,
                             const SimulationOptions& opts, const Trajectory* reference = nullptr,
                             double gap_until = -1.0);

// sup over the common time grid, t <= until, of |phi_t(t) - u(t)|_0.
double velocity_gap(const SpatialOperators& ops, const Trajectory& primitive, const Trajectory& u,
                    double until = std::numeric_limits<double>::infinity());

struct DecayFit {
  double exponent = 0.0;  // p in E ~ c t^{-p}
  double log_prefactor = 0.0;
  std::size_t points = 0;
};

// Least squares of log E against log t over samples with t in [t1, t2].
DecayFit decay_rate_fit(const Vector& times, const Vector& values, double t1, double t2);
DecayFit decay_rate_fit(const EnergyTrace& trace, double t1, double t2);

struct LowerOrderReport {
  double bound = 0.0;  // |Phi|_1^2 + |u0|_0^2
  Vector times;
  Vector l2;
  std::size_t violations = 0;
  double min_slack = 0.0;  // min over t of bound - |u(t)|_0^2

  bool holds() const { return violations == 0; }
};

LowerOrderReport lower_order_decay(const EnergyTrace& trace, const PrimitiveSetup& setup);

// sum_j lambda_j^s c_j^2 with c_j the discrete sine coefficients of the nodal
// values (s = 0 gives the discrete L2 norm squared, s = 1/2 the H^{1/2} one).
double spectral_norm_sq(const Mesh& mesh, std::span<const double> u, double s);

}  // namespace degenwave
