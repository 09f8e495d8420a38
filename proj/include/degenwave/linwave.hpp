#pragma once

// Linear wave solvers: the spectral group of the continuous problem, the
// Duhamel integrator with Newton-Cotes quadrature, and the analytic
// single-mode solution with linear damping.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "degenwave/linop.hpp"

namespace degenwave {

struct ModalCoefficient {
  std::size_t k;
  double a;  // displacement coefficient on E_k
  double b;  // velocity coefficient on E_k
};

struct ModalState {
  std::vector<ModalCoefficient> modes;
};

// Per-mode rotation with frequency sqrt(lambda_k). Throws on repeated or
// zero mode indices.
ModalState exact_group(const ModalState& modal, double t);

double modal_energy(const ModalCoefficient& c);

enum class NewtonCotesRule { boole, simpson38 };

struct NewtonCotesWeights {
  std::size_t points;
  std::vector<double> weights;  // sum to 1: integral = length * sum w_j f_j
};

NewtonCotesWeights newton_cotes(NewtonCotesRule rule);

// Precomputed propagator powers for one Duhamel step of length delta: the
// substep is delta / (points - 1) and Q^{points-1} advances a full step.
class DuhamelStepper {
 public:
  DuhamelStepper(const BlockGenerator& gen, double delta,
                 NewtonCotesRule rule = NewtonCotesRule::boole);

  double delta() const { return delta_; }
  std::size_t points() const { return weights_.points; }
  const Propagator& propagator() const { return prop_; }
  // Offset of abscissa j from the step start.
  double abscissa(std::size_t j) const;

  // y(t) = Q^{m-1} y(tbar) + delta sum_j w_j Q^{m-1-j} (0, f_j).
  // `forcing` holds one velocity forcing vector per abscissa.
  void step(const State& y, std::span<const Vector> forcing, State& out) const;

 private:
  double delta_;
  NewtonCotesWeights weights_;
  Propagator prop_;
};

class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(double t0, double step) : t0_(t0), step_(step) {}

  double t0() const { return t0_; }
  double step() const { return step_; }
  double time(std::size_t i) const { return t0_ + static_cast<double>(i) * step_; }
  double end_time() const { return states_.empty() ? t0_ : time(states_.size() - 1); }
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }

  const State& operator[](std::size_t i) const { return states_[i]; }
  State& operator[](std::size_t i) { return states_[i]; }
  const State& back() const { return states_.back(); }
  const std::vector<State>& states() const { return states_; }

  void push_back(State s) { states_.push_back(std::move(s)); }
  void reserve(std::size_t n) { states_.reserve(n); }

  // Appends other, whose first state must coincide in time with our last.
  void append_continuation(const Trajectory& other);

 private:
  double t0_ = 0.0;
  double step_ = 0.0;
  std::vector<State> states_;
};

// Velocity-block forcing f(t) written into out (length N).
using TimeForcing = std::function<void(double t, std::span<double> out)>;

// Steps count * delta from y0 at t0. A null forcing means the homogeneous problem.
Trajectory solve_linear_inhomogeneous(const DuhamelStepper& stepper, const State& y0,
                                      const TimeForcing& forcing, double t0,
                                      std::size_t steps);

// Convenience overload over [0, T]; T must be a multiple of delta.
Trajectory solve_linear_inhomogeneous(const DuhamelStepper& stepper, const State& y0,
                                      const TimeForcing& forcing, double horizon);

struct NodalPair {
  Vector u;
  Vector v;
};

// u(t,x) = c0 e^{-beta t/2} [cos wt + beta/(2w) sin wt] sin(k pi x),
// w = sqrt(lambda_k - beta^2/4). Underdamped regime only.
double linear_damped_amplitude(double beta, std::size_t k, double c0, double t);
double linear_damped_rate(double beta, std::size_t k, double c0, double t);
NodalPair analytic_linear_damped(const Mesh& mesh, double beta, std::size_t k, double c0,
                                 double t);

}  // namespace degenwave
