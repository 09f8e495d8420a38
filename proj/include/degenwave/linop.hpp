#pragma once

// The semi-discrete wave generator y' = A_h y with y = (u, v) and
// A_h (u, v) = (v, -M^{-1} K u), its exponential, and the discrete energy.

#include <cstddef>
#include <span>
#include <vector>

#include "degenwave/dense.hpp"
#include "degenwave/mesh.hpp"

namespace degenwave {

// Displacement and velocity coefficients stored contiguously as (u, v).
class State {
 public:
  State() = default;
  explicit State(std::size_t dofs) : dofs_(dofs), y_(2 * dofs, 0.0) {}
  State(std::span<const double> u, std::span<const double> v);

  std::size_t dofs() const { return dofs_; }
  std::span<double> u() { return {y_.data(), dofs_}; }
  std::span<double> v() { return {y_.data() + dofs_, dofs_}; }
  std::span<const double> u() const { return {y_.data(), dofs_}; }
  std::span<const double> v() const { return {y_.data() + dofs_, dofs_}; }
  std::span<double> data() { return y_; }
  std::span<const double> data() const { return y_; }

  State& operator+=(const State& o);
  State& operator-=(const State& o);
  State& operator*=(double s);

 private:
  std::size_t dofs_ = 0;
  Vector y_;
};

State operator-(State a, const State& b);
State operator*(double s, State a);

class BlockGenerator {
 public:
  explicit BlockGenerator(const SpatialOperators& ops);

  std::size_t dofs() const { return ops_->size(); }
  const SpatialOperators& operators() const { return *ops_; }

  // out = A_h y
  void apply(const State& y, State& out) const;
  State apply(const State& y) const;

  // Dense 2N x 2N matrix of A_h.
  const DenseMatrix& dense() const { return dense_; }

 private:
  const SpatialOperators* ops_;
  DenseMatrix dense_;
};

BlockGenerator make_generator(const SpatialOperators& ops);

struct ExponentialOptions {
  double tolerance = 1e-16;  // Taylor tail bound relative to ||e^X||
  int max_squarings = 64;
};

// exp(tau A_h) by scaling and squaring with a truncated Taylor series. The
// degree/squaring pair is picked from ||tau A_h||_1 to minimise the number of
// matrix products subject to the tail bound. Throws NumericalFailure when the
// scaling cannot bring the norm into range.
DenseMatrix matrix_exponential(const DenseMatrix& x, const ExponentialOptions& opts = {});
DenseMatrix matrix_exponential(const BlockGenerator& gen, double tau,
                               const ExponentialOptions& opts = {});

// Powers Q^j = exp(j tau A_h), j = 0..max_power, of a single exponential.
class Propagator {
 public:
  Propagator(const BlockGenerator& gen, double tau, std::size_t max_power);

  double tau() const { return tau_; }
  std::size_t dofs() const { return dofs_; }
  std::size_t max_power() const { return powers_.size(); }

  // Q^j, 1 <= j <= max_power.
  const DenseMatrix& power(std::size_t j) const { return powers_.at(j - 1); }

  // out = Q^j y (j = 0 copies).
  void apply(std::size_t j, const State& y, State& out) const;
  // out += Q^j (0, f); uses the velocity column block only.
  void apply_forcing_add(std::size_t j, std::span<const double> f, State& out) const;

 private:
  double tau_;
  std::size_t dofs_;
  std::vector<DenseMatrix> powers_;
  std::vector<DenseMatrix> velocity_columns_;
};

// <y, z>_E = u^T K u' + v^T M v'
double energy_inner(const SpatialOperators& ops, const State& y, const State& z);
double energy_norm(const SpatialOperators& ops, const State& y);
// E = 1/2 u^T K u + 1/2 v^T M v
double energy(const SpatialOperators& ops, const State& y);

}  // namespace degenwave
