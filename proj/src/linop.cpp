#include "degenwave/linop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "degenwave/errors.hpp"
#include "degenwave/kernels.hpp"

namespace degenwave {

State::State(std::span<const double> u, std::span<const double> v)
    : dofs_(u.size()), y_(2 * u.size()) {
  if (v.size() != u.size()) throw std::invalid_argument("State: u/v size mismatch");
  std::copy(u.begin(), u.end(), y_.begin());
  std::copy(v.begin(), v.end(), y_.begin() + static_cast<std::ptrdiff_t>(dofs_));
}

State& State::operator+=(const State& o) {
  kernels::axpy(1.0, o.y_, y_);
  return *this;
}

State& State::operator-=(const State& o) {
  kernels::axpy(-1.0, o.y_, y_);
  return *this;
}

State& State::operator*=(double s) {
  for (double& x : y_) x *= s;
  return *this;
}

State operator-(State a, const State& b) { return a -= b; }
State operator*(double s, State a) { return a *= s; }

BlockGenerator::BlockGenerator(const SpatialOperators& ops) : ops_(&ops) {
  const std::size_t n = ops.size();
  dense_ = DenseMatrix(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) dense_(i, n + i) = 1.0;
  // Column j of -M^{-1} K is -M^{-1} K e_j.
  Vector col(n), ej(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(ej.begin(), ej.end(), 0.0);
    ej[j] = 1.0;
    ops.stiffness.apply(ej, col);
    ops.mass_factor.solve_in_place(col);
    for (std::size_t i = 0; i < n; ++i) dense_(n + i, j) = -col[i];
  }
}

void BlockGenerator::apply(const State& y, State& out) const {
  const auto u = y.u();
  auto ou = out.u();
  auto ov = out.v();
  std::copy(y.v().begin(), y.v().end(), ou.begin());
  ops_->stiffness.apply(u, ov);
  ops_->mass_factor.solve_in_place(ov);
  for (double& x : ov) x = -x;
}

State BlockGenerator::apply(const State& y) const {
  State out(y.dofs());
  apply(y, out);
  return out;
}

BlockGenerator make_generator(const SpatialOperators& ops) { return BlockGenerator(ops); }

namespace {

// Smallest Taylor degree q with theta^{q+1}/(q+1)! * e^theta <= tol.
int taylor_degree(double theta, double tol) {
  double term = 1.0;
  for (int q = 0; q < 60; ++q) {
    term *= theta / (q + 1);
    if (term * std::exp(theta) <= tol) return q;
  }
  return 60;
}

}  // namespace

DenseMatrix matrix_exponential(const DenseMatrix& x, const ExponentialOptions& opts) {
  if (x.rows() != x.cols()) throw std::invalid_argument("matrix_exponential: not square");
  const std::size_t n = x.rows();
  const double norm = x.norm1();
  if (!std::isfinite(norm))
    throw NumericalFailure("matrix_exponential: non-finite argument norm");
  if (norm == 0.0) return DenseMatrix::identity(n);

  // Minimise products: q - 1 for Horner, s for squaring.
  int best_s = -1, best_q = 0, best_cost = std::numeric_limits<int>::max();
  for (int s = 0; s <= opts.max_squarings; ++s) {
    const double theta = std::ldexp(norm, -s);
    if (theta > 2.0) continue;
    const int q = taylor_degree(theta, opts.tolerance);
    const int cost = std::max(q - 1, 0) + s;
    if (cost < best_cost) {
      best_cost = cost;
      best_s = s;
      best_q = q;
    }
  }
  if (best_s < 0)
    throw NumericalFailure("matrix_exponential: ||X||_1 = " + std::to_string(norm) +
                           " cannot be scaled into range with " +
                           std::to_string(opts.max_squarings) + " squarings");

  DenseMatrix scaled = x;
  scaled *= std::ldexp(1.0, -best_s);
  // Horner: I + X(I + X/2(I + X/3(...))).
  DenseMatrix result = DenseMatrix::identity(n);
  for (int k = best_q; k >= 1; --k) {
    DenseMatrix t = scaled * result;
    t *= 1.0 / k;
    for (std::size_t i = 0; i < n; ++i) t(i, i) += 1.0;
    result = std::move(t);
  }
  for (int i = 0; i < best_s; ++i) result = result * result;
  return result;
}

DenseMatrix matrix_exponential(const BlockGenerator& gen, double tau,
                               const ExponentialOptions& opts) {
  if (!std::isfinite(tau)) throw std::invalid_argument("matrix_exponential: tau not finite");
  DenseMatrix x = gen.dense();
  x *= tau;
  return matrix_exponential(x, opts);
}

Propagator::Propagator(const BlockGenerator& gen, double tau, std::size_t max_power)
    : tau_(tau), dofs_(gen.dofs()) {
  if (max_power == 0) throw std::invalid_argument("Propagator: max_power must be >= 1");
  powers_.reserve(max_power);
  powers_.push_back(matrix_exponential(gen, tau));
  for (std::size_t j = 1; j < max_power; ++j) powers_.push_back(powers_.back() * powers_.front());
  velocity_columns_.reserve(max_power);
  for (const auto& p : powers_) velocity_columns_.push_back(p.column_block(dofs_, dofs_));
}

void Propagator::apply(std::size_t j, const State& y, State& out) const {
  if (j == 0) {
    out = y;
    return;
  }
  power(j).multiply(y.data(), out.data());
}

void Propagator::apply_forcing_add(std::size_t j, std::span<const double> f,
                                   State& out) const {
  if (j == 0) {
    kernels::axpy(1.0, f, out.v());
    return;
  }
  velocity_columns_.at(j - 1).multiply_add(f, out.data());
}

double energy_inner(const SpatialOperators& ops, const State& y, const State& z) {
  const std::size_t n = ops.size();
  Vector tmp(n);
  ops.stiffness.apply(z.u(), tmp);
  double s = kernels::dot(y.u(), tmp);
  ops.mass.apply(z.v(), tmp);
  s += kernels::dot(y.v(), tmp);
  return s;
}

double energy_norm(const SpatialOperators& ops, const State& y) {
  return std::sqrt(std::max(0.0, 2.0 * energy(ops, y)));
}

double energy(const SpatialOperators& ops, const State& y) {
  if (y.dofs() != ops.size()) throw std::invalid_argument("energy: dimension mismatch");
  return 0.5 * ops.stiffness.quadratic_form(y.u()) + 0.5 * ops.mass.quadratic_form(y.v());
}

}  // namespace degenwave
