#include "degenwave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "degenwave/quadrature.hpp"

namespace degenwave {

Mesh::Mesh(std::size_t interior_nodes)
    : n_(interior_nodes), h_(1.0 / static_cast<double>(interior_nodes + 1)) {
  if (interior_nodes == 0)
    throw std::invalid_argument("mesh needs at least one interior node");
}

Vector Mesh::nodes() const {
  Vector x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
  return x;
}

Mesh build_mesh(std::size_t interior_nodes) { return Mesh(interior_nodes); }

SymTridiagonal::SymTridiagonal(Vector diag, Vector off)
    : diag_(std::move(diag)), off_(std::move(off)) {
  if (!diag_.empty() && off_.size() + 1 != diag_.size())
    throw std::invalid_argument("SymTridiagonal: off-diagonal length");
}

void SymTridiagonal::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = diag_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag_[i] * x[i];
    if (i > 0) s += off_[i - 1] * x[i - 1];
    if (i + 1 < n) s += off_[i] * x[i + 1];
    y[i] = s;
  }
}

double SymTridiagonal::quadratic_form(std::span<const double> x) const {
  const std::size_t n = diag_.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += diag_[i] * x[i] * x[i];
    if (i + 1 < n) s += 2.0 * off_[i] * x[i] * x[i + 1];
  }
  return s;
}

DenseMatrix SymTridiagonal::to_dense() const {
  const std::size_t n = diag_.size();
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = diag_[i];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = off_[i];
  }
  return m;
}

TridiagonalCholesky::TridiagonalCholesky(const SymTridiagonal& a)
    : pivots_(a.size()), lower_(a.size() > 0 ? a.size() - 1 : 0) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    double d = a.diag()[i];
    if (i > 0) d -= lower_[i - 1] * lower_[i - 1] * pivots_[i - 1];
    if (!(d > 0.0)) throw std::domain_error("matrix is not positive definite");
    pivots_[i] = d;
    if (i + 1 < n) lower_[i] = a.off()[i] / d;
  }
}

void TridiagonalCholesky::solve_in_place(std::span<double> x) const {
  const std::size_t n = pivots_.size();
  for (std::size_t i = 1; i < n; ++i) x[i] -= lower_[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= pivots_[i];
  for (std::size_t i = n; i-- > 1;) x[i - 1] -= lower_[i - 1] * x[i];
}

Vector TridiagonalCholesky::solve(std::span<const double> b) const {
  Vector x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

QuarticTensor::QuarticTensor(double h)
    : self_(2.0 * h / 5.0), three_one_(h / 20.0), two_two_(h / 30.0) {}

double QuarticTensor::entry(std::size_t p, std::size_t q, std::size_t r,
                            std::size_t s) const {
  std::array<std::size_t, 4> idx{p, q, r, s};
  std::sort(idx.begin(), idx.end());
  if (idx[3] - idx[0] > 1) return 0.0;
  const auto low = std::count(idx.begin(), idx.end(), idx[0]);
  switch (low) {
    case 4: return self_;
    case 2: return two_two_;
    default: return three_one_;
  }
}

void QuarticTensor::contract(std::span<const double> a, std::span<const double> b,
                             std::span<const double> c, std::span<double> out) const {
  const std::size_t n = out.size();
  for (std::size_t p = 0; p < n; ++p) {
    const double ap = a[p], bp = b[p], cp = c[p];
    double s = self_ * ap * bp * cp;
    auto neighbour = [&](std::size_t q) {
      const double aq = a[q], bq = b[q], cq = c[q];
      s += three_one_ * (aq * bp * cp + ap * bq * cp + ap * bp * cq + aq * bq * cq);
      s += two_two_ * (aq * bq * cp + aq * bp * cq + ap * bq * cq);
    };
    if (p > 0) neighbour(p - 1);
    if (p + 1 < n) neighbour(p + 1);
    out[p] = s;
  }
}

SpatialOperators assemble(const Mesh& mesh) {
  const std::size_t n = mesh.size();
  const double h = mesh.h();
  SymTridiagonal mass(Vector(n, 2.0 * h / 3.0), Vector(n - 1, h / 6.0));
  SymTridiagonal stiffness(Vector(n, 2.0 / h), Vector(n - 1, -1.0 / h));
  TridiagonalCholesky mass_factor(mass);
  TridiagonalCholesky stiffness_factor(stiffness);
  return SpatialOperators{mesh,        std::move(mass),        std::move(stiffness),
                          QuarticTensor(h), std::move(mass_factor),
                          std::move(stiffness_factor)};
}

Vector load_vector(const Mesh& mesh, const ScalarFunction& g, int points) {
  const std::size_t n = mesh.size();
  const double h = mesh.h();
  const QuadratureRule rule = gauss_legendre_unit(points);
  Vector b(n, 0.0);
  // Element e spans [e h, (e+1) h], e = 0..n; left node index e-1, right e.
  for (std::size_t e = 0; e <= n; ++e) {
    double left = 0.0, right = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = rule.nodes[q];
      const double val = g((static_cast<double>(e) + s) * h) * rule.weights[q] * h;
      left += val * (1.0 - s);
      right += val * s;
    }
    if (e > 0) b[e - 1] += left;
    if (e < n) b[e] += right;
  }
  return b;
}

Vector ritz_load(const Mesh& mesh, const ScalarFunction& g) {
  const std::size_t n = mesh.size();
  const double h = mesh.h();
  Vector b(n, 0.0);
  // phi_i' = +1/h on the left element, -1/h on the right one.
  for (std::size_t i = 0; i < n; ++i) {
    const double xl = static_cast<double>(i) * h;
    const double xc = static_cast<double>(i + 1) * h;
    const double xr = static_cast<double>(i + 2) * h;
    b[i] = (g(xc) - g(xl)) / h - (g(xr) - g(xc)) / h;
  }
  return b;
}

Vector ritz_project_h1(const SpatialOperators& ops, const ScalarFunction& g) {
  return ops.stiffness_factor.solve(ritz_load(ops.mesh, g));
}

Vector l2_project(const SpatialOperators& ops, const ScalarFunction& g, int points) {
  return ops.mass_factor.solve(load_vector(ops.mesh, g, points));
}

Vector interpolate(const Mesh& mesh, const ScalarFunction& g) {
  Vector c(mesh.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = g(mesh.node(i));
  return c;
}

double laplacian_eigenvalue(std::size_t k) {
  const double kp = static_cast<double>(k) * std::numbers::pi;
  return kp * kp;
}

double laplacian_eigenfunction(std::size_t k, double x) {
  return std::numbers::sqrt2 * std::sin(static_cast<double>(k) * std::numbers::pi * x);
}

Eigenpair eigenpair(const Mesh& mesh, std::size_t k) {
  if (k == 0) throw std::invalid_argument("eigenpair: k must be >= 1");
  return {laplacian_eigenvalue(k),
          interpolate(mesh, [k](double x) { return laplacian_eigenfunction(k, x); })};
}

double l2_norm(const SpatialOperators& ops, std::span<const double> u) {
  return std::sqrt(std::max(0.0, ops.mass.quadratic_form(u)));
}

double h1_seminorm(const SpatialOperators& ops, std::span<const double> u) {
  return std::sqrt(std::max(0.0, ops.stiffness.quadratic_form(u)));
}

double evaluate(const Mesh& mesh, std::span<const double> u, double x) {
  const std::size_t n = mesh.size();
  const double s = x / mesh.h();
  const auto e = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, static_cast<double>(n)));
  const double w = s - static_cast<double>(e);
  const double left = e > 0 ? u[e - 1] : 0.0;
  const double right = e < n ? u[e] : 0.0;
  return (1.0 - w) * left + w * right;
}

}  // namespace degenwave
