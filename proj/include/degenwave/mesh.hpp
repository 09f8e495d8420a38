#pragma once

// Piecewise-linear finite elements on (0, 1) with homogeneous Dirichlet
// conditions. Only interior nodes x_i = i h, i = 1..N carry unknowns.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>

#include "degenwave/dense.hpp"

namespace degenwave {

class Mesh {
 public:
  // Throws std::invalid_argument for interior_nodes == 0.
  explicit Mesh(std::size_t interior_nodes);

  std::size_t size() const { return n_; }
  double h() const { return h_; }
  double node(std::size_t i) const { return static_cast<double>(i + 1) * h_; }
  Vector nodes() const;

 private:
  std::size_t n_;
  double h_;
};

Mesh build_mesh(std::size_t interior_nodes);

// Symmetric tridiagonal matrix stored by its diagonal and first off-diagonal.
class SymTridiagonal {
 public:
  SymTridiagonal() = default;
  SymTridiagonal(Vector diag, Vector off);

  std::size_t size() const { return diag_.size(); }
  const Vector& diag() const { return diag_; }
  const Vector& off() const { return off_; }

  void apply(std::span<const double> x, std::span<double> y) const;
  double quadratic_form(std::span<const double> x) const;
  DenseMatrix to_dense() const;

 private:
  Vector diag_;
  Vector off_;
};

// L D L^T factorization of an SPD tridiagonal matrix.
class TridiagonalCholesky {
 public:
  // Throws std::domain_error if a pivot is not positive.
  explicit TridiagonalCholesky(const SymTridiagonal& a);

  void solve_in_place(std::span<double> x) const;
  Vector solve(std::span<const double> b) const;

 private:
  Vector pivots_;  // D
  Vector lower_;   // subdiagonal of unit L
};

// C_pqrs = integral of phi_p phi_q phi_r phi_s. Nonzero only when all indices
// lie in {i, i+1} for some i; the value depends only on how many indices sit
// on each of the two nodes, giving three distinct values.
class QuarticTensor {
 public:
  explicit QuarticTensor(double h);

  double self_value() const { return self_; }    // all four indices equal
  double three_one() const { return three_one_; }  // 3 + 1 split on an element
  double two_two() const { return two_two_; }    // 2 + 2 split on an element
  std::array<double, 3> distinct_values() const { return {self_, three_one_, two_two_}; }

  double entry(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const;

  // out_p = sum_{q,r,s} C_pqrs a_q b_r c_s
  void contract(std::span<const double> a, std::span<const double> b,
                std::span<const double> c, std::span<double> out) const;

 private:
  double self_;
  double three_one_;
  double two_two_;
};

struct SpatialOperators {
  Mesh mesh;
  SymTridiagonal mass;
  SymTridiagonal stiffness;
  QuarticTensor quartic;
  TridiagonalCholesky mass_factor;
  TridiagonalCholesky stiffness_factor;

  std::size_t size() const { return mesh.size(); }
};

SpatialOperators assemble(const Mesh& mesh);

using ScalarFunction = std::function<double(double)>;

// Load vector (g, phi_i) with `points`-point Gauss quadrature per element.
Vector load_vector(const Mesh& mesh, const ScalarFunction& g, int points = 4);

// Load vector (g', phi_i') for the H1_0 Ritz projection. phi_i' is constant on
// each element, so the integral reduces exactly to nodal differences of g.
Vector ritz_load(const Mesh& mesh, const ScalarFunction& g);

Vector ritz_project_h1(const SpatialOperators& ops, const ScalarFunction& g);
Vector l2_project(const SpatialOperators& ops, const ScalarFunction& g, int points = 4);
Vector interpolate(const Mesh& mesh, const ScalarFunction& g);

struct Eigenpair {
  double eigenvalue;
  Vector nodal;  // sqrt(2) sin(k pi x_i)
};

double laplacian_eigenvalue(std::size_t k);
double laplacian_eigenfunction(std::size_t k, double x);
Eigenpair eigenpair(const Mesh& mesh, std::size_t k);

// |u|_0 and |u|_1 of the piecewise-linear function with nodal values u.
double l2_norm(const SpatialOperators& ops, std::span<const double> u);
double h1_seminorm(const SpatialOperators& ops, std::span<const double> u);

// Value of the piecewise-linear interpolant with nodal values u at x in [0,1].
double evaluate(const Mesh& mesh, std::span<const double> u, double x);

}  // namespace degenwave
