#pragma once
// Small dense linear algebra backing the geometric predicates: LU solves in
// long double with one round of iterative refinement, determinants, and an
// exact rational fallback for determinant signs that land inside the
// predicate tolerance band.

#include <span>
#include <vector>

#include "spoly/common.hpp"

namespace spoly {

// Row-major square matrix of small order (predicates use order <= kMaxDim+1,
// but nothing here assumes a hard cap).
struct SquareMatrix {
  int order = 0;
  std::vector<double> a;

  SquareMatrix() = default;
  explicit SquareMatrix(int ord) : order(ord), a(std::size_t(ord) * std::size_t(ord), 0.0) {}

  double& at(int r, int c) { return a[std::size_t(r) * std::size_t(order) + std::size_t(c)]; }
  double at(int r, int c) const { return a[std::size_t(r) * std::size_t(order) + std::size_t(c)]; }

  static SquareMatrix identity(int ord);
};

// Solves m x = rhs by partially pivoted LU in long double followed by one
// step of iterative refinement. Throws DegeneracyError when a pivot collapses
// relative to the matrix scale, DomainError on shape mismatch.
std::vector<double> solve_linear(const SquareMatrix& m, std::span<const double> rhs);

// Determinant via the same long double LU. The magnitude is reliable away
// from zero; for trustworthy signs near zero use determinant_sign.
double determinant(const SquareMatrix& m);

// Sign of det(m) as -1, 0 or +1. Trusts the floating determinant when it
// clears tolerances().predicate times the Hadamard row bound, otherwise
// re-runs the elimination in exact rational arithmetic (doubles convert
// exactly, so the result is the true sign of the stored matrix).
int determinant_sign(const SquareMatrix& m);

// True when determinant_sign(m) would need the exact fallback.
bool determinant_needs_exact(const SquareMatrix& m);

}  // namespace spoly
