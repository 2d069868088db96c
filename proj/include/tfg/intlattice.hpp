#pragma once

// Integer lattice algorithms: Hermite and Smith normal forms with transform
// tracking, unimodular completions, kernels and solvers.  Everything is exact
// over GMP integers; matrices are small (desk scale), so the classic
// textbook eliminations are the right tool.

#include "tfg/numeric.hpp"

namespace tfg {

/// Column-style Hermite normal form: A * U = [H | 0] with U unimodular,
/// H of full column rank in column echelon form.
struct ColHnf {
  MatZ H;       // m x rank
  MatZ U;       // k x k unimodular
  Eigen::Index rank = 0;
};
ColHnf col_hnf(const MatZ& A);

/// Smith normal form: X * A * Y = diag(d_1..d_r, 0..) with d_i | d_{i+1}.
struct Snf {
  MatZ X, Y;    // unimodular, m x m and k x k
  MatZ D;       // m x k diagonal
  std::vector<Int> invariants;
  Eigen::Index rank = 0;
};
Snf snf(const MatZ& A);

/// Unimodular matrix whose first column is v; requires gcd(v) == 1.
MatZ unimodular_completion(const VecZ& v);

/// Extends the columns of C (r x k, spanning a rank-k direct summand of Z^r)
/// to a basis of Z^r: returns r x r unimodular whose first k columns span the
/// same column lattice as C.  Throws if the column lattice is not a summand.
MatZ extend_to_basis(const MatZ& C);

/// Basis of { x in Z^k : A x = 0 } as columns.
MatZ integer_kernel(const MatZ& A);

/// Solve gens * t = x with t integral over Z[1/S]; S lists the primes whose
/// powers may appear in denominators of t.  Returns the coefficient vector.
std::optional<VecQ> solve_in_span(const MatZ& gens, const VecQ& x,
                                  const std::vector<Int>& S);

/// gcd of all entries (non-negative; 0 for the zero vector).
Int content(const VecZ& v);

/// Clears denominators: returns (integer matrix, scale) with A == M / scale.
std::pair<MatZ, Int> clear_denominators(const MatQ& A);

MatQ to_rational(const MatZ& A);
VecQ to_rational(const VecZ& v);

Rat det(const MatQ& A);

}  // namespace tfg
