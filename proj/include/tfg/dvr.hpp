#pragma once

// Smith reduction over the valuation ring attached to one prime class.
// For an explicit class the valuation of a scalar is its p-adic order (Gauss
// order when the scalar carries a foreign family symbol); for a family or
// rest class it is the order in the class's own symbol.  Pivoting on an
// entry of minimal valuation keeps every transform unimodular over the
// valuation ring, which makes the diagonal exponents the local elementary
// divisors of the column lattice.

#include "tfg/laurent.hpp"
#include "tfg/primesym.hpp"

namespace tfg {

struct ClassVal {
  const Registry* reg = nullptr;
  int cls = -1;
  /// When set, value at this concrete prime instead of the class symbol
  /// (used for stray Rest-class primes with the structure evaluated there).
  std::optional<Int> concrete;

  std::optional<long> operator()(const Laurent& l) const;
  std::optional<long> operator()(const LFrac& f) const;
  /// t for a family/rest class, the prime itself for an explicit class.
  LFrac uniformizer() const;
  LFrac uniformizer_pow(long e) const;
};

struct DvrSmith {
  MatF U, Uinv;           // m x m
  MatF V, Vinv;           // k x k
  std::vector<long> exps; // valuations of the diagonal, size = rank
  Eigen::Index rank = 0;
};

/// A = U * diag(pi^exps, 0) * V with U, V unimodular over the valuation ring.
DvrSmith dvr_smith(MatF A, const ClassVal& val);

MatF mul(const MatF& a, const MatF& b);
VecF mul(const MatF& a, const VecF& b);

}  // namespace tfg
