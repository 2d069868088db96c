#pragma once

// Exact scalar types and p-adic valuations. All arithmetic in this project is
// exact: integers are GMP bignums, rationals are GMP fractions, and matrices
// are dense Eigen types over those scalars.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfg {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using MatQ = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using VecQ = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using MatZ = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;
using VecZ = Eigen::Matrix<Int, Eigen::Dynamic, 1>;

inline Int numerator(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int denominator(const Rat& q) { return boost::multiprecision::denominator(q); }

/// Exponent of p in n (n != 0, p >= 2).
long valuation(Int n, const Int& p);

/// Exponent of p in the factorization of q.  Throws std::domain_error on
/// q == 0; callers that want the "infinite valuation" convention must test
/// for zero themselves (HeightValue carries the infinity at higher layers).
long valuation(const Rat& q, const Int& p);

bool is_prime(const Int& n);

/// Distinct primes dividing numerator or denominator of q (empty for 0, ±1).
std::vector<Int> prime_support(const Rat& q);

/// Deterministic sequence of primes >= low, skipping any in `avoid`.
std::vector<Int> fresh_primes(std::size_t count, const Int& low,
                              const std::vector<Int>& avoid);

inline MatQ identity_q(Eigen::Index n) { return MatQ::Identity(n, n); }

inline bool is_zero(const MatQ& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

inline Rat pow_rat(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  Rat b = e > 0 ? base : Rat(1) / base;
  long k = e > 0 ? e : -e;
  Rat out(1);
  while (k-- > 0) out *= b;
  return out;
}

std::string to_string(const Rat& q);
Rat rat_from_string(const std::string& s);

}  // namespace tfg
