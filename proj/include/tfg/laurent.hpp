#pragma once

// Laurent polynomials in one symbolic prime.  A scalar Sum c_i * t^i stands
// for the value obtained by substituting any prime p of one fixed infinite
// prime family for t.  Because every concrete prime that occurs in a
// coefficient is excluded from the family by construction, the t-adic order
// of the polynomial equals the p-adic valuation of the value for every
// family member p, which is what makes "for all p in the family" statements
// decidable by a single computation.

#include "tfg/numeric.hpp"

#include <map>

namespace tfg {

inline constexpr int kNoCtx = -1;

class Laurent {
 public:
  Laurent() = default;
  Laurent(const Rat& q) {  // NOLINT: implicit by design, rationals embed
    if (q != 0) coeff_[0] = q;
  }
  Laurent(long v) : Laurent(Rat(v)) {}  // NOLINT

  /// c * t^e with the symbol of prime-class `ctx`.
  static Laurent monomial(const Rat& c, int e, int ctx);

  int ctx() const { return ctx_; }
  bool is_zero() const { return coeff_.empty(); }
  bool is_rational() const;
  Rat rational_value() const;  // requires is_rational()
  const std::map<int, Rat>& coeffs() const { return coeff_; }
  Rat coeff(int e) const;

  /// Order at the generic family prime: min exponent carrying a nonzero
  /// coefficient.  std::nullopt encodes the infinite order of zero.
  std::optional<long> generic_valuation() const;

  /// True when no coefficient sits at a negative exponent.
  bool integral_on_family() const;

  /// Substitute a concrete prime (or any rational) for the symbol.
  Rat eval(const Rat& p) const;

  /// min over coefficients of v_q(c_i): the q-adic order of the value for a
  /// family member in generic position.  Exact whenever the minimum is
  /// attained at a single exponent (monomials always); see FRGroup docs.
  std::optional<long> gauss_valuation(const Int& q) const;

  Laurent operator-() const;
  Laurent& operator+=(const Laurent& o);
  Laurent& operator-=(const Laurent& o);
  Laurent& operator*=(const Laurent& o);
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator*(Laurent a, const Laurent& b) { return a *= b; }
  bool operator==(const Laurent& o) const;
  bool operator!=(const Laurent& o) const { return !(*this == o); }

  /// Shift all exponents by e (multiply by t^e).
  Laurent shifted(int e) const;

  std::string str() const;

 private:
  void merge_ctx(const Laurent& o);
  void prune();

  int ctx_ = kNoCtx;
  std::map<int, Rat> coeff_;
};

/// Quotient of Laurent polynomials (a rational function in the family
/// symbol).  Needed transiently inside valuation-pivoted eliminations where
/// dividing by a unit of the valuation ring leaves the polynomial ring.
class LFrac {
 public:
  LFrac() : num_(Rat(0)), den_(Rat(1)) {}
  LFrac(const Laurent& n) : num_(n), den_(Rat(1)) {}  // NOLINT
  LFrac(const Rat& q) : num_(q), den_(Rat(1)) {}      // NOLINT
  LFrac(long v) : num_(Rat(v)), den_(Rat(1)) {}       // NOLINT
  LFrac(Laurent n, Laurent d);

  const Laurent& num() const { return num_; }
  const Laurent& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  int ctx() const;

  std::optional<long> generic_valuation() const;
  std::optional<long> gauss_valuation(const Int& q) const;
  Rat eval(const Rat& p) const;
  bool is_rational() const;
  Rat rational_value() const;

  /// Coefficients of the Laurent expansion on exponents [lo, hi).
  std::map<int, Rat> expand(int lo, int hi) const;

  /// Exact Laurent form; throws std::domain_error if the denominator is not
  /// a monomial multiple of a divisor of the numerator.
  Laurent to_laurent() const;

  LFrac operator-() const;
  LFrac& operator+=(const LFrac& o);
  LFrac& operator-=(const LFrac& o);
  LFrac& operator*=(const LFrac& o);
  LFrac& operator/=(const LFrac& o);
  friend LFrac operator+(LFrac a, const LFrac& b) { return a += b; }
  friend LFrac operator-(LFrac a, const LFrac& b) { return a -= b; }
  friend LFrac operator*(LFrac a, const LFrac& b) { return a *= b; }
  friend LFrac operator/(LFrac a, const LFrac& b) { return a /= b; }
  bool operator==(const LFrac& o) const;
  bool operator!=(const LFrac& o) const { return !(*this == o); }

  std::string str() const;

 private:
  void normalize();

  Laurent num_;
  Laurent den_;  // nonzero
};

using MatL = Eigen::Matrix<Laurent, Eigen::Dynamic, Eigen::Dynamic>;
using VecL = Eigen::Matrix<Laurent, Eigen::Dynamic, 1>;
using MatF = Eigen::Matrix<LFrac, Eigen::Dynamic, Eigen::Dynamic>;
using VecF = Eigen::Matrix<LFrac, Eigen::Dynamic, 1>;

MatF to_lfrac(const MatL& m);
MatF to_lfrac(const MatQ& m);
MatL to_laurent(const MatQ& m);

}  // namespace tfg

namespace Eigen {

template <>
struct NumTraits<tfg::Laurent> : GenericNumTraits<tfg::Laurent> {
  typedef tfg::Laurent Real;
  typedef tfg::Laurent NonInteger;
  typedef tfg::Laurent Nested;
  typedef tfg::Laurent Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 30,
    MulCost = 60
  };
  static inline Real epsilon() { return tfg::Laurent(tfg::Rat(0)); }
  static inline Real dummy_precision() { return tfg::Laurent(tfg::Rat(0)); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<tfg::LFrac> : GenericNumTraits<tfg::LFrac> {
  typedef tfg::LFrac Real;
  typedef tfg::LFrac NonInteger;
  typedef tfg::LFrac Nested;
  typedef tfg::LFrac Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 60,
    MulCost = 120
  };
  static inline Real epsilon() { return tfg::LFrac(tfg::Rat(0)); }
  static inline Real dummy_precision() { return tfg::LFrac(tfg::Rat(0)); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
