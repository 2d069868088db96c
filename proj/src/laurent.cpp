#include "tfg/laurent.hpp"

#include <sstream>

namespace tfg {

Laurent Laurent::monomial(const Rat& c, int e, int ctx) {
  Laurent out;
  if (c != 0) {
    out.coeff_[e] = c;
    if (e != 0) {
      if (ctx == kNoCtx)
        throw std::invalid_argument("Laurent::monomial: symbol without a prime class");
      out.ctx_ = ctx;
    } else {
      out.ctx_ = ctx;
    }
  }
  return out;
}

bool Laurent::is_rational() const {
  return coeff_.empty() || (coeff_.size() == 1 && coeff_.begin()->first == 0);
}

Rat Laurent::rational_value() const {
  if (coeff_.empty()) return Rat(0);
  if (!is_rational()) throw std::domain_error("Laurent: not a plain rational: " + str());
  return coeff_.begin()->second;
}

Rat Laurent::coeff(int e) const {
  auto it = coeff_.find(e);
  return it == coeff_.end() ? Rat(0) : it->second;
}

std::optional<long> Laurent::generic_valuation() const {
  if (coeff_.empty()) return std::nullopt;
  return coeff_.begin()->first;
}

bool Laurent::integral_on_family() const {
  return coeff_.empty() || coeff_.begin()->first >= 0;
}

Rat Laurent::eval(const Rat& p) const {
  Rat acc(0);
  for (const auto& [e, c] : coeff_) acc += c * pow_rat(p, e);
  return acc;
}

std::optional<long> Laurent::gauss_valuation(const Int& q) const {
  if (coeff_.empty()) return std::nullopt;
  bool first = true;
  long best = 0;
  for (const auto& [e, c] : coeff_) {
    long v = valuation(c, q);
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

void Laurent::merge_ctx(const Laurent& o) {
  if (o.ctx_ == kNoCtx) return;
  if (ctx_ == kNoCtx) {
    ctx_ = o.ctx_;
    return;
  }
  if (ctx_ != o.ctx_)
    throw std::invalid_argument("Laurent: cannot combine symbols of two prime classes");
}

void Laurent::prune() {
  for (auto it = coeff_.begin(); it != coeff_.end();) {
    if (it->second == 0)
      it = coeff_.erase(it);
    else
      ++it;
  }
}

Laurent Laurent::operator-() const {
  Laurent out = *this;
  for (auto& [e, c] : out.coeff_) c = -c;
  return out;
}

Laurent& Laurent::operator+=(const Laurent& o) {
  merge_ctx(o);
  for (const auto& [e, c] : o.coeff_) coeff_[e] += c;
  prune();
  return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) {
  merge_ctx(o);
  for (const auto& [e, c] : o.coeff_) coeff_[e] -= c;
  prune();
  return *this;
}

Laurent& Laurent::operator*=(const Laurent& o) {
  merge_ctx(o);
  std::map<int, Rat> out;
  for (const auto& [e1, c1] : coeff_)
    for (const auto& [e2, c2] : o.coeff_) out[e1 + e2] += c1 * c2;
  coeff_ = std::move(out);
  prune();
  return *this;
}

bool Laurent::operator==(const Laurent& o) const {
  // Context compatibility is not equality-relevant: 3 == 3 in any class.
  return coeff_ == o.coeff_;
}

Laurent Laurent::shifted(int e) const {
  Laurent out = *this;
  if (e == 0 || coeff_.empty()) return out;
  std::map<int, Rat> moved;
  for (const auto& [k, c] : coeff_) moved[k + e] = c;
  out.coeff_ = std::move(moved);
  if (out.ctx_ == kNoCtx)
    throw std::logic_error("Laurent::shifted: shifting requires a prime class symbol");
  return out;
}

std::string Laurent::str() const {
  if (coeff_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : coeff_) {
    if (!first) os << " + ";
    first = false;
    if (e == 0) {
      os << to_string(c);
    } else {
      os << to_string(c) << "*t^" << e;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Dense polynomial helpers for LFrac normalization (coefficients from x^0 up).

namespace {

using Poly = std::vector<Rat>;

Poly to_poly(const Laurent& l, long shift) {
  // l * t^{-shift} must be an honest polynomial.
  Poly p;
  for (const auto& [e, c] : l.coeffs()) {
    long k = e - shift;
    if (k < 0) throw std::logic_error("to_poly: negative exponent after shift");
    if (static_cast<long>(p.size()) <= k) p.resize(k + 1, Rat(0));
    p[k] = c;
  }
  if (p.empty()) p.push_back(Rat(0));
  return p;
}

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

bool poly_zero(const Poly& p) {
  return p.empty() || (p.size() == 1 && p[0] == 0);
}

Poly poly_rem(Poly a, const Poly& b) {
  trim(a);
  while (!poly_zero(a) && a.size() >= b.size()) {
    Rat f = a.back() / b.back();
    std::size_t off = a.size() - b.size();
    for (std::size_t i = 0; i + 1 < b.size(); ++i) a[off + i] -= f * b[i];
    a.pop_back();  // the leading term cancels exactly
    if (a.empty()) a.push_back(Rat(0));
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!poly_zero(b)) {
    Poly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!poly_zero(a)) {
    Rat lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

Poly poly_divexact(Poly a, const Poly& b) {
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 1, Rat(0));
  while (!poly_zero(a) && a.size() >= b.size()) {
    Rat f = a.back() / b.back();
    std::size_t off = a.size() - b.size();
    q[off] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    trim(a);
  }
  if (!poly_zero(a)) throw std::logic_error("poly_divexact: not divisible");
  trim(q);
  return q;
}

Laurent from_poly(const Poly& p, long shift, int ctx) {
  Laurent out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    long e = static_cast<long>(i) + shift;
    out += Laurent::monomial(p[i], static_cast<int>(e), e == 0 && ctx == kNoCtx ? kNoCtx : ctx);
  }
  return out;
}

}  // namespace

LFrac::LFrac(Laurent n, Laurent d) : num_(std::move(n)), den_(std::move(d)) {
  if (den_.is_zero()) throw std::domain_error("LFrac: zero denominator");
  normalize();
}

int LFrac::ctx() const {
  return num_.ctx() != kNoCtx ? num_.ctx() : den_.ctx();
}

void LFrac::normalize() {
  if (num_.is_zero()) {
    den_ = Laurent(Rat(1));
    return;
  }
  int c = ctx();
  long sn = *num_.generic_valuation();
  long sd = *den_.generic_valuation();
  Poly pn = to_poly(num_, sn);
  Poly pd = to_poly(den_, sd);
  Poly g = poly_gcd(pn, pd);
  if (g.size() > 1) {
    pn = poly_divexact(pn, g);
    pd = poly_divexact(pd, g);
  }
  // Denominator becomes 1 + higher terms; the monomial part moves onto num.
  Rat lead0 = pd[0];
  if (lead0 == 0) throw std::logic_error("LFrac::normalize: denominator order broken");
  for (auto& x : pn) x /= lead0;
  for (auto& x : pd) x /= lead0;
  num_ = from_poly(pn, sn - sd, c);
  den_ = from_poly(pd, 0, c);
}

std::optional<long> LFrac::generic_valuation() const {
  if (num_.is_zero()) return std::nullopt;
  return *num_.generic_valuation() - *den_.generic_valuation();
}

std::optional<long> LFrac::gauss_valuation(const Int& q) const {
  if (num_.is_zero()) return std::nullopt;
  return *num_.gauss_valuation(q) - *den_.gauss_valuation(q);
}

Rat LFrac::eval(const Rat& p) const {
  Rat d = den_.eval(p);
  if (d == 0) throw std::domain_error("LFrac::eval: denominator vanishes at sample");
  return num_.eval(p) / d;
}

bool LFrac::is_rational() const {
  return num_.is_zero() || (num_.is_rational() && den_.is_rational());
}

Rat LFrac::rational_value() const {
  if (num_.is_zero()) return Rat(0);
  return num_.rational_value() / den_.rational_value();
}

std::map<int, Rat> LFrac::expand(int lo, int hi) const {
  std::map<int, Rat> out;
  if (num_.is_zero() || lo >= hi) return out;
  // den is normalized to 1 + d with d of positive order.
  long shift = *den_.generic_valuation();
  if (shift != 0 || den_.coeff(0) != 1)
    throw std::logic_error("LFrac::expand: denominator not normalized");
  long nv = *num_.generic_valuation();
  if (nv >= hi) return out;
  // Series inversion of den up to the needed length.
  long len = hi - nv;
  std::vector<Rat> inv(len, Rat(0));
  inv[0] = 1;
  for (long k = 1; k < len; ++k) {
    Rat acc(0);
    for (long j = 1; j <= k; ++j) {
      Rat dj = den_.coeff(static_cast<int>(j));
      if (dj != 0) acc += dj * inv[k - j];
    }
    inv[k] = -acc;
  }
  for (const auto& [e, c] : num_.coeffs()) {
    for (long k = 0; k < len; ++k) {
      long ee = e + k;
      if (ee >= hi) break;
      if (ee < lo) continue;
      if (inv[k] != 0) out[static_cast<int>(ee)] += c * inv[k];
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

Laurent LFrac::to_laurent() const {
  if (num_.is_zero()) return Laurent();
  if (den_.is_rational() && den_.rational_value() == 1) return num_;
  throw std::domain_error("LFrac::to_laurent: denominator " + den_.str() + " is not trivial");
}

LFrac LFrac::operator-() const {
  LFrac out = *this;
  out.num_ = -out.num_;
  return out;
}

LFrac& LFrac::operator+=(const LFrac& o) {
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

LFrac& LFrac::operator-=(const LFrac& o) { return *this += -o; }

LFrac& LFrac::operator*=(const LFrac& o) {
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

LFrac& LFrac::operator/=(const LFrac& o) {
  if (o.is_zero()) throw std::domain_error("LFrac: division by zero");
  num_ = num_ * o.den_;
  den_ = den_ * o.num_;
  normalize();
  return *this;
}

bool LFrac::operator==(const LFrac& o) const {
  return (num_ * o.den_) == (o.num_ * den_);
}

std::string LFrac::str() const {
  if (den_.is_rational() && den_.rational_value() == 1) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

MatF to_lfrac(const MatL& m) {
  MatF out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = LFrac(m(i, j));
  return out;
}

MatF to_lfrac(const MatQ& m) {
  MatF out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = LFrac(m(i, j));
  return out;
}

MatL to_laurent(const MatQ& m) {
  MatL out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Laurent(m(i, j));
  return out;
}

}  // namespace tfg
