#include "tfg/numeric.hpp"

#include <algorithm>

namespace tfg {

long valuation(Int n, const Int& p) {
  if (n == 0) throw std::domain_error("valuation: n == 0");
  if (p < 2) throw std::invalid_argument("valuation: p < 2");
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

long valuation(const Rat& q, const Int& p) {
  if (q == 0) throw std::domain_error("valuation: q == 0 has infinite valuation");
  return valuation(numerator(q), p) - valuation(denominator(q), p);
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  for (Int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

static void support_of_int(Int n, std::vector<Int>& out) {
  if (n < 0) n = -n;
  for (Int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
}

std::vector<Int> prime_support(const Rat& q) {
  std::vector<Int> out;
  if (q == 0) return out;
  support_of_int(numerator(q), out);
  support_of_int(denominator(q), out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Int> fresh_primes(std::size_t count, const Int& low,
                              const std::vector<Int>& avoid) {
  std::vector<Int> out;
  Int p = low < 2 ? Int(2) : low;
  while (out.size() < count) {
    if (is_prime(p) &&
        std::find(avoid.begin(), avoid.end(), p) == avoid.end()) {
      out.push_back(p);
    }
    ++p;
  }
  return out;
}

std::string to_string(const Rat& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) s += "/" + denominator(q).str();
  return s;
}

Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rat_from_string: zero denominator");
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("rat_from_string: cannot parse '" + s + "'");
  }
}

}  // namespace tfg
