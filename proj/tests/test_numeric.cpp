#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tfg/numeric.hpp"

#include <random>

using namespace tfg;

TEST_CASE("valuation on integers and rationals") {
  CHECK(valuation(Int(50), Int(5)) == 2);
  CHECK(valuation(Rat(3, 8), Int(2)) == -3);
  CHECK(valuation(Rat(1), Int(7)) == 0);
  CHECK(valuation(Rat(-12), Int(2)) == 2);
  CHECK_THROWS_AS(valuation(Rat(0), Int(3)), std::domain_error);
}

TEST_CASE("valuation is additive on products") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 40);
  const Int primes[] = {Int(2), Int(3), Int(5), Int(7)};
  for (int trial = 0; trial < 200; ++trial) {
    Rat a(num(rng), den(rng));
    Rat b(num(rng), den(rng));
    if (a == 0 || b == 0) continue;
    for (const Int& p : primes)
      CHECK(valuation(a * b, p) == valuation(a, p) + valuation(b, p));
  }
}

TEST_CASE("prime support and fresh primes") {
  auto s = prime_support(Rat(50, 21));
  CHECK(s == std::vector<Int>{Int(2), Int(3), Int(5), Int(7)});
  CHECK(prime_support(Rat(1)).empty());
  auto f = fresh_primes(3, Int(10), {Int(11)});
  CHECK(f == std::vector<Int>{Int(13), Int(17), Int(19)});
}

TEST_CASE("rational string round trip") {
  CHECK(to_string(Rat(-3, 4)) == "-3/4");
  CHECK(rat_from_string("-3/4") == Rat(-3, 4));
  CHECK(rat_from_string("17") == Rat(17));
  CHECK_THROWS(rat_from_string("x"));
}
