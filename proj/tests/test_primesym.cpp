#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tfg/primesym.hpp"

using namespace tfg;

TEST_CASE("registry construction and lookups") {
  auto reg = Registry::make({Int(2), Int(5)}, {{"P2", {}}, {"P3", {Int(13)}}});
  CHECK(reg->class_count() == 5);  // 2, 5, P2, P3, rest
  CHECK(reg->cls(reg->rest_class()).kind == ClassKind::Rest);
  CHECK(reg->class_of_prime(Int(5)) == 1);
  CHECK(reg->class_of_prime(Int(7)) == -1);
  CHECK(reg->index_of("P2") == 2);
  CHECK(reg->is_used(Int(2)));
  // explicit primes are excluded from every family
  CHECK(reg->cls(2).excluded.count(Int(2)) == 1);
  CHECK(reg->cls(3).excluded.count(Int(13)) == 1);

  CHECK_THROWS_AS(Registry::make({Int(4)}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Registry::make({Int(2), Int(2)}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Registry::make({}, {{"P", {}}, {"P", {}}}), std::invalid_argument);
  CHECK_THROWS_AS(Registry::make({}, {{"rest", {}}}), std::invalid_argument);
}

TEST_CASE("refine family") {
  auto reg = Registry::make({}, {{"P2", {}}});
  auto r2 = reg->refine_family("P2", {Int(3)});
  CHECK(r2->cls(r2->index_of("P2")).excluded.count(Int(3)) == 1);
  // identity refinement
  auto r3 = reg->refine_family("P2", {});
  CHECK(r3->cls(r3->index_of("P2")).excluded == reg->cls(reg->index_of("P2")).excluded);
  CHECK_THROWS(reg->refine_family("rest", {Int(3)}));
}

TEST_CASE("realization") {
  auto reg = Registry::make({Int(5)}, {{"P2", {}}, {"P3", {}}});
  auto real = reg->realize({{"P2", {Int(11), Int(13)}}, {"P3", {Int(17)}}});
  CHECK(real.reg->class_of_prime(Int(11)) >= 0);
  CHECK(real.reg->is_used(Int(13)));
  // sampled primes are excluded from the family afterwards
  CHECK(real.reg->cls(real.reg->index_of("P2")).excluded.count(Int(11)) == 1);
  // indices of pre-existing classes survive
  CHECK(real.reg->index_of("P2") == reg->index_of("P2"));
  CHECK(real.reg->index_of("rest") == reg->index_of("rest"));

  CHECK_THROWS(reg->realize({{"P2", {Int(5)}}}));            // already explicit
  CHECK_THROWS(reg->realize({{"P2", {Int(11), Int(11)}}}));  // duplicate
  CHECK_THROWS(reg->realize({{"P2", {Int(11)}}, {"P3", {Int(11)}}}));
  CHECK_THROWS(reg->realize({{"P2", {Int(12)}}}));           // not prime
}
