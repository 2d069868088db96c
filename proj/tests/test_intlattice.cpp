#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tfg/intlattice.hpp"

#include <random>

using namespace tfg;

namespace {
MatZ random_mat(std::mt19937_64& rng, int m, int k, int bound = 6) {
  std::uniform_int_distribution<int> d(-bound, bound);
  MatZ a(m, k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = d(rng);
  return a;
}
}  // namespace

TEST_CASE("column HNF reproduces the column lattice") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    MatZ a = random_mat(rng, 3, 4);
    ColHnf h = col_hnf(a);
    // A * U = [H | 0]
    MatZ au = a * h.U;
    for (Eigen::Index j = 0; j < h.rank; ++j)
      CHECK(au.col(j) == h.H.col(j));
    for (Eigen::Index j = h.rank; j < au.cols(); ++j)
      CHECK(au.col(j).isZero(0));
    // U unimodular
    Rat d = det(to_rational(h.U));
    CHECK((d == 1 || d == -1));
  }
}

TEST_CASE("unimodular completion") {
  VecZ e1(3); e1 << 1, 0, 0;
  CHECK(unimodular_completion(e1) == MatZ::Identity(3, 3));

  VecZ v(2); v << 2, 3;
  MatZ c = unimodular_completion(v);
  CHECK(c.col(0) == v);
  Rat d = det(to_rational(c));
  CHECK((d == 1 || d == -1));

  VecZ w(3); w << 1, 1, 1;
  MatZ cw = unimodular_completion(w);
  CHECK(cw.col(0) == w);
  d = det(to_rational(cw));
  CHECK((d == 1 || d == -1));

  VecZ bad(2); bad << 2, 4;
  CHECK_THROWS_AS(unimodular_completion(bad), std::invalid_argument);
}

TEST_CASE("smith normal form invariants") {
  MatZ a(2, 2);
  a << 2, 4, 6, 8;
  Snf s = snf(a);
  CHECK(s.invariants == std::vector<Int>{Int(2), Int(4)});
  std::mt19937_64 rng(29);
  for (int t = 0; t < 60; ++t) {
    MatZ m = random_mat(rng, 3, 3);
    Snf f = snf(m);
    MatZ lhs = f.X * m * f.Y;
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 3; ++j)
        CHECK(lhs(i, j) == f.D(i, j));
    for (size_t i = 1; i < f.invariants.size(); ++i)
      CHECK(f.invariants[i] % f.invariants[i - 1] == 0);
    Rat dx = det(to_rational(f.X));
    CHECK((dx == 1 || dx == -1));
  }
}

TEST_CASE("integer kernel") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    MatZ a = random_mat(rng, 2, 4);
    MatZ k = integer_kernel(a);
    CHECK((a * k).isZero(0));
    // saturated: kernel rank equals nullity over Q
    Eigen::FullPivLU<MatQ> lu(to_rational(a));
    CHECK(k.cols() == 4 - lu.rank());
  }
}

TEST_CASE("solve in span over Z and Z[1/S]") {
  MatZ g(2, 2);
  g << 2, 0, 0, 3;
  VecQ x(2); x << Rat(4), Rat(9);
  auto t = solve_in_span(g, x, {});
  REQUIRE(t.has_value());
  CHECK((*t)(0) == Rat(2));
  CHECK((*t)(1) == Rat(3));

  VecQ y(2); y << Rat(1), Rat(0);
  CHECK_FALSE(solve_in_span(g, y, {}).has_value());
  // allowing denominators at 2 makes it solvable
  CHECK(solve_in_span(g, y, {Int(2)}).has_value());
}

TEST_CASE("extend to basis") {
  MatZ c(3, 2);
  c << 1, 0, 0, 1, 0, 0;
  MatZ b = extend_to_basis(c);
  Rat d = det(to_rational(b));
  CHECK((d == 1 || d == -1));
  MatZ c2(2, 1);
  c2 << 2, 4;
  CHECK_THROWS(extend_to_basis(c2));
}
