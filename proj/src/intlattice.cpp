#include "tfg/intlattice.hpp"

#include <numeric>

namespace tfg {

namespace {

Int gcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

// Floor division used by HNF reduction steps.
Int fdiv(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

ColHnf col_hnf(const MatZ& A) {
  const Eigen::Index m = A.rows(), k = A.cols();
  MatZ H = A;
  MatZ U = MatZ::Identity(k, k);
  Eigen::Index r = 0;  // next pivot column
  for (Eigen::Index i = 0; i < m && r < k; ++i) {
    // Euclidean reduction across columns r..k-1 in row i.
    while (true) {
      Eigen::Index jmin = -1;
      for (Eigen::Index j = r; j < k; ++j) {
        if (H(i, j) == 0) continue;
        if (jmin < 0 || boost::multiprecision::abs(H(i, j)) <
                            boost::multiprecision::abs(H(i, jmin)))
          jmin = j;
      }
      if (jmin < 0) break;  // row i is zero on the active columns
      if (jmin != r) {
        H.col(r).swap(H.col(jmin));
        U.col(r).swap(U.col(jmin));
      }
      bool cleared = true;
      for (Eigen::Index j = r + 1; j < k; ++j) {
        if (H(i, j) == 0) continue;
        Int q = H(i, j) / H(i, r);  // truncated is fine inside the loop
        if (q != 0) {
          H.col(j) -= H.col(r) * q;
          U.col(j) -= U.col(r) * q;
        }
        if (H(i, j) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (H(i, r) == 0) continue;
    if (H(i, r) < 0) {
      H.col(r) *= Int(-1);
      U.col(r) *= Int(-1);
    }
    // Reduce earlier pivot columns against the new one.
    for (Eigen::Index j = 0; j < r; ++j) {
      Int q = fdiv(H(i, j), H(i, r));
      if (q != 0) {
        H.col(j) -= H.col(r) * q;
        U.col(j) -= U.col(r) * q;
      }
    }
    ++r;
  }
  ColHnf out;
  out.rank = r;
  out.H = H.leftCols(r);
  out.U = U;
  return out;
}

Snf snf(const MatZ& A) {
  const Eigen::Index m = A.rows(), k = A.cols();
  MatZ D = A;
  MatZ X = MatZ::Identity(m, m);
  MatZ Y = MatZ::Identity(k, k);
  Eigen::Index t = 0;
  while (true) {
    // Find a nonzero entry of smallest absolute value in D[t.., t..].
    Eigen::Index pi = -1, pj = -1;
    for (Eigen::Index i = t; i < m; ++i)
      for (Eigen::Index j = t; j < k; ++j) {
        if (D(i, j) == 0) continue;
        if (pi < 0 || boost::multiprecision::abs(D(i, j)) <
                          boost::multiprecision::abs(D(pi, pj))) {
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    D.row(t).swap(D.row(pi));
    X.row(t).swap(X.row(pi));
    D.col(t).swap(D.col(pj));
    Y.col(t).swap(Y.col(pj));
    bool dirty = false;
    for (Eigen::Index i = t + 1; i < m; ++i) {
      if (D(i, t) == 0) continue;
      Int q = D(i, t) / D(t, t);
      if (q != 0) {
        D.row(i) -= D.row(t) * q;
        X.row(i) -= X.row(t) * q;
      }
      if (D(i, t) != 0) dirty = true;
    }
    for (Eigen::Index j = t + 1; j < k; ++j) {
      if (D(t, j) == 0) continue;
      Int q = D(t, j) / D(t, t);
      if (q != 0) {
        D.col(j) -= D.col(t) * q;
        Y.col(j) -= Y.col(t) * q;
      }
      if (D(t, j) != 0) dirty = true;
    }
    if (dirty) continue;  // smaller remainders appeared, pick a new pivot
    // Divisibility fix-up: fold any entry the pivot misses into column t.
    bool fixed = true;
    for (Eigen::Index i = t + 1; i < m && fixed; ++i)
      for (Eigen::Index j = t + 1; j < k && fixed; ++j) {
        if (D(i, j) % D(t, t) != 0) {
          D.col(t) += D.col(j);
          Y.col(t) += Y.col(j);
          fixed = false;
        }
      }
    if (!fixed) continue;
    if (D(t, t) < 0) {
      D.row(t) *= Int(-1);
      X.row(t) *= Int(-1);
    }
    ++t;
  }
  Snf out;
  out.rank = t;
  out.D = D;
  out.X = X;
  out.Y = Y;
  for (Eigen::Index i = 0; i < t; ++i) out.invariants.push_back(D(i, i));
  return out;
}

MatZ unimodular_completion(const VecZ& v) {
  if (content(v) != 1)
    throw std::invalid_argument("unimodular_completion: vector is not primitive");
  MatZ C(v.size(), 1);
  C.col(0) = v;
  return extend_to_basis(C);
}

MatZ extend_to_basis(const MatZ& C) {
  const Eigen::Index r = C.rows(), k = C.cols();
  Snf s = snf(C);
  if (s.rank != k)
    throw std::invalid_argument("extend_to_basis: columns are dependent");
  for (const Int& d : s.invariants)
    if (d != 1 && d != -1)
      throw std::invalid_argument("extend_to_basis: column lattice is not a direct summand");
  // X * C * Y = [I; 0]  =>  columns of X^{-1} extend C*Y (same lattice as C).
  MatQ Xq = to_rational(s.X);
  MatQ Xinv_q = Eigen::FullPivLU<MatQ>(Xq).inverse();
  MatZ out(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) {
      const Rat& q = Xinv_q(i, j);
      if (denominator(q) != 1)
        throw std::logic_error("extend_to_basis: inverse not integral");
      out(i, j) = numerator(q);
    }
  return out;
}

MatZ integer_kernel(const MatZ& A) {
  // Column HNF of A: the columns of U beyond the rank map to zero.
  ColHnf h = col_hnf(A);
  return h.U.rightCols(A.cols() - h.rank);
}

std::optional<VecQ> solve_in_span(const MatZ& gens, const VecQ& x,
                                  const std::vector<Int>& S) {
  ColHnf h = col_hnf(gens);
  // Pivot rows are strictly increasing across the echelon columns.
  const Eigen::Index m = gens.rows();
  std::vector<Eigen::Index> pivot(h.rank);
  for (Eigen::Index c = 0; c < h.rank; ++c) {
    Eigen::Index i = c > 0 ? pivot[c - 1] + 1 : 0;
    while (i < m && h.H(i, c) == 0) ++i;
    if (i >= m) throw std::logic_error("solve_in_span: broken echelon form");
    pivot[c] = i;
  }
  VecQ rem = x;
  VecQ s = VecQ::Zero(h.rank);
  Eigen::Index next = 0;
  for (Eigen::Index c = 0; c < h.rank; ++c) {
    for (Eigen::Index i = next; i < pivot[c]; ++i)
      if (rem(i) != 0) return std::nullopt;
    s(c) = rem(pivot[c]) / Rat(h.H(pivot[c], c));
    for (Eigen::Index i = pivot[c]; i < m; ++i) rem(i) -= s(c) * Rat(h.H(i, c));
    next = pivot[c] + 1;
  }
  for (Eigen::Index i = next; i < m; ++i)
    if (rem(i) != 0) return std::nullopt;
  // Coefficients must be S-integral.
  for (Eigen::Index c = 0; c < h.rank; ++c) {
    Int den = denominator(s(c));
    for (const Int& p : S)
      while (den % p == 0) den /= p;
    if (den != 1 && den != -1) return std::nullopt;
  }
  VecQ t = VecQ::Zero(gens.cols());
  for (Eigen::Index c = 0; c < h.rank; ++c)
    for (Eigen::Index j = 0; j < gens.cols(); ++j)
      t(j) += Rat(h.U(j, c)) * s(c);
  return t;
}

Int content(const VecZ& v) {
  Int g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, v(i));
  return g;
}

std::pair<MatZ, Int> clear_denominators(const MatQ& A) {
  Int scale = 1;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      Int d = denominator(A(i, j));
      scale = scale / gcd(scale, d) * d;
    }
  MatZ M(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      Rat q = A(i, j) * Rat(scale);
      M(i, j) = numerator(q);
    }
  return {M, scale};
}

MatQ to_rational(const MatZ& A) {
  MatQ out(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) out(i, j) = Rat(A(i, j));
  return out;
}

VecQ to_rational(const VecZ& v) {
  VecQ out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = Rat(v(i));
  return out;
}

Rat det(const MatQ& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("det: not square");
  return Eigen::FullPivLU<MatQ>(A).determinant();
}

}  // namespace tfg
