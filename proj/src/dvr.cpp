#include "tfg/dvr.hpp"

namespace tfg {

std::optional<long> ClassVal::operator()(const Laurent& l) const {
  if (l.is_zero()) return std::nullopt;
  if (concrete) return l.gauss_valuation(*concrete);
  const PrimeClass& pc = reg->cls(cls);
  if (pc.kind == ClassKind::Explicit) return l.gauss_valuation(pc.prime);
  if (l.ctx() == cls) return l.generic_valuation();
  // Foreign symbol or plain rational: the generic member of this class
  // divides none of the concrete coefficients, so the order is zero.
  return 0;
}

std::optional<long> ClassVal::operator()(const LFrac& f) const {
  if (f.is_zero()) return std::nullopt;
  return *(*this)(f.num()) - *(*this)(f.den());
}

LFrac ClassVal::uniformizer() const { return uniformizer_pow(1); }

LFrac ClassVal::uniformizer_pow(long e) const {
  if (e == 0) return LFrac(Rat(1));
  if (concrete) return LFrac(pow_rat(Rat(*concrete), e));
  const PrimeClass& pc = reg->cls(cls);
  if (pc.kind == ClassKind::Explicit) return LFrac(pow_rat(Rat(pc.prime), e));
  return LFrac(Laurent::monomial(Rat(1), static_cast<int>(e), cls));
}

MatF mul(const MatF& a, const MatF& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mul: shape mismatch");
  MatF out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      LFrac acc;
      for (Eigen::Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

VecF mul(const MatF& a, const VecF& b) {
  if (a.cols() != b.size()) throw std::invalid_argument("mul: shape mismatch");
  VecF out(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    LFrac acc;
    for (Eigen::Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k);
    out(i) = acc;
  }
  return out;
}

DvrSmith dvr_smith(MatF A, const ClassVal& val) {
  const Eigen::Index m = A.rows(), k = A.cols();
  DvrSmith s;
  s.U = s.Uinv = MatF::Identity(m, m);
  s.V = s.Vinv = MatF::Identity(k, k);

  auto swap_rows = [&](Eigen::Index a, Eigen::Index b) {
    if (a == b) return;
    A.row(a).swap(A.row(b));
    s.Uinv.row(a).swap(s.Uinv.row(b));
    s.U.col(a).swap(s.U.col(b));
  };
  auto swap_cols = [&](Eigen::Index a, Eigen::Index b) {
    if (a == b) return;
    A.col(a).swap(A.col(b));
    s.Vinv.col(a).swap(s.Vinv.col(b));
    s.V.row(a).swap(s.V.row(b));
  };
  // row_a -= f * row_b  (and the matching updates keeping A0 = U A V)
  auto row_axpy = [&](const LFrac& f, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < k; ++j) A(a, j) -= f * A(b, j);
    for (Eigen::Index j = 0; j < m; ++j) {
      s.Uinv(a, j) -= f * s.Uinv(b, j);
      s.U(j, b) += f * s.U(j, a);
    }
  };
  auto col_axpy = [&](const LFrac& f, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index i = 0; i < m; ++i) A(i, a) -= f * A(i, b);
    for (Eigen::Index i = 0; i < k; ++i) {
      s.Vinv(i, a) -= f * s.Vinv(i, b);
      s.V(b, i) += f * s.V(a, i);
    }
  };
  auto scale_row = [&](Eigen::Index a, const LFrac& u) {  // row_a /= u (unit)
    for (Eigen::Index j = 0; j < k; ++j) A(a, j) /= u;
    for (Eigen::Index j = 0; j < m; ++j) {
      s.Uinv(a, j) /= u;
      s.U(j, a) *= u;
    }
  };

  Eigen::Index t = 0;
  while (t < m && t < k) {
    Eigen::Index pi = -1, pj = -1;
    long best = 0;
    for (Eigen::Index i = t; i < m; ++i)
      for (Eigen::Index j = t; j < k; ++j) {
        auto v = val(A(i, j));
        if (!v) continue;
        if (pi < 0 || *v < best) {
          pi = i;
          pj = j;
          best = *v;
        }
      }
    if (pi < 0) break;
    swap_rows(t, pi);
    swap_cols(t, pj);
    LFrac unit = A(t, t) / val.uniformizer_pow(best);
    scale_row(t, unit);  // pivot becomes pi^best exactly
    for (Eigen::Index i = t + 1; i < m; ++i)
      if (!A(i, t).is_zero()) row_axpy(A(i, t) / A(t, t), i, t);
    for (Eigen::Index j = t + 1; j < k; ++j)
      if (!A(t, j).is_zero()) col_axpy(A(t, j) / A(t, t), j, t);
    s.exps.push_back(best);
    ++t;
  }
  s.rank = t;
  return s;
}

}  // namespace tfg
