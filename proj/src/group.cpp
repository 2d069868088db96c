#include "tfg/group.hpp"

#include <sstream>

namespace tfg {

namespace {

VecL to_vecl(const VecQ& v) {
  VecL out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = Laurent(v(i));
  return out;
}

VecF to_vecf(const VecQ& v) {
  VecF out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = LFrac(v(i));
  return out;
}

VecF to_vecf(const VecL& v) {
  VecF out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = LFrac(v(i));
  return out;
}

MatL eval_mat(const MatL& m, const Rat& p) {
  MatL out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Laurent(m(i, j).eval(p));
  return out;
}

LFrac det_lfrac(MatF a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("det: not square");
  LFrac d(Rat(1));
  for (Eigen::Index t = 0; t < n; ++t) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = t; i < n; ++i)
      if (!a(i, t).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) return LFrac(Rat(0));
    if (piv != t) {
      a.row(piv).swap(a.row(t));
      d = -d;
    }
    d *= a(t, t);
    for (Eigen::Index i = t + 1; i < n; ++i) {
      if (a(i, t).is_zero()) continue;
      LFrac f = a(i, t) / a(t, t);
      for (Eigen::Index j = t; j < n; ++j) a(i, j) -= f * a(t, j);
    }
  }
  return d;
}

// Projection with kernel span(D); rows indexed by a coordinate complement.
MatQ projection_along(const MatQ& D, Eigen::Index n) {
  const Eigen::Index r = D.cols();
  if (r == 0) return MatQ::Identity(n, n);
  MatQ T(n, n);
  T.leftCols(r) = D;
  Eigen::Index got = 0;
  for (Eigen::Index j = 0; j < n && got < n - r; ++j) {
    MatQ trial = T;
    trial.col(r + got) = VecQ::Zero(n);
    trial.col(r + got)(j) = Rat(1);
    Eigen::FullPivLU<MatQ> lu(trial.leftCols(r + got + 1));
    if (lu.rank() == r + got + 1) {
      T.col(r + got) = trial.col(r + got);
      ++got;
    }
  }
  if (got != n - r) throw InvariantError("divisible columns are dependent");
  MatQ Tinv = Eigen::FullPivLU<MatQ>(T).inverse();
  return Tinv.bottomRows(n - r);
}

std::set<Int> support_of(const Laurent& l) {
  std::set<Int> out;
  for (const auto& [e, c] : l.coeffs())
    for (const Int& p : prime_support(c)) out.insert(p);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Element

Element::Element(GroupPtr g, VecL coords)
    : group_(std::move(g)), coords_(std::move(coords)) {
  if (!group_) throw std::invalid_argument("Element: null group");
  if (coords_.size() != group_->rank())
    throw std::invalid_argument("Element: wrong number of coordinates");
  for (Eigen::Index i = 0; i < coords_.size(); ++i) {
    int c = coords_(i).ctx();
    if (c == kNoCtx) continue;
    if (ctx_ == kNoCtx) ctx_ = c;
    if (ctx_ != c)
      throw InvariantError("Element: coordinates mix two prime-class symbols");
  }
  if (ctx_ != kNoCtx) {
    const PrimeClass& pc = group_->registry()->cls(ctx_);
    if (pc.kind == ClassKind::Explicit)
      throw InvariantError("Element: symbol attached to an explicit prime class");
  }
}

Element::Element(GroupPtr g, const VecQ& coords)
    : Element(std::move(g), to_vecl(coords)) {}

bool Element::is_zero() const {
  for (Eigen::Index i = 0; i < coords_.size(); ++i)
    if (!coords_(i).is_zero()) return false;
  return true;
}

std::map<int, VecQ> Element::slices() const {
  std::map<int, VecQ> out;
  for (Eigen::Index i = 0; i < coords_.size(); ++i)
    for (const auto& [e, c] : coords_(i).coeffs()) {
      auto [it, fresh] = out.try_emplace(e, VecQ::Zero(coords_.size()));
      it->second(i) = c;
    }
  if (out.empty()) out[0] = VecQ::Zero(coords_.size());
  return out;
}

Element Element::evaluated(const Rat& p) const {
  VecL out(coords_.size());
  for (Eigen::Index i = 0; i < coords_.size(); ++i) out(i) = Laurent(coords_(i).eval(p));
  return Element(group_, std::move(out));
}

std::set<Int> Element::prime_support() const {
  std::set<Int> out;
  for (Eigen::Index i = 0; i < coords_.size(); ++i)
    for (const Int& p : support_of(coords_(i))) out.insert(p);
  return out;
}

Element Element::operator+(const Element& o) const {
  if (group_ != o.group_) throw std::invalid_argument("Element: group mismatch");
  VecL out(coords_.size());
  for (Eigen::Index i = 0; i < coords_.size(); ++i) out(i) = coords_(i) + o.coords_(i);
  return Element(group_, std::move(out));
}

Element Element::operator-(const Element& o) const {
  if (group_ != o.group_) throw std::invalid_argument("Element: group mismatch");
  VecL out(coords_.size());
  for (Eigen::Index i = 0; i < coords_.size(); ++i) out(i) = coords_(i) - o.coords_(i);
  return Element(group_, std::move(out));
}

Element Element::operator*(const Rat& c) const {
  VecL out(coords_.size());
  for (Eigen::Index i = 0; i < coords_.size(); ++i) out(i) = coords_(i) * Laurent(c);
  return Element(group_, std::move(out));
}

bool Element::operator==(const Element& o) const {
  if (group_ != o.group_ || coords_.size() != o.coords_.size()) return false;
  for (Eigen::Index i = 0; i < coords_.size(); ++i)
    if (coords_(i) != o.coords_(i)) return false;
  return true;
}

std::string Element::str() const {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < coords_.size(); ++i) {
    if (i) os << ", ";
    os << coords_(i).str();
  }
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// LocalSolver

std::optional<long> LocalSolver::height_slices(const std::map<int, VecQ>& sl) const {
  std::optional<long> best;
  for (const auto& [e, xe] : sl) {
    VecF y = mul(left, to_vecf(xe));
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      auto v = val(y(i));
      if (!v) continue;
      if (!best || *v < *best) best = *v;
    }
  }
  return best;
}

std::optional<long> LocalSolver::height(const Element& x) const {
  if (x.ctx() == cls) {
    VecF y = mul(left, to_vecf(x.coords()));
    std::optional<long> best;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      auto v = val(y(i));
      if (!v) continue;
      if (!best || *v < *best) best = *v;
    }
    return best;
  }
  return height_slices(x.slices());
}

MatF LocalSolver::conjugate(const MatQ& m) const {
  return mul(mul(left, to_lfrac(m)), right);
}

// ---------------------------------------------------------------------------
// FRGroup

namespace {

LocalSolver build_solver(const Registry* reg, int cls, std::optional<Int> concrete,
                         const LocalData& ld, Eigen::Index n) {
  LocalSolver s;
  s.cls = cls;
  s.val = ClassVal{reg, cls, std::move(concrete)};
  s.divisible = ld.divisible;
  const Eigen::Index r = ld.divisible.cols();
  s.qdim = n - r;
  s.proj = projection_along(ld.divisible, n);
  MatF A = mul(to_lfrac(s.proj), to_lfrac(ld.basis));
  s.smith = dvr_smith(A, s.val);
  if (s.smith.rank != s.qdim)
    throw InvariantError("local basis degenerates modulo the divisible subspace");
  MatF DU(s.qdim, s.qdim);
  DU.setConstant(LFrac(Rat(0)));
  for (Eigen::Index i = 0; i < s.qdim; ++i)
    DU(i, i) = s.val.uniformizer_pow(-s.smith.exps[i]);
  s.left = mul(mul(DU, s.smith.Uinv), to_lfrac(s.proj));
  s.right = mul(to_lfrac(ld.basis), s.smith.Vinv).leftCols(s.qdim);
  return s;
}

void validate_local(const Registry& reg, int cls, const LocalData& ld, Eigen::Index n) {
  const PrimeClass& pc = reg.cls(cls);
  if (ld.basis.rows() != n || ld.basis.cols() != n)
    throw InvariantError("local basis must be rank x rank");
  if (ld.divisible.size() > 0 && ld.divisible.rows() != n)
    throw InvariantError("divisible columns have wrong length");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Laurent& e = ld.basis(i, j);
      if (pc.kind == ClassKind::Explicit) {
        if (!e.is_rational())
          throw InvariantError("explicit-class basis entries must be rational");
      } else if (e.ctx() != kNoCtx && e.ctx() != cls) {
        throw InvariantError("local basis carries a foreign class symbol");
      }
      for (const Int& p : support_of(e))
        if (!reg.is_used(p))
          throw InvariantError("scalar mentions unregistered prime " + p.str());
    }
  for (Eigen::Index i = 0; i < ld.divisible.rows(); ++i)
    for (Eigen::Index j = 0; j < ld.divisible.cols(); ++j)
      for (const Int& p : prime_support(ld.divisible(i, j)))
        if (!reg.is_used(p))
          throw InvariantError("divisible data mentions unregistered prime " + p.str());

  // Index [L : F] must be a power of the class prime: det = +-(pi)^-e.
  LFrac d = det_lfrac(to_lfrac(ld.basis));
  if (d.is_zero()) throw InvariantError("local basis is singular");
  Laurent dl;
  try {
    dl = d.to_laurent();
  } catch (const std::domain_error&) {
    throw InvariantError("local determinant is not a monomial");
  }
  if (pc.kind == ClassKind::Explicit) {
    Rat q = dl.rational_value();
    if (numerator(q) != 1 && numerator(q) != -1)
      throw InvariantError("local index at " + pc.id + " is not a power of " + pc.id);
    Int den = denominator(q);
    while (den % pc.prime == 0) den /= pc.prime;
    if (den != 1)
      throw InvariantError("local index at " + pc.id + " is not a power of " + pc.id);
  } else {
    if (dl.coeffs().size() != 1)
      throw InvariantError("local determinant at " + pc.id + " is not a symbol power");
    auto [e, c] = *dl.coeffs().begin();
    if (e > 0 || (c != 1 && c != -1))
      throw InvariantError("local determinant at " + pc.id + " must be (+-1) * t^-e, e >= 0");
  }

  // L must refine F: the standard basis is integral in the local basis.
  LocalData plain{ld.basis, MatQ(n, 0)};
  LocalSolver chk = build_solver(&reg, cls, std::nullopt, plain, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    std::map<int, VecQ> sl;
    VecQ ej = VecQ::Zero(n);
    ej(j) = Rat(1);
    sl[0] = ej;
    auto h = chk.height_slices(sl);
    if (!h || *h < 0)
      throw InvariantError("local lattice at " + pc.id + " does not contain Z^n");
  }
}

}  // namespace

GroupPtr FRGroup::make(std::shared_ptr<const Registry> reg, Eigen::Index rank,
                       std::map<int, LocalData> locals, std::string name) {
  if (!reg) throw std::invalid_argument("FRGroup: null registry");
  if (rank < 1) throw InvariantError("FRGroup: rank must be positive");
  auto g = std::make_shared<FRGroup>();
  g->reg_ = std::move(reg);
  g->rank_ = rank;
  g->name_ = std::move(name);
  for (auto& [cls, ld] : locals) {
    if (cls < 0 || cls >= g->reg_->class_count())
      throw InvariantError("FRGroup: unknown prime class index");
    if (ld.divisible.size() == 0) ld.divisible = MatQ(rank, 0);
    validate_local(*g->reg_, cls, ld, rank);
  }
  g->locals_ = std::move(locals);
  g->identity_local_ = LocalData{to_laurent(MatQ::Identity(rank, rank)), MatQ(rank, 0)};
  return g;
}

const LocalData& FRGroup::local(int cls) const {
  auto it = locals_.find(cls);
  return it == locals_.end() ? identity_local_ : it->second;
}

const LocalSolver& FRGroup::solver(int cls) const {
  std::lock_guard<std::mutex> lock(solver_mutex_);
  auto it = solvers_.find(cls);
  if (it == solvers_.end()) {
    it = solvers_.emplace(cls, build_solver(reg_.get(), cls, std::nullopt, local(cls), rank_)).first;
  }
  return it->second;
}

LocalSolver FRGroup::rest_solver_at(const Int& q) const {
  const LocalData& ld = local(reg_->rest_class());
  LocalData at{eval_mat(ld.basis, Rat(q)), ld.divisible};
  return build_solver(reg_.get(), reg_->rest_class(), q, at, rank_);
}

std::vector<Element> FRGroup::generators() const {
  std::vector<Element> out;
  auto self = shared_from_this();
  for (Eigen::Index i = 0; i < rank_; ++i) out.push_back(basis_element(i));
  for (const auto& [cls, ld] : locals_) {
    for (Eigen::Index j = 0; j < rank_; ++j) {
      VecL col(rank_);
      bool trivial = true;
      for (Eigen::Index i = 0; i < rank_; ++i) {
        col(i) = ld.basis(i, j);
        if (col(i) != (i == j ? Laurent(Rat(1)) : Laurent(Rat(0)))) trivial = false;
      }
      if (!trivial) out.emplace_back(self, std::move(col));
    }
  }
  return out;
}

Element FRGroup::element(const VecL& coords) const {
  return Element(shared_from_this(), coords);
}

Element FRGroup::element(const VecQ& coords) const {
  return Element(shared_from_this(), coords);
}

Element FRGroup::basis_element(Eigen::Index i) const {
  VecQ v = VecQ::Zero(rank_);
  v(i) = Rat(1);
  return element(v);
}

// ---------------------------------------------------------------------------
// Constructors

GroupPtr rank1(std::shared_ptr<const Registry> reg, const Characteristic& chi,
               std::string name) {
  if (chi.registry() != reg)
    throw std::invalid_argument("rank1: characteristic over a different registry");
  for (const auto& [p, h] : chi.overrides())
    if (reg->class_of_prime(p) < 0)
      throw InvariantError("rank1: height at unregistered prime " + p.str());
  std::map<int, LocalData> locals;
  for (int c = 0; c < reg->class_count(); ++c) {
    const PrimeClass& pc = reg->cls(c);
    HeightValue h = pc.kind == ClassKind::Explicit ? chi.at_prime(pc.prime) : chi.at_class(c);
    MatL B(1, 1);
    MatQ D(1, 0);
    if (h.infinite) {
      B(0, 0) = Laurent(Rat(1));
      D = MatQ(1, 1);
      D(0, 0) = Rat(1);
    } else if (h.v == 0) {
      continue;
    } else if (pc.kind == ClassKind::Explicit) {
      B(0, 0) = Laurent(Rat(1) / pow_rat(Rat(pc.prime), h.v));
    } else {
      B(0, 0) = Laurent::monomial(Rat(1), static_cast<int>(-h.v), c);
    }
    locals[c] = LocalData{B, D};
  }
  if (name.empty()) name = "rank1" + chi.str();
  auto g = FRGroup::make(reg, 1, std::move(locals), std::move(name));
  const_cast<FRGroup&>(*g).cd_blocks_ = std::vector<CdBlock>{{0, chi}};
  return g;
}

GroupPtr direct_sum(const GroupPtr& a, const GroupPtr& b) {
  if (a->registry() != b->registry())
    throw std::invalid_argument("direct_sum: registries differ");
  const Eigen::Index na = a->rank(), nb = b->rank(), n = na + nb;
  std::set<int> classes;
  for (const auto& [c, ld] : a->locals()) classes.insert(c);
  for (const auto& [c, ld] : b->locals()) classes.insert(c);
  std::map<int, LocalData> locals;
  for (int c : classes) {
    const LocalData& la = a->local(c);
    const LocalData& lb = b->local(c);
    MatL B(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) B(i, j) = Laurent(Rat(0));
    B.topLeftCorner(na, na) = la.basis;
    B.bottomRightCorner(nb, nb) = lb.basis;
    MatQ D(n, la.divisible.cols() + lb.divisible.cols());
    D.setZero();
    D.block(0, 0, na, la.divisible.cols()) = la.divisible;
    D.block(na, la.divisible.cols(), nb, lb.divisible.cols()) = lb.divisible;
    locals[c] = LocalData{std::move(B), std::move(D)};
  }
  auto g = FRGroup::make(a->registry(), n, std::move(locals),
                         a->name() + " + " + b->name());
  if (a->cd_blocks() && b->cd_blocks()) {
    std::vector<CdBlock> blocks = *a->cd_blocks();
    for (CdBlock blk : *b->cd_blocks()) {
      blk.offset += na;
      blocks.push_back(std::move(blk));
    }
    const_cast<FRGroup&>(*g).cd_blocks_ = std::move(blocks);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Queries

bool contains(const FRGroup& g, const Element& x) {
  if (x.group().get() != &g) throw std::invalid_argument("contains: element of another group");
  if (x.is_zero()) return true;
  for (int c = 0; c < g.registry()->class_count(); ++c) {
    auto h = g.solver(c).height(x);
    if (h && *h < 0) return false;
  }
  for (const Int& q : x.prime_support()) {
    if (g.registry()->is_used(q)) continue;
    auto h = g.rest_solver_at(q).height(x);
    if (h && *h < 0) return false;
  }
  return true;
}

HeightValue height(const FRGroup& g, const Element& x, int cls) {
  if (x.is_zero()) throw InvariantError("height: zero element is degenerate (all-infinite)");
  if (!contains(g, x)) throw InvariantError("height: element lies outside the group");
  auto h = g.solver(cls).height(x);
  return h ? HeightValue::of(*h) : HeightValue::inf();
}

HeightValue height_at_prime(const FRGroup& g, const Element& x, const Int& p) {
  if (x.is_zero()) throw InvariantError("height: zero element is degenerate (all-infinite)");
  int c = g.registry()->class_of_prime(p);
  if (c >= 0) return height(g, x, c);
  if (!contains(g, x)) throw InvariantError("height: element lies outside the group");
  auto h = g.rest_solver_at(p).height(x);
  return h ? HeightValue::of(*h) : HeightValue::inf();
}

Characteristic characteristic_of(const FRGroup& g, const Element& x) {
  if (x.is_zero()) throw InvariantError("characteristic_of: zero element");
  if (!contains(g, x))
    throw InvariantError("characteristic_of: element lies outside the group");
  Characteristic chi(g.registry());
  for (int c = 0; c < g.registry()->class_count(); ++c) {
    auto h = g.solver(c).height(x);
    chi.set_class(c, h ? HeightValue::of(*h) : HeightValue::inf());
  }
  for (const Int& q : x.prime_support()) {
    if (g.registry()->is_used(q)) continue;
    auto h = g.rest_solver_at(q).height(x);
    chi.set_prime(q, h ? HeightValue::of(*h) : HeightValue::inf());
  }
  return chi;
}

TypeRep type_of_element(const FRGroup& g, const Element& x) {
  return TypeRep(characteristic_of(g, x));
}

bool in_chi_subgroup(const FRGroup& g, const Element& x, const Characteristic& chi) {
  return chi_le(chi, characteristic_of(g, x));
}

bool in_tau_subgroup(const FRGroup& g, const Element& x, const TypeRep& tau) {
  return type_le(tau, type_of_element(g, x));
}

RealizedGroup realize_group(const GroupPtr& g,
                            const std::vector<std::pair<std::string, std::vector<Int>>>& samples) {
  RealizedGroup out;
  out.realization = g->registry()->realize(samples);
  std::map<int, LocalData> locals = g->locals();
  for (const auto& [fam, primes] : out.realization.samples) {
    auto it = g->locals().find(fam);
    if (it == g->locals().end()) continue;
    for (const Int& p : primes) {
      int idx = out.realization.reg->class_of_prime(p);
      locals[idx] = LocalData{eval_mat(it->second.basis, Rat(p)), it->second.divisible};
    }
  }
  out.group = FRGroup::make(out.realization.reg, g->rank(), std::move(locals),
                            g->name() + " [realized]");
  return out;
}

}  // namespace tfg
