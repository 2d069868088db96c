#include "tfg/transit.hpp"

#include <random>
#include <sstream>

namespace tfg {

std::string property_name(Property p) {
  switch (p) {
    case Property::Fully: return "fully";
    case Property::Krylov: return "krylov";
    case Property::Transitive: return "transitive";
    case Property::Weak: return "weak";
  }
  return "?";
}

std::string flag_name(Flag f) {
  switch (f) {
    case Flag::Yes: return "yes(sampled)";
    case Flag::No: return "no(certified)";
    case Flag::Unknown: return "unknown";
  }
  return "?";
}

namespace {

void require_nonzero(const Element& x, const Element& y) {
  if (x.is_zero() || y.is_zero())
    throw InvariantError("pair check: elements must be nonzero");
}

Verdict from_endo(const EndoSolve& s) {
  switch (s.status) {
    case EndoSolve::Status::Solved:
      return Verdict::holds(*s.witness);
    case EndoSolve::Status::NoRationalSolution:
    case EndoSolve::Status::NoIntegralSolution:
      return Verdict::fails(s.certificate);
    case EndoSolve::Status::Unknown:
      return Verdict::unknown(0);
  }
  return Verdict::unknown(0);
}

}  // namespace

Verdict check_pair_fully(const GroupPtr& g, const Element& x, const Element& y) {
  require_nonzero(x, y);
  if (!chi_le(characteristic_of(*g, x), characteristic_of(*g, y)))
    throw InvariantError("check_pair_fully: chi(x) <= chi(y) fails, query is ill-posed");
  return from_endo(solve_endo_mapping(g, x, y));
}

Verdict check_pair_krylov(const GroupPtr& g, const Element& x, const Element& y) {
  require_nonzero(x, y);
  if (!(characteristic_of(*g, x) == characteristic_of(*g, y)))
    throw InvariantError("check_pair_krylov: chi(x) == chi(y) fails, query is ill-posed");
  return from_endo(solve_endo_mapping(g, x, y));
}

Verdict check_pair_transitive(const GroupPtr& g, const Element& x, const Element& y,
                              long bound) {
  require_nonzero(x, y);
  if (!(characteristic_of(*g, x) == characteristic_of(*g, y)))
    throw InvariantError("check_pair_transitive: chi(x) == chi(y) fails, query is ill-posed");
  return auto_mapping_exists(g, x, y, bound);
}

Verdict check_pair_weak(const GroupPtr& g, const Element& x, const Element& y,
                        long bound) {
  require_nonzero(x, y);
  EndoSolve fwd = solve_endo_mapping(g, x, y);
  if (fwd.status != EndoSolve::Status::Solved) return Verdict::vacuous();
  EndoSolve bwd = solve_endo_mapping(g, y, x);
  if (bwd.status != EndoSolve::Status::Solved) return Verdict::vacuous();
  return auto_mapping_exists(g, x, y, bound);
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<Element> sample_elements(const GroupPtr& g, const SamplerOptions& opt) {
  std::vector<Element> out = opt.user;
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> coord(-10, 10);
  std::uniform_int_distribution<int> small(-3, 3);
  auto gens = g->generators();
  std::uniform_int_distribution<size_t> which(0, gens.empty() ? 0 : gens.size() - 1);
  const Eigen::Index n = g->rank();
  for (int i = 0; i < opt.samples; ++i) {
    VecQ v(n);
    for (Eigen::Index j = 0; j < n; ++j) v(j) = Rat(coord(rng));
    Element x = g->element(v);
    if (!x.is_zero()) out.push_back(x);
    if (!gens.empty() && i % 2 == 0) {
      Element y = gens[which(rng)] * Rat(small(rng));
      if (i % 4 == 0) y = y + x;
      if (!y.is_zero()) out.push_back(y);
    }
  }
  return out;
}

std::vector<std::pair<Element, Element>> mutual_endo_pairs(const GroupPtr& g,
                                                           int count, uint64_t seed) {
  auto em = end_ring(g);
  SamplerOptions opt;
  opt.seed = seed;
  opt.samples = std::max(8, count / 2);
  auto pool = sample_elements(g, opt);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<size_t> which(0, pool.empty() ? 0 : pool.size() - 1);
  std::vector<std::pair<Element, Element>> out;
  long guard = 40L * count + 200;
  while (static_cast<int>(out.size()) < count && guard-- > 0) {
    const Element& x = pool[which(rng)];
    if (x.is_zero()) continue;
    VecQ c(em->rank());
    for (Eigen::Index i = 0; i < em->rank(); ++i) c(i) = Rat(coeff(rng));
    MatQ phi = em->combine(c);
    VecL yc(g->rank());
    for (Eigen::Index i = 0; i < g->rank(); ++i) {
      Laurent acc;
      for (Eigen::Index j = 0; j < g->rank(); ++j)
        acc += Laurent(phi(i, j)) * x.coords()(j);
      yc(i) = acc;
    }
    Element y(g, std::move(yc));
    if (y.is_zero()) continue;
    EndoSolve bwd = solve_endo_mapping(g, y, x);
    if (bwd.status != EndoSolve::Status::Solved) continue;
    out.emplace_back(x, y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification

int region_of(Flag fully, Flag transitive, Flag krylov, Flag weak) {
  auto def = [](Flag f) { return f != Flag::Unknown; };
  if (!(def(fully) && def(transitive) && def(krylov) && def(weak))) return 0;
  bool ft = fully == Flag::Yes, t = transitive == Flag::Yes, kt = krylov == Flag::Yes,
       wt = weak == Flag::Yes;
  if (ft && t && kt && wt) return 1;
  if (ft && !t && kt && !wt) return 2;
  if (!ft && t && kt && wt) return 3;
  if (!ft && !t && kt && !wt) return 4;
  if (!ft && !t && !kt && wt) return 5;
  if (!ft && !t && !kt && !wt) return 6;
  return 0;  // inconsistent combination; reported via `consistent`
}

RegionReport classify(const GroupPtr& g, const SamplerOptions& opt) {
  RegionReport rep;
  auto pool = sample_elements(g, opt);
  std::ostringstream scope;
  scope << "sampled scope: " << pool.size() << " elements, seed " << opt.seed
        << ", bound " << opt.bound;
  rep.scope = scope.str();

  struct Tally {
    long holds = 0, fails = 0, unknown = 0, checked = 0;
    Flag flag() const {
      if (fails > 0) return Flag::No;
      if (unknown > 0 || checked == 0) return Flag::Unknown;
      return Flag::Yes;
    }
  };
  Tally tf, tt, tk, tw;
  auto note = [&rep](const Element& x, const Element& y, Property p, const Verdict& v) {
    if (v.outcome == Verdict::Outcome::Fails || rep.witnesses.size() < 8)
      rep.witnesses.push_back({x, y, p, v});
  };
  auto count = [&rep](Tally& t, const Verdict& v) {
    ++rep.pairs_checked;
    ++t.checked;
    switch (v.outcome) {
      case Verdict::Outcome::Holds: ++t.holds; break;
      case Verdict::Outcome::Fails: ++t.fails; break;
      case Verdict::Outcome::Unknown: ++t.unknown; break;
      case Verdict::Outcome::Vacuous: --t.checked; --rep.pairs_checked; break;
    }
  };

  std::vector<Characteristic> chis;
  chis.reserve(pool.size());
  for (const auto& x : pool) chis.push_back(characteristic_of(*g, x));

  const size_t cap = static_cast<size_t>(std::max(8, opt.samples));
  size_t fully_done = 0, eq_done = 0;
  for (size_t i = 0; i < pool.size(); ++i) {
    for (size_t j = 0; j < pool.size(); ++j) {
      if (i == j) continue;
      if (fully_done < cap && chi_le(chis[i], chis[j])) {
        Verdict v = check_pair_fully(g, pool[i], pool[j]);
        count(tf, v);
        note(pool[i], pool[j], Property::Fully, v);
        ++fully_done;
      }
      if (eq_done < cap && chis[i] == chis[j]) {
        Verdict vk = check_pair_krylov(g, pool[i], pool[j]);
        count(tk, vk);
        note(pool[i], pool[j], Property::Krylov, vk);
        Verdict vt = check_pair_transitive(g, pool[i], pool[j], opt.bound);
        count(tt, vt);
        note(pool[i], pool[j], Property::Transitive, vt);
        // pair-level consistency: an automorphism is an endomorphism
        if (vt.outcome == Verdict::Outcome::Holds &&
            vk.outcome == Verdict::Outcome::Fails)
          rep.consistent = false;
        ++eq_done;
      }
    }
  }
  // sign pairs exercise the transitive checks even on rigid groups
  for (size_t i = 0; i < pool.size() && eq_done < 2 * cap; ++i, ++eq_done) {
    Element neg = pool[i] * Rat(-1);
    Verdict vk = check_pair_krylov(g, pool[i], neg);
    count(tk, vk);
    Verdict vt = check_pair_transitive(g, pool[i], neg, opt.bound);
    count(tt, vt);
    if (vt.outcome == Verdict::Outcome::Holds && vk.outcome == Verdict::Outcome::Fails)
      rep.consistent = false;
  }
  for (auto& [x, y] : mutual_endo_pairs(g, std::max(4, opt.samples / 2), opt.seed + 1)) {
    Verdict vw = check_pair_weak(g, x, y, opt.bound);
    count(tw, vw);
    note(x, y, Property::Weak, vw);
  }

  rep.fully = tf.flag();
  rep.transitive = tt.flag();
  rep.krylov = tk.flag();
  rep.weak = tw.flag();

  auto yes = [](Flag f) { return f == Flag::Yes; };
  auto no = [](Flag f) { return f == Flag::No; };
  if (yes(rep.transitive) && no(rep.krylov)) rep.consistent = false;
  if (yes(rep.fully) && no(rep.krylov)) rep.consistent = false;
  if (yes(rep.transitive) && no(rep.weak)) rep.consistent = false;
  if (rep.consistent) rep.region = region_of(rep.fully, rep.transitive, rep.krylov, rep.weak);
  return rep;
}

// ---------------------------------------------------------------------------
// Implication demonstrations

namespace {

GroupPtr power(const GroupPtr& a, int copies) {
  GroupPtr g = a;
  for (int i = 1; i < copies; ++i) g = direct_sum(g, a);
  return g;
}

struct ScopeCheck {
  long checked = 0;
  bool holds = true;
  bool vacuous = true;
};

ScopeCheck krylov_on_scope(const GroupPtr& g, const SamplerOptions& opt) {
  ScopeCheck out;
  auto pool = sample_elements(g, opt);
  std::vector<Characteristic> chis;
  for (const auto& x : pool) chis.push_back(characteristic_of(*g, x));
  const size_t cap = static_cast<size_t>(std::max(6, opt.samples / 2));
  size_t done = 0;
  for (size_t i = 0; i < pool.size() && done < cap; ++i)
    for (size_t j = 0; j < pool.size() && done < cap; ++j) {
      if (i == j || !(chis[i] == chis[j])) continue;
      Verdict v = check_pair_krylov(g, pool[i], pool[j]);
      ++out.checked;
      ++done;
      out.vacuous = false;
      if (!v.is_holds()) out.holds = false;
    }
  return out;
}

ScopeCheck fully_on_scope(const GroupPtr& g, const SamplerOptions& opt) {
  ScopeCheck out;
  auto pool = sample_elements(g, opt);
  std::vector<Characteristic> chis;
  for (const auto& x : pool) chis.push_back(characteristic_of(*g, x));
  const size_t cap = static_cast<size_t>(std::max(6, opt.samples / 2));
  size_t done = 0;
  for (size_t i = 0; i < pool.size() && done < cap; ++i)
    for (size_t j = 0; j < pool.size() && done < cap; ++j) {
      if (i == j || !chi_le(chis[i], chis[j])) continue;
      Verdict v = check_pair_fully(g, pool[i], pool[j]);
      ++out.checked;
      ++done;
      out.vacuous = false;
      if (!v.is_holds()) out.holds = false;
    }
  return out;
}

ScopeCheck transitive_on_scope(const GroupPtr& g, const SamplerOptions& opt) {
  ScopeCheck out;
  auto pool = sample_elements(g, opt);
  std::vector<Characteristic> chis;
  for (const auto& x : pool) chis.push_back(characteristic_of(*g, x));
  const size_t cap = static_cast<size_t>(std::max(6, opt.samples / 2));
  size_t done = 0;
  for (size_t i = 0; i < pool.size() && done < cap; ++i)
    for (size_t j = 0; j < pool.size() && done < cap; ++j) {
      if (i == j || !(chis[i] == chis[j])) continue;
      Verdict v = check_pair_transitive(g, pool[i], pool[j], opt.bound);
      ++out.checked;
      ++done;
      out.vacuous = false;
      if (v.outcome != Verdict::Outcome::Holds) out.holds = false;
    }
  return out;
}

bool pi_disjoint(const Characteristic& a, const Characteristic& b) {
  const auto& reg = a.registry();
  for (int c = 0; c < reg->class_count(); ++c)
    if (!a.at_class(c).infinite && !b.at_class(c).infinite) return false;
  for (const auto& [p, h] : a.overrides())
    if (!h.infinite && !b.at_prime(p).infinite) return false;
  for (const auto& [p, h] : b.overrides())
    if (!a.at_prime(p).infinite && !h.infinite) return false;
  return true;
}

}  // namespace

DemoReport demonstrate_implication(const std::string& name, const GroupPtr& component,
                                   int copies, const SamplerOptions& opt) {
  DemoReport rep;
  rep.name = name;
  if (copies < 2) throw std::invalid_argument("demonstrate_implication: copies must be >= 2");
  GroupPtr g = power(component, copies);

  if (name == "lemma1") {
    ScopeCheck hyp = krylov_on_scope(g, opt);
    rep.hypothesis_checked = hyp.checked;
    if (hyp.vacuous || !hyp.holds) {
      rep.vacuous = true;
      rep.note = "hypothesis not supported at sampled scope";
      return rep;
    }
    ScopeCheck con = fully_on_scope(component, opt);
    rep.conclusion_checked = con.checked;
    rep.pass = con.holds && !con.vacuous;
    rep.note = "power Krylov at scope; component fully transitive at scope";
    return rep;
  }
  if (name == "prop7") {
    auto pool = sample_elements(g, opt);
    TypeRep t0;
    bool homog = true, first = true;
    for (const auto& x : pool) {
      TypeRep t = type_of_element(*g, x);
      if (first) {
        t0 = t;
        first = false;
      } else if (!(t == t0)) {
        homog = false;
      }
    }
    ScopeCheck hyp = fully_on_scope(g, opt);
    rep.hypothesis_checked = hyp.checked;
    if (!homog || hyp.vacuous || !hyp.holds) {
      rep.vacuous = true;
      rep.note = homog ? "full transitivity not supported at scope"
                       : "group is not homogeneous at scope";
      return rep;
    }
    ScopeCheck con = transitive_on_scope(g, opt);
    rep.conclusion_checked = con.checked;
    rep.pass = con.holds && !con.vacuous;
    rep.note = "homogeneous fully transitive at scope; transitive at scope";
    return rep;
  }
  if (name == "prop11_2") {
    ScopeCheck hyp = krylov_on_scope(g, opt);
    rep.hypothesis_checked = hyp.checked;
    if (hyp.vacuous || !hyp.holds) {
      rep.vacuous = true;
      rep.note = "hypothesis not supported at sampled scope";
      return rep;
    }
    bool ok = true;
    long total = 0;
    for (int nn = 1; nn < copies; ++nn) {
      GroupPtr sub = nn == 1 ? component : power(component, nn);
      ScopeCheck con = fully_on_scope(sub, opt);
      total += con.checked;
      if (!con.holds || con.vacuous) ok = false;
    }
    rep.conclusion_checked = total;
    rep.pass = ok;
    rep.note = "power Krylov at scope; all lower powers fully transitive at scope";
    return rep;
  }
  if (name == "prop14") {
    auto pool = sample_elements(component, opt);
    bool cond = true;
    for (size_t i = 0; i < pool.size(); ++i)
      for (size_t j = i + 1; j < pool.size(); ++j) {
        Characteristic ci = characteristic_of(*component, pool[i]);
        Characteristic cj = characteristic_of(*component, pool[j]);
        TypeRep ti(ci), tj(cj);
        if (incomparable(ti, tj) && !pi_disjoint(ci, cj)) cond = false;
      }
    ScopeCheck hyp = krylov_on_scope(g, opt);
    rep.hypothesis_checked = hyp.checked;
    if (!cond || hyp.vacuous || !hyp.holds) {
      rep.vacuous = true;
      rep.note = cond ? "hypothesis not supported at sampled scope"
                      : "type condition fails at sampled scope";
      return rep;
    }
    ScopeCheck con = fully_on_scope(g, opt);
    rep.conclusion_checked = con.checked;
    rep.pass = con.holds && !con.vacuous;
    rep.note = "types comparable or support-disjoint; Krylov power fully transitive at scope";
    return rep;
  }
  if (name == "cor9") {
    auto pool = sample_elements(component, opt);
    bool homog = true;
    for (size_t i = 1; i < pool.size(); ++i)
      if (!(type_of_element(*component, pool[i]) ==
            type_of_element(*component, pool[0])))
        homog = false;
    if (!homog) {
      rep.vacuous = true;
      rep.note = "component is not homogeneous at scope";
      return rep;
    }
    ScopeCheck ft = fully_on_scope(component, opt);
    ScopeCheck tr = transitive_on_scope(g, opt);
    rep.hypothesis_checked = ft.checked;
    rep.conclusion_checked = tr.checked;
    if (ft.vacuous || tr.vacuous) {
      rep.vacuous = true;
      rep.note = "no pairs at sampled scope";
      return rep;
    }
    rep.pass = ft.holds == tr.holds;
    rep.note = "fully transitive component iff transitive power, at scope";
    return rep;
  }
  throw std::invalid_argument("demonstrate_implication: unknown name '" + name + "'");
}

}  // namespace tfg
