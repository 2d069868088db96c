#include "tfg/catalog.hpp"

#include <sstream>

namespace tfg {

namespace {

VecQ vq2(Rat a, Rat b) {
  VecQ v(2);
  v << a, b;
  return v;
}

Int vec_content(const VecZ& v) { return content(v); }

void require_primitive_lines(const std::vector<VecZ>& lines, Eigen::Index rank) {
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].size() != rank)
      throw InvariantError("catalog: line of wrong dimension");
    if (vec_content(lines[i]) != 1)
      throw InvariantError("catalog: line generator is not primitive");
    for (size_t j = i + 1; j < lines.size(); ++j) {
      // proportional primitive integer vectors differ at most by sign
      bool eq = true, neg = true;
      for (Eigen::Index k = 0; k < rank; ++k) {
        if (lines[i](k) != lines[j](k)) eq = false;
        if (lines[i](k) != -lines[j](k)) neg = false;
      }
      if (eq || neg) throw InvariantError("catalog: proportional lines");
    }
  }
}

}  // namespace

std::vector<VecZ> default_lines(Eigen::Index rank) {
  std::vector<VecZ> lines;
  auto push = [&](std::initializer_list<int> xs) {
    VecZ v(rank);
    Eigen::Index i = 0;
    for (int x : xs) v(i++) = x;
    lines.push_back(v);
  };
  if (rank == 2) {
    push({1, 0});
    push({0, 1});
    push({1, 1});
  } else if (rank == 3) {
    push({1, 0, 0});
    push({0, 1, 0});
    push({0, 0, 1});
    push({1, 1, 0});
    push({1, 0, 1});
    push({0, 1, 1});
    push({1, 1, 1});
  } else {
    throw std::invalid_argument("default_lines: only ranks 2 and 3 are built in");
  }
  return lines;
}

CatalogEntry example1() {
  auto reg = Registry::make({Int(2)}, {});
  Characteristic chi(reg);
  chi.set_prime(Int(2), HeightValue::of(1));
  CatalogEntry e;
  e.name = "ex1";
  e.group = rank1(reg, chi, "rank1 example");
  e.expected_region = 1;
  Element one = e.group->basis_element(0);
  e.witnesses.push_back({one, one * Rat(-1), Property::Transitive,
                         Verdict::Outcome::Holds, "sign flip"});
  e.witnesses.push_back({one, one * Rat(2), Property::Fully, Verdict::Outcome::Holds,
                         "multiplication by 2"});
  e.witnesses.push_back({one * Rat(3), one * Rat(-3), Property::Krylov,
                         Verdict::Outcome::Holds, "same line, equal heights"});
  e.notes = "any rank-1 group is transitive and fully transitive";
  return e;
}

namespace {

// Shared machinery of the rigid-line constructions: every listed line gets a
// fresh prime family along which it becomes divisible once, the local basis
// being (line/p | complement of the line).  `skip_first` leaves the first
// line without a family.
CatalogEntry rigid_lines_group(Eigen::Index rank, std::vector<VecZ> lines,
                               bool skip_first, const std::string& name) {
  if (lines.empty()) lines = default_lines(rank);
  require_primitive_lines(lines, rank);
  const size_t kfirst = skip_first ? 1 : 0;

  // Unimodular completions and the finite refinements the construction
  // imposes: the complement part of line 1 must have height 0 along every
  // family prime, so primes dividing it are thrown out of the family.
  std::vector<MatZ> completions;
  std::vector<FamilySpec> families;
  std::set<Int> explicit_primes;
  for (size_t k = 0; k < lines.size(); ++k)
    completions.push_back(unimodular_completion(lines[k]));

  for (size_t k = kfirst; k < lines.size(); ++k) {
    FamilySpec f;
    f.id = "P" + std::to_string(k + 1);
    families.push_back(f);
  }
  auto base = Registry::make(std::vector<Int>(explicit_primes.begin(), explicit_primes.end()),
                             families);

  // Condition (c)-style refinement: express the first three lines over each
  // decomposition and exclude the primes where the complement part gains
  // height.  With the built-in lines the complement parts are unimodular and
  // nothing is excluded, but the refinement is applied uniformly.
  auto reg = base;
  const size_t guards = std::min<size_t>(lines.size(), 3);
  for (size_t k = kfirst; k < lines.size(); ++k) {
    std::set<Int> removed;
    MatQ uinv = Eigen::FullPivLU<MatQ>(to_rational(completions[k])).inverse();
    for (size_t j = 0; j < guards; ++j) {
      if (j == k) continue;
      VecQ coords = uinv * to_rational(lines[j]);
      VecZ tail(rank - 1);
      for (Eigen::Index i = 1; i < rank; ++i) {
        Rat q = coords(i);
        if (denominator(q) != 1)
          throw std::logic_error("rigid_lines_group: non-integral decomposition");
        tail(i - 1) = numerator(q);
      }
      VecZ b = completions[k].rightCols(rank - 1) * tail;
      Int c = content(b);
      if (c > 1)
        for (const Int& p : prime_support(Rat(c))) removed.insert(p);
    }
    reg = reg->refine_family("P" + std::to_string(k + 1), removed);
  }

  std::map<int, LocalData> locals;
  for (size_t k = kfirst; k < lines.size(); ++k) {
    int cls = reg->index_of("P" + std::to_string(k + 1));
    MatL b(rank, rank);
    for (Eigen::Index i = 0; i < rank; ++i)
      for (Eigen::Index j = 0; j < rank; ++j) {
        Rat entry(completions[k](i, j));
        if (j == 0)
          b(i, j) = entry == 0 ? Laurent() : Laurent::monomial(entry, -1, cls);
        else
          b(i, j) = Laurent(entry);
      }
    locals[cls] = LocalData{std::move(b), MatQ(rank, 0)};
  }
  CatalogEntry e;
  e.group = FRGroup::make(reg, rank, std::move(locals), name);
  return e;
}

}  // namespace

CatalogEntry example3(Eigen::Index rank, std::vector<VecZ> lines) {
  CatalogEntry e = rigid_lines_group(rank, std::move(lines), /*skip_first=*/true,
                                     "rigid lines, first line bare");
  e.name = "ex3";
  e.expected_region = 3;
  e.truncated_region = 5;  // finite truncation is transitive on lines only
  e.notes =
      "rigid-line construction; transitivity holds on same-line pairs, the "
      "finite truncation is not globally transitive";
  GroupPtr g = e.group;
  Element a1 = g->basis_element(0);
  Element a2 = g->basis_element(1);
  e.witnesses.push_back({a1, a2, Property::Fully, Verdict::Outcome::Fails,
                         "first line does not reach the second"});
  e.witnesses.push_back({a2 * Rat(3), a2 * Rat(-3), Property::Transitive,
                         Verdict::Outcome::Holds, "same line, sign flip"});
  e.witnesses.push_back({a2, a2 * Rat(-1), Property::Transitive,
                         Verdict::Outcome::Holds, "line generator sign flip"});
  e.witnesses.push_back({a1, a1, Property::Krylov, Verdict::Outcome::Holds,
                         "identity pair"});
  return e;
}

CatalogEntry theorem15_group() {
  CatalogEntry e = rigid_lines_group(3, {}, /*skip_first=*/false,
                                     "rigid lines, all lines refined");
  e.name = "thm15";
  e.expected_region = 1;
  e.truncated_region = 5;  // same truncation caveat as the rigid-line entry
  e.notes =
      "rank-3 rigid group with endomorphism ring Z; its square is the "
      "square counterexample";
  GroupPtr g = e.group;
  Element a1 = g->basis_element(0);
  e.witnesses.push_back({a1, a1 * Rat(-1), Property::Transitive,
                         Verdict::Outcome::Holds, "sign flip"});
  e.witnesses.push_back({a1 * Rat(2), a1 * Rat(2), Property::Krylov,
                         Verdict::Outcome::Holds, "identity pair"});
  return e;
}

SquareWitness theorem15_square_witness(const CatalogEntry& entry) {
  SquareWitness w;
  w.square = direct_sum(entry.group, entry.group);
  VecQ x = VecQ::Zero(6), y = VecQ::Zero(6);
  x(0) = Rat(1);
  x(4) = Rat(1);  // a1 + b2
  y(0) = Rat(1);
  y(5) = Rat(1);  // a1 + b3
  w.x = w.square->element(x);
  w.y = w.square->element(y);
  return w;
}

CatalogEntry example5(const Characteristic& chi_a, const Characteristic& chi_b,
                      const Int& p) {
  if (!incomparable(TypeRep(chi_a), TypeRep(chi_b)))
    throw InvariantError("example5: types must be incomparable");
  if (chi_a.at_prime(p).infinite || chi_b.at_prime(p).infinite)
    throw InvariantError("example5: both groups must be reduced at p");
  auto reg = chi_a.registry();
  auto a = rank1(reg, chi_a, "A");
  auto b = rank1(reg, chi_b, "B");
  CatalogEntry e;
  e.name = "ex5";
  e.group = direct_sum(a, b);
  e.expected_region = 5;
  Element x = e.group->element(vq2(Rat(p), Rat(1)));
  Element y = e.group->element(vq2(Rat(1), Rat(1)));
  e.witnesses.push_back({x, y, Property::Transitive, Verdict::Outcome::Fails,
                         "no unit divides by p on the first block"});
  e.witnesses.push_back({x, y, Property::Krylov, Verdict::Outcome::Fails,
                         "no endomorphism divides by p either"});
  e.witnesses.push_back({x, y, Property::Fully, Verdict::Outcome::Fails,
                         "equal characteristics, still unreachable"});
  e.notes = "weakly transitive but neither transitive nor fully transitive";
  return e;
}

CatalogEntry example5_default() {
  auto reg = Registry::make({Int(2)}, {{"PA", {}}, {"PB", {}}});
  Characteristic ca(reg), cb(reg);
  ca.set_class("PA", HeightValue::inf());
  cb.set_class("PB", HeightValue::inf());
  return example5(ca, cb, Int(2));
}

CatalogEntry example_complementary(const Characteristic& chi_a,
                                   const Characteristic& chi_b) {
  auto reg = chi_a.registry();
  for (int c = 0; c < reg->class_count(); ++c) {
    bool ia = chi_a.at_class(c).infinite, ib = chi_b.at_class(c).infinite;
    if (ia == ib)
      throw InvariantError("example_complementary: exactly one side must be divisible per class");
  }
  for (const auto& coll : {chi_a.overrides(), chi_b.overrides()})
    for (const auto& [p, h] : coll) {
      bool ia = chi_a.at_prime(p).infinite, ib = chi_b.at_prime(p).infinite;
      if (ia == ib)
        throw InvariantError("example_complementary: exactly one side must be divisible per prime");
    }
  auto a = rank1(reg, chi_a, "A");
  auto b = rank1(reg, chi_b, "B");
  CatalogEntry e;
  e.name = "compl";
  e.group = direct_sum(a, b);
  e.expected_region = 1;
  Element x = e.group->element(vq2(Rat(1), Rat(0)));
  Element y = e.group->element(vq2(Rat(3), Rat(0)));
  e.witnesses.push_back({x, y, Property::Fully, Verdict::Outcome::Holds,
                         "block scaling"});
  e.witnesses.push_back({x, x * Rat(-1), Property::Transitive, Verdict::Outcome::Holds,
                         "sign flip"});
  e.notes = "complementary divisibility forces componentwise comparisons";
  return e;
}

CatalogEntry example_complementary_default() {
  auto reg = Registry::make({}, {{"P1", {}}});
  Characteristic ca(reg), cb(reg);
  ca.set_class("P1", HeightValue::inf());
  cb.set_class(reg->rest_class(), HeightValue::inf());
  return example_complementary(ca, cb);
}

CatalogEntry example6() {
  auto reg = Registry::make({Int(5)}, {});
  Characteristic cz(reg);
  auto z = rank1(reg, cz, "Z");
  Characteristic ch(reg);
  ch.set_class(reg->rest_class(), HeightValue::of(1));
  auto h = rank1(reg, ch, "H");
  CatalogEntry e;
  e.name = "ex6";
  e.group = direct_sum(z, h);
  e.expected_region = 6;
  Element x = e.group->element(vq2(Rat(5), Rat(1)));
  Element y1 = e.group->element(vq2(Rat(1), Rat(1)));
  Element y2 = e.group->element(vq2(Rat(5), Rat(2)));
  e.witnesses.push_back({x, y1, Property::Krylov, Verdict::Outcome::Fails,
                         "first coordinate needs division by 5"});
  e.witnesses.push_back({x, y2, Property::Weak, Verdict::Outcome::Fails,
                         "mutual endomorphisms exist, no automorphism does"});
  e.notes = "neither Krylov transitive nor weakly transitive";
  return e;
}

CatalogEntry compose_disjoint_localizations(const GroupPtr& a, const ComponentFlags& fa,
                                            const GroupPtr& b, const ComponentFlags& fb) {
  if (a->registry() != b->registry())
    throw InvariantError("compose: registries differ");
  const auto& reg = a->registry();
  for (int c = 0; c < reg->class_count(); ++c) {
    bool div_a = a->solver(c).qdim == 0;
    bool div_b = b->solver(c).qdim == 0;
    if (!div_a && !div_b)
      throw InvariantError("compose: supports overlap at class " + reg->cls(c).id);
  }
  CatalogEntry e;
  e.name = "compose";
  e.group = direct_sum(a, b);
  const Eigen::Index na = a->rank();
  auto lift_a = [&](const VecQ& v) {
    VecQ out = VecQ::Zero(e.group->rank());
    out.head(na) = v;
    return e.group->element(out);
  };
  auto lift_b = [&](const VecQ& v) {
    VecQ out = VecQ::Zero(e.group->rank());
    out.tail(e.group->rank() - na) = v;
    return e.group->element(out);
  };
  for (const auto& [x, y] : fa.fully_refutations)
    e.witnesses.push_back({lift_a(x), lift_a(y), Property::Fully,
                           Verdict::Outcome::Fails, "lifted from the first component"});
  for (const auto& [x, y] : fb.fully_refutations)
    e.witnesses.push_back({lift_b(x), lift_b(y), Property::Fully,
                           Verdict::Outcome::Fails, "lifted from the second component"});
  for (const auto& [x, y] : fa.transitive_refutations)
    e.witnesses.push_back({lift_a(x), lift_a(y), Property::Transitive,
                           Verdict::Outcome::Fails, "lifted from the first component"});
  for (const auto& [x, y] : fb.transitive_refutations)
    e.witnesses.push_back({lift_b(x), lift_b(y), Property::Transitive,
                           Verdict::Outcome::Fails, "lifted from the second component"});
  bool ft = fa.fully_transitive && fb.fully_transitive &&
            fa.fully_refutations.empty() && fb.fully_refutations.empty();
  bool t = fa.transitive && fb.transitive && fa.transitive_refutations.empty() &&
           fb.transitive_refutations.empty();
  bool kt = (fa.fully_transitive || fa.transitive) &&
            (fb.fully_transitive || fb.transitive);
  bool wt = fa.weakly_transitive && fb.weakly_transitive && (t || !kt);
  e.expected_region = region_of(ft ? Flag::Yes : Flag::No, t ? Flag::Yes : Flag::No,
                                kt ? Flag::Yes : Flag::No, wt ? Flag::Yes : Flag::No);
  std::ostringstream os;
  os << "composite of class-disjoint supports; componentwise mapping logic applies";
  e.notes = os.str();
  return e;
}

std::vector<std::string> catalog_names() {
  return {"ex1", "ex3", "ex5", "ex6", "compl", "thm15"};
}

CatalogEntry catalog_entry(const std::string& name) {
  if (name == "ex1") return example1();
  if (name == "ex3") return example3();
  if (name == "ex5") return example5_default();
  if (name == "ex6") return example6();
  if (name == "compl") return example_complementary_default();
  if (name == "thm15") return theorem15_group();
  throw ParseError("catalog: unknown entry '" + name + "'");
}

}  // namespace tfg
