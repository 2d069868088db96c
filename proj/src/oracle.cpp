#include "tfg/oracle.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "tfg/endoring.hpp"

namespace tfg::oracle {

namespace {

Int egcd(const Int& a, const Int& b, Int& x, Int& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  Int x1, y1;
  Int g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

Int mod_inverse(Int a, const Int& m) {
  a %= m;
  if (a < 0) a += m;
  Int x, y;
  Int g = egcd(a, m, x, y);
  if (g != 1 && g != -1) throw std::logic_error("mod_inverse: not coprime");
  x %= m;
  if (x < 0) x += m;
  return x;
}

Int pow_int(const Int& p, long e) {
  Int out = 1;
  for (long i = 0; i < e; ++i) out *= p;
  return out;
}

// p-primary component of q mod Z, as a residue modulo p^prec.
Int frac_part_at(const Rat& q, const Int& p, long prec) {
  if (q == 0) return 0;
  Int num = numerator(q), den = denominator(q);
  long e = 0;
  while (den % p == 0) {
    den /= p;
    ++e;
  }
  if (e == 0) return 0;
  if (e > prec) throw std::logic_error("frac_part_at: precision too small");
  Int mod = pow_int(p, prec);
  Int r = (num % mod) * mod_inverse(den, mod) % mod;
  r = r * pow_int(p, prec - e) % mod;
  if (r < 0) r += mod;
  return r;
}

struct PrimePart {
  Int p;
  long prec = 0;
  Int mod = 1;
  std::set<std::vector<Int>> members;
};

std::vector<Int> frac_vector(const VecQ& x, const PrimePart& part) {
  std::vector<Int> out;
  out.reserve(static_cast<size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out.push_back(frac_part_at(x(i), part.p, part.prec));
  return out;
}

long denominator_exponent(const VecQ& x, const Int& p) {
  long e = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) == 0) continue;
    Int den = denominator(x(i));
    long k = 0;
    while (den % p == 0) {
      den /= p;
      ++k;
    }
    e = std::max(e, k);
  }
  return e;
}

struct ViewState {
  std::vector<PrimePart> parts;
};

std::map<const FRGroup*, ViewState>& state_cache() {
  static std::map<const FRGroup*, ViewState> cache;
  return cache;
}

ViewState& state_for(const RealizedView& v) {
  auto& cache = state_cache();
  auto it = cache.find(v.group.get());
  if (it != cache.end()) return it->second;
  ViewState st;
  for (const Int& p : v.declared_primes) {
    long prec = 0;
    for (const VecQ& g : v.generators) prec = std::max(prec, denominator_exponent(g, p));
    if (prec == 0) continue;
    PrimePart part;
    part.p = p;
    part.prec = prec;
    part.mod = pow_int(p, prec);
    const size_t n = static_cast<size_t>(v.generators.front().size());
    std::vector<std::vector<Int>> gens;
    for (const VecQ& g : v.generators) {
      auto f = frac_vector(g, part);
      bool zero = std::all_of(f.begin(), f.end(), [](const Int& x) { return x == 0; });
      if (!zero) gens.push_back(std::move(f));
    }
    std::vector<Int> zero(n, Int(0));
    part.members.insert(zero);
    std::vector<std::vector<Int>> queue = {zero};
    long steps = 0;
    while (!queue.empty()) {
      auto cur = queue.back();
      queue.pop_back();
      for (const auto& g : gens) {
        if (++steps > v.budget)
          throw InvariantError("oracle: budget exceeded while closing a p-part");
        std::vector<Int> nxt(cur.size());
        for (size_t i = 0; i < cur.size(); ++i) {
          nxt[i] = cur[i] + g[i];
          if (nxt[i] >= part.mod) nxt[i] -= part.mod;
        }
        if (part.members.insert(nxt).second) queue.push_back(nxt);
      }
    }
    st.parts.push_back(std::move(part));
  }
  return cache.emplace(v.group.get(), std::move(st)).first->second;
}

}  // namespace

RealizedView make_view(const GroupPtr& g, long depth, long budget) {
  RealizedView v;
  v.group = g;
  v.budget = budget;
  const Eigen::Index n = g->rank();
  for (Eigen::Index i = 0; i < n; ++i) {
    VecQ e = VecQ::Zero(n);
    e(i) = Rat(1);
    v.generators.push_back(e);
  }
  const auto& reg = g->registry();
  for (int c = 0; c < reg->class_count(); ++c) {
    if (reg->cls(c).kind != ClassKind::Explicit) continue;
    v.declared_primes.push_back(reg->cls(c).prime);
    if (!g->has_local(c)) continue;
    const LocalData& ld = g->local(c);
    for (Eigen::Index j = 0; j < n; ++j) {
      VecQ col(n);
      bool plain = true;
      for (Eigen::Index i = 0; i < n; ++i) {
        col(i) = ld.basis(i, j).rational_value();  // realized: no symbols here
        if (i == j ? col(i) != 1 : col(i) != 0) plain = false;
      }
      if (!plain) v.generators.push_back(col);
    }
    Rat scale = Rat(1) / pow_rat(Rat(reg->cls(c).prime), depth);
    for (Eigen::Index j = 0; j < ld.divisible.cols(); ++j) {
      VecQ col = ld.divisible.col(j);
      Int lead = 1;
      for (Eigen::Index i = 0; i < n; ++i)
        if (col(i) != 0) lead *= denominator(col(i));
      v.generators.push_back(col * Rat(lead) * scale);
    }
  }
  return v;
}

bool member(const RealizedView& v, const VecQ& x) {
  ViewState& st = state_for(v);
  std::set<Int> primes;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) == 0) continue;
    for (const Int& p : prime_support(x(i)))
      if (denominator(x(i)) % p == 0) primes.insert(p);
  }
  for (const Int& p : primes) {
    const PrimePart* part = nullptr;
    for (const auto& pp : st.parts)
      if (pp.p == p) part = &pp;
    if (!part) return false;
    if (denominator_exponent(x, p) > part->prec) return false;
    if (!part->members.count(frac_vector(x, *part))) return false;
  }
  return true;
}

std::optional<long> brute_force_height(const RealizedView& v, const VecQ& x,
                                       const Int& p, long kmax) {
  if (!member(v, x)) throw InvariantError("brute_force_height: element outside the group");
  Rat scale(1);
  long best = 0;
  for (long k = 1; k <= kmax; ++k) {
    scale /= Rat(p);
    if (!member(v, VecQ(x * scale))) return best;
    best = k;
  }
  return std::nullopt;  // >= kmax
}

namespace {

std::vector<Rat> entry_candidates(const RealizedView& v, long num_bound, long den_bound) {
  std::vector<Int> dens;
  for (Int b = 1; b <= den_bound; ++b) {
    bool ok = true;
    for (const Int& q : prime_support(Rat(b)))
      if (std::find(v.declared_primes.begin(), v.declared_primes.end(), q) ==
          v.declared_primes.end())
        ok = false;
    if (ok) dens.push_back(b);
  }
  std::vector<Rat> out;
  for (const Int& b : dens)
    for (long a = -num_bound; a <= num_bound; ++a) {
      Rat q(Int(a), b);
      if (denominator(q) != b) continue;  // one representative per value
      out.push_back(q);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <typename Accept>
void enumerate_box(const RealizedView& v, long num_bound, long den_bound,
                   const Accept& accept) {
  const Eigen::Index n = v.group->rank();
  std::vector<Rat> entries = entry_candidates(v, num_bound, den_bound);
  long budget = v.budget;

  std::vector<VecQ> cols;
  {
    std::vector<size_t> idx(static_cast<size_t>(n), 0);
    while (true) {
      if (--budget < 0) throw InvariantError("oracle: enumeration budget exceeded");
      VecQ col(n);
      for (Eigen::Index i = 0; i < n; ++i) col(i) = entries[idx[static_cast<size_t>(i)]];
      if (member(v, col)) cols.push_back(col);
      Eigen::Index j = 0;
      while (j < n) {
        if (++idx[static_cast<size_t>(j)] < entries.size()) break;
        idx[static_cast<size_t>(j)] = 0;
        ++j;
      }
      if (j == n) break;
    }
  }

  std::vector<std::pair<VecQ, Eigen::Index>> gen_by_level;
  for (const VecQ& g : v.generators) {
    Eigen::Index top = -1;
    bool fractional = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (g(i) != 0) top = i;
      if (g(i) != 0 && denominator(g(i)) != 1) fractional = true;
    }
    if (fractional && top >= 0) gen_by_level.emplace_back(g, top);
  }

  MatQ m = MatQ::Zero(n, n);
  std::function<void(Eigen::Index)> rec = [&](Eigen::Index level) {
    if (--budget < 0) throw InvariantError("oracle: enumeration budget exceeded");
    if (level == n) {
      accept(m);
      return;
    }
    for (size_t c = 0; c < cols.size(); ++c) {
      m.col(level) = cols[c];
      bool ok = true;
      for (const auto& [g, top] : gen_by_level) {
        if (top != level) continue;
        VecQ img = VecQ::Zero(n);
        for (Eigen::Index j = 0; j <= level; ++j) img += m.col(j) * g(j);
        if (!member(v, img)) {
          ok = false;
          break;
        }
      }
      if (ok) rec(level + 1);
    }
  };
  rec(0);
}

bool matq_less(const MatQ& a, const MatQ& b) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) < b(i, j)) return true;
      if (b(i, j) < a(i, j)) return false;
    }
  return false;
}

}  // namespace

std::vector<MatQ> brute_force_end(const RealizedView& v, long num_bound, long den_bound) {
  std::vector<MatQ> out;
  enumerate_box(v, num_bound, den_bound, [&](const MatQ& m) { out.push_back(m); });
  std::sort(out.begin(), out.end(), matq_less);
  return out;
}

std::vector<MatQ> module_members_in_box(const RealizedView& v, long num_bound,
                                        long den_bound) {
  auto em = end_ring(v.group);
  std::vector<MatQ> out;
  enumerate_box(v, num_bound, den_bound, [&](const MatQ& m) {
    if (em->contains(m)) out.push_back(m);
  });
  std::sort(out.begin(), out.end(), matq_less);
  return out;
}

// ---------------------------------------------------------------------------

ScalarLemmaReport scalar_lemma_check(int dim, int trials, uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("scalar_lemma_check: dim must be >= 2");
  ScalarLemmaReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> small(-5, 5);

  // Sampled lines: all nonzero 0/1 vectors except e1, the excluded line.
  std::vector<VecQ> lines;
  for (unsigned mask = 1; mask < (1u << dim); ++mask) {
    if (mask == 1u) continue;
    VecQ w = VecQ::Zero(dim);
    for (int i = 0; i < dim; ++i)
      if (mask & (1u << i)) w(i) = Rat(1);
    lines.push_back(w);
  }

  const Eigen::Index nn = static_cast<Eigen::Index>(dim) * dim;
  std::vector<VecQ> rows;
  for (const VecQ& w : lines) {
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        VecQ row = VecQ::Zero(nn);
        for (int k = 0; k < dim; ++k) {
          row(i * dim + k) += w(k) * w(j);
          row(j * dim + k) -= w(k) * w(i);
        }
        rows.push_back(row);
      }
  }
  MatQ a(static_cast<Eigen::Index>(rows.size()), nn);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    a.row(i) = rows[static_cast<size_t>(i)].transpose();
  Eigen::FullPivLU<MatQ> lu(a);

  for (int t = 0; t < trials; ++t) {
    ++rep.trials;
    if (lu.dimensionOfKernel() != 1) {
      ++rep.failures;
      rep.note = "solution space is not one-dimensional";
      continue;
    }
    MatQ k = lu.kernel();
    bool scalar = true;
    Rat diag = k(0, 0);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        Rat want = i == j ? diag : Rat(0);
        if (k(i * dim + j, 0) != want) scalar = false;
      }
    if (!scalar || diag == 0) {
      ++rep.failures;
      rep.note = "hypothesis-satisfying map is not scalar";
      continue;
    }
    MatQ phi(dim, dim);
    while (true) {
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) phi(i, j) = Rat(small(rng));
      bool is_scalar = true;
      for (int i = 0; i < dim && is_scalar; ++i)
        for (int j = 0; j < dim && is_scalar; ++j)
          if (phi(i, j) != (i == j ? phi(0, 0) : Rat(0))) is_scalar = false;
      if (!is_scalar) break;
    }
    bool violated = false;
    for (const VecQ& w : lines) {
      VecQ img = phi * w;
      for (int i = 0; i < dim && !violated; ++i)
        for (int j = i + 1; j < dim && !violated; ++j)
          if (img(i) * w(j) - img(j) * w(i) != 0) violated = true;
      if (violated) break;
    }
    if (!violated) {
      ++rep.failures;
      rep.note = "non-scalar map fixed every sampled line";
    }
  }
  return rep;
}

}  // namespace tfg::oracle
