#include "tfg/primesym.hpp"

#include <algorithm>

namespace tfg {

std::shared_ptr<const Registry> Registry::make(const std::vector<Int>& explicit_primes,
                                               const std::vector<FamilySpec>& families) {
  auto reg = std::make_shared<Registry>();
  for (const Int& p : explicit_primes) {
    if (!is_prime(p))
      throw std::invalid_argument("Registry: " + p.str() + " is not prime");
    if (reg->used_.count(p))
      throw std::invalid_argument("Registry: duplicate explicit prime " + p.str());
    PrimeClass c;
    c.kind = ClassKind::Explicit;
    c.prime = p;
    c.id = p.str();
    reg->classes_.push_back(std::move(c));
    reg->used_.insert(p);
  }
  std::set<std::string> ids;
  for (const auto& f : families) {
    if (f.id.empty() || f.id == "rest")
      throw std::invalid_argument("Registry: bad family id '" + f.id + "'");
    if (!ids.insert(f.id).second)
      throw std::invalid_argument("Registry: duplicate family id '" + f.id + "'");
    for (const Int& p : f.excluded)
      if (!is_prime(p))
        throw std::invalid_argument("Registry: excluded " + p.str() + " is not prime");
    PrimeClass c;
    c.kind = ClassKind::Family;
    c.id = f.id;
    c.excluded = f.excluded;
    // Explicit primes are never family members.
    for (const Int& p : reg->used_) c.excluded.insert(p);
    reg->classes_.push_back(std::move(c));
  }
  PrimeClass rest;
  rest.kind = ClassKind::Rest;
  rest.id = "rest";
  reg->classes_.push_back(std::move(rest));
  return reg;
}

int Registry::rest_class() const {
  for (int i = class_count() - 1; i >= 0; --i)
    if (classes_[i].kind == ClassKind::Rest) return i;
  throw std::logic_error("Registry: missing rest class");
}

int Registry::class_of_prime(const Int& p) const {
  for (int i = 0; i < class_count(); ++i)
    if (classes_[i].kind == ClassKind::Explicit && classes_[i].prime == p) return i;
  return -1;
}

int Registry::index_of(const std::string& id) const {
  for (int i = 0; i < class_count(); ++i)
    if (classes_[i].id == id) return i;
  throw std::invalid_argument("Registry: no class named '" + id + "'");
}

std::shared_ptr<const Registry> Registry::refine_family(const std::string& id,
                                                        const std::set<Int>& removed) const {
  int idx = index_of(id);
  if (classes_[idx].kind != ClassKind::Family)
    throw std::invalid_argument("refine_family: '" + id + "' is not a family");
  auto reg = std::make_shared<Registry>(*this);
  for (const Int& p : removed) {
    if (!is_prime(p))
      throw std::invalid_argument("refine_family: " + p.str() + " is not prime");
    reg->classes_[idx].excluded.insert(p);
  }
  return reg;
}

Registry::Realized Registry::realize(
    const std::vector<std::pair<std::string, std::vector<Int>>>& samples) const {
  auto reg = std::make_shared<Registry>(*this);
  Realized out;
  std::set<Int> fresh;
  for (const auto& [id, primes] : samples) {
    int idx = index_of(id);
    if (classes_[idx].kind == ClassKind::Explicit)
      throw std::invalid_argument("realize: '" + id + "' is an explicit prime");
    std::vector<Int> taken;
    for (const Int& p : primes) {
      if (!is_prime(p)) throw std::invalid_argument("realize: " + p.str() + " is not prime");
      if (is_used(p))
        throw std::invalid_argument("realize: " + p.str() + " already explicit");
      if (classes_[idx].excluded.count(p))
        throw std::invalid_argument("realize: " + p.str() + " was thrown out of " + id);
      if (!fresh.insert(p).second)
        throw std::invalid_argument("realize: " + p.str() + " sampled twice");
      taken.push_back(p);
    }
    out.samples.emplace_back(idx, std::move(taken));
  }
  // Samples become explicit classes, appended so existing indices survive;
  // every family excludes them afterwards.
  for (const auto& [idx, taken] : out.samples) {
    for (const Int& p : taken) {
      PrimeClass c;
      c.kind = ClassKind::Explicit;
      c.prime = p;
      c.id = p.str();
      reg->classes_.push_back(std::move(c));
      reg->used_.insert(p);
      for (auto& pc : reg->classes_)
        if (pc.kind == ClassKind::Family) pc.excluded.insert(p);
    }
  }
  out.reg = reg;
  return out;
}

}  // namespace tfg
