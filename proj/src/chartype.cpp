#include "tfg/chartype.hpp"

#include <sstream>

namespace tfg {

Characteristic::Characteristic(std::shared_ptr<const Registry> reg)
    : reg_(std::move(reg)) {
  if (!reg_) throw std::invalid_argument("Characteristic: null registry");
  defaults_.assign(reg_->class_count(), HeightValue::of(0));
}

void Characteristic::set_class(const std::string& id, HeightValue h) {
  set_class(reg_->index_of(id), h);
}

HeightValue Characteristic::at_prime(const Int& p) const {
  auto it = overrides_.find(p);
  if (it != overrides_.end()) return it->second;
  int c = reg_->class_of_prime(p);
  return defaults_.at(c >= 0 ? c : reg_->rest_class());
}

void Characteristic::set_prime(const Int& p, HeightValue h) {
  if (!is_prime(p)) throw std::invalid_argument("Characteristic: " + p.str() + " is not prime");
  int c = reg_->class_of_prime(p);
  if (c >= 0) {
    // An explicit class covers exactly one prime: fold into the default so
    // the representation stays canonical.
    defaults_.at(c) = h;
    return;
  }
  if (defaults_.at(reg_->rest_class()) == h)
    overrides_.erase(p);
  else
    overrides_[p] = h;
}

bool Characteristic::operator==(const Characteristic& o) const {
  if (reg_ != o.reg_) return false;
  if (defaults_ != o.defaults_) return false;
  // Overrides are normalized against defaults on insertion.
  return overrides_ == o.overrides_;
}

std::string Characteristic::str() const {
  std::ostringstream os;
  os << "{";
  for (int c = 0; c < reg_->class_count(); ++c) {
    if (c) os << ", ";
    os << reg_->cls(c).id << ":" << defaults_[c].str();
  }
  for (const auto& [p, h] : overrides_) os << ", @" << p.str() << ":" << h.str();
  os << "}";
  return os.str();
}

namespace {

void require_same_registry(const Characteristic& a, const Characteristic& b) {
  if (a.registry() != b.registry())
    throw std::invalid_argument("characteristics live over different registries");
}

}  // namespace

bool chi_le(const Characteristic& a, const Characteristic& b) {
  require_same_registry(a, b);
  for (int c = 0; c < a.registry()->class_count(); ++c)
    if (!(a.at_class(c) <= b.at_class(c))) return false;
  for (const auto& [p, h] : a.overrides())
    if (!(h <= b.at_prime(p))) return false;
  for (const auto& [p, h] : b.overrides())
    if (!(a.at_prime(p) <= h)) return false;
  return true;
}

Characteristic meet(const Characteristic& a, const Characteristic& b) {
  require_same_registry(a, b);
  Characteristic out(a.registry());
  for (int c = 0; c < a.registry()->class_count(); ++c)
    out.set_class(c, HeightValue::min(a.at_class(c), b.at_class(c)));
  for (const auto& [p, h] : a.overrides())
    out.set_prime(p, HeightValue::min(h, b.at_prime(p)));
  for (const auto& [p, h] : b.overrides())
    out.set_prime(p, HeightValue::min(a.at_prime(p), h));
  return out;
}

Characteristic scale(const Int& n, const Characteristic& chi) {
  if (n == 0) throw std::invalid_argument("scale: n must be nonzero");
  Characteristic out = chi;
  for (const Int& p : prime_support(Rat(n))) {
    long v = valuation(n, p);
    out.set_prime(p, chi.at_prime(p) + v);
  }
  return out;
}

bool equivalent(const Characteristic& a, const Characteristic& b) {
  require_same_registry(a, b);
  return TypeRep(a) == TypeRep(b);
}

TypeRep::TypeRep(const Characteristic& chi) : canon_(chi.registry()) {
  const auto& reg = chi.registry();
  for (int c = 0; c < reg->class_count(); ++c) {
    HeightValue h = chi.at_class(c);
    if (reg->cls(c).kind == ClassKind::Explicit && !h.infinite)
      h = HeightValue::of(0);
    canon_.set_class(c, h);
  }
  // Finite values at concrete primes are shiftable and vanish; only
  // disagreement with the class default in infinity survives.
  for (const auto& [p, h] : chi.overrides()) {
    HeightValue def = canon_.at_prime(p);
    if (h.infinite && !def.infinite)
      canon_.set_prime(p, HeightValue::inf());
    else if (!h.infinite && def.infinite)
      canon_.set_prime(p, HeightValue::of(0));
  }
}

TypeRep type_of(const Characteristic& chi) { return TypeRep(chi); }

bool type_le(const TypeRep& a, const TypeRep& b) {
  const Characteristic& x = a.canonical();
  const Characteristic& y = b.canonical();
  if (x.registry() != y.registry())
    throw std::invalid_argument("types live over different registries");
  const auto& reg = x.registry();
  for (int c = 0; c < reg->class_count(); ++c) {
    switch (reg->cls(c).kind) {
      case ClassKind::Explicit:
        // Finite canonical values are all zero; only infinity blocks.
        if (x.at_class(c).infinite && !y.at_class(c).infinite) return false;
        break;
      case ClassKind::Family:
      case ClassKind::Rest:
        // A default shift touches infinitely many primes and no finite
        // multiplier can absorb it, so the values compare directly.
        if (!(x.at_class(c) <= y.at_class(c))) return false;
        break;
    }
  }
  for (const auto& [p, h] : x.overrides())
    if (h.infinite && !y.at_prime(p).infinite) return false;
  for (const auto& [p, h] : y.overrides())
    if (x.at_prime(p).infinite && !h.infinite) return false;
  return true;
}

bool incomparable(const TypeRep& a, const TypeRep& b) {
  return !type_le(a, b) && !type_le(b, a);
}

}  // namespace tfg
