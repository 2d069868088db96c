#pragma once

// Characteristics (height sequences) over a prime-class registry, and their
// equivalence classes (types).  A characteristic stores one default value per
// class plus finitely many overrides at concrete primes; the overrides cover
// both explicit primes and stray concrete primes of the Rest class (these
// appear when elements are scaled by integers the registry never mentions).

#include "tfg/primesym.hpp"

#include <map>

namespace tfg {

struct HeightValue {
  bool infinite = false;
  long v = 0;

  static HeightValue inf() { return {true, 0}; }
  static HeightValue of(long k) {
    if (k < 0) throw std::invalid_argument("HeightValue: negative height");
    return {false, k};
  }
  bool operator==(const HeightValue& o) const {
    return infinite == o.infinite && (infinite || v == o.v);
  }
  bool operator!=(const HeightValue& o) const { return !(*this == o); }
  bool operator<=(const HeightValue& o) const {
    if (o.infinite) return true;
    if (infinite) return false;
    return v <= o.v;
  }
  HeightValue operator+(long k) const {
    return infinite ? inf() : of(v + k);
  }
  static HeightValue min(const HeightValue& a, const HeightValue& b) {
    return a <= b ? a : b;
  }
  std::string str() const { return infinite ? "inf" : std::to_string(v); }
};

class Characteristic {
 public:
  Characteristic() = default;
  /// All-zero characteristic.
  explicit Characteristic(std::shared_ptr<const Registry> reg);

  static Characteristic zero(std::shared_ptr<const Registry> reg) {
    return Characteristic(std::move(reg));
  }

  const std::shared_ptr<const Registry>& registry() const { return reg_; }

  HeightValue at_class(int c) const { return defaults_.at(c); }
  void set_class(int c, HeightValue h) { defaults_.at(c) = h; }
  void set_class(const std::string& id, HeightValue h);

  /// Value at a concrete prime: override if present, else the default of the
  /// prime's class (its Explicit class, or Rest).
  HeightValue at_prime(const Int& p) const;
  void set_prime(const Int& p, HeightValue h);
  const std::map<Int, HeightValue>& overrides() const { return overrides_; }

  bool operator==(const Characteristic& o) const;
  bool operator!=(const Characteristic& o) const { return !(*this == o); }

  std::string str() const;

 private:
  friend Characteristic meet(const Characteristic&, const Characteristic&);
  friend bool chi_le(const Characteristic&, const Characteristic&);

  std::shared_ptr<const Registry> reg_;
  std::vector<HeightValue> defaults_;
  std::map<Int, HeightValue> overrides_;
};

/// Pointwise order: every class default and every concrete prime.
bool chi_le(const Characteristic& a, const Characteristic& b);

/// Pointwise minimum (the greatest lower bound under chi_le).
Characteristic meet(const Characteristic& a, const Characteristic& b);

/// (n * chi)(p) = chi(p) + v_p(n).
Characteristic scale(const Int& n, const Characteristic& chi);

/// Equal canonical forms, i.e. n*chi == n'*chi' for some nonzero n, n'.
bool equivalent(const Characteristic& a, const Characteristic& b);

/// A type: the canonical representative of an equivalence class.  Finite
/// values at concrete primes are zeroed; only the infinity pattern and the
/// family/rest defaults are intrinsic.
class TypeRep {
 public:
  TypeRep() = default;
  explicit TypeRep(const Characteristic& chi);
  const Characteristic& canonical() const { return canon_; }
  bool operator==(const TypeRep& o) const { return canon_ == o.canon_; }
  bool operator!=(const TypeRep& o) const { return !(*this == o); }
  std::string str() const { return canon_.str(); }

 private:
  Characteristic canon_;
};

TypeRep type_of(const Characteristic& chi);
bool type_le(const TypeRep& a, const TypeRep& b);
bool incomparable(const TypeRep& a, const TypeRep& b);

}  // namespace tfg
