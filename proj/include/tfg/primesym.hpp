#pragma once

// The prime universe: finitely many explicit primes, finitely many anonymous
// infinite prime families (pairwise disjoint, each excluding a finite set of
// explicit primes), and a single Rest class covering every other prime.
// Group data over a Registry may only mention explicit primes inside scalar
// coefficients; this is what keeps family-uniform computations sound.

#include "tfg/laurent.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace tfg {

enum class ClassKind { Explicit, Family, Rest };

struct PrimeClass {
  ClassKind kind = ClassKind::Rest;
  Int prime = 0;             // Explicit only
  std::string id;            // Family id; "rest"; decimal string for Explicit
  std::set<Int> excluded;    // Family only: explicit primes thrown out
};

struct FamilySpec {
  std::string id;
  std::set<Int> excluded;
};

class Registry {
 public:
  /// Builds a registry; a Rest class is always present.  Class indices are
  /// stable under refine_family and realize (new classes are appended).
  static std::shared_ptr<const Registry> make(const std::vector<Int>& explicit_primes,
                                              const std::vector<FamilySpec>& families);

  int class_count() const { return static_cast<int>(classes_.size()); }
  const PrimeClass& cls(int i) const { return classes_.at(i); }
  int rest_class() const;

  /// Index of the Explicit class of p, or -1 when p is a Rest member.
  int class_of_prime(const Int& p) const;
  /// Index of a class by id ("rest", family id, or a decimal prime).
  int index_of(const std::string& id) const;

  const std::set<Int>& used_primes() const { return used_; }
  bool is_used(const Int& p) const { return used_.count(p) > 0; }

  /// New registry with `removed` thrown out of family `id`; class indices are
  /// preserved, so characteristics and groups can be rebuilt verbatim.
  std::shared_ptr<const Registry> refine_family(const std::string& id,
                                                const std::set<Int>& removed) const;

  /// New registry in which each listed sample prime becomes an Explicit class
  /// and is excluded from its family.  Samples must be fresh primes: not
  /// used, not excluded anywhere, distinct across families.
  struct Realized {
    std::shared_ptr<const Registry> reg;
    // family class index (in both registries) -> its sample primes
    std::vector<std::pair<int, std::vector<Int>>> samples;
  };
  Realized realize(const std::vector<std::pair<std::string, std::vector<Int>>>& samples) const;

 private:
  std::vector<PrimeClass> classes_;
  std::set<Int> used_;
};

}  // namespace tfg
