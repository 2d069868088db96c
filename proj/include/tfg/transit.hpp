#pragma once

// The four transitivity-like pair checks, sampling-based group verdicts, and
// instance-level demonstrations of the implication lemmas.  A Fails verdict
// certifies a global refutation (one bad pair refutes the property); a Yes
// flag is always relative to the sampled scope.

#include "tfg/endoring.hpp"

namespace tfg {

enum class Property { Fully, Krylov, Transitive, Weak };
std::string property_name(Property p);

/// Hypothesis chi(x) <= chi(y); endomorphism wanted.
Verdict check_pair_fully(const GroupPtr& g, const Element& x, const Element& y);
/// Hypothesis chi(x) == chi(y); endomorphism wanted.
Verdict check_pair_krylov(const GroupPtr& g, const Element& x, const Element& y);
/// Hypothesis chi(x) == chi(y); automorphism wanted.
Verdict check_pair_transitive(const GroupPtr& g, const Element& x, const Element& y,
                              long bound);
/// Hypothesis: mutual endomorphisms exist (else Vacuous); automorphism wanted.
Verdict check_pair_weak(const GroupPtr& g, const Element& x, const Element& y,
                        long bound);

enum class Flag { Yes, No, Unknown };
std::string flag_name(Flag f);

struct PairRecord {
  Element x, y;
  Property property;
  Verdict verdict;
};

struct RegionReport {
  Flag fully = Flag::Unknown;
  Flag transitive = Flag::Unknown;
  Flag krylov = Flag::Unknown;
  Flag weak = Flag::Unknown;
  int region = 0;  // 1..6; 0 = undetermined
  long pairs_checked = 0;
  bool consistent = true;
  std::string scope;
  std::vector<PairRecord> witnesses;  // failures and a sample of holds
};

struct SamplerOptions {
  uint64_t seed = 1;
  int samples = 24;
  long bound = 6;
  std::vector<Element> user;
};

/// Deterministic element sampler: small integer lattice points plus points
/// shifted by the declared fractional generators.
std::vector<Element> sample_elements(const GroupPtr& g, const SamplerOptions& opt);

/// Seeded pairs (x, y = phi(x)) with endomorphisms both ways.
std::vector<std::pair<Element, Element>> mutual_endo_pairs(const GroupPtr& g,
                                                           int count, uint64_t seed);

RegionReport classify(const GroupPtr& g, const SamplerOptions& opt);

int region_of(Flag fully, Flag transitive, Flag krylov, Flag weak);

struct DemoReport {
  std::string name;
  bool vacuous = false;
  bool pass = false;
  long hypothesis_checked = 0;
  long conclusion_checked = 0;
  std::string note;
};

/// Instance-level evidence for the composition lemmas; `name` is one of
/// lemma1, prop7, prop11_2, prop14, cor9.  The component group is summed
/// `copies` times where the statement needs a power.
DemoReport demonstrate_implication(const std::string& name, const GroupPtr& component,
                                   int copies, const SamplerOptions& opt);

}  // namespace tfg
