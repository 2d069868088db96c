#pragma once

// Independent brute-force reference computations over realized groups.
// Membership is derived from the declared generators alone (fractional parts
// closed under addition, one prime at a time), never from the local-lattice
// solver, so agreement between the two paths is meaningful evidence.

#include "tfg/group.hpp"

namespace tfg::oracle {

struct RealizedView {
  GroupPtr group;
  std::vector<VecQ> generators;
  std::vector<Int> declared_primes;
  long budget = 10000000;
};

/// Concrete generators of a realized group; divisible columns are
/// approximated to depth `depth` at every declared prime.
RealizedView make_view(const GroupPtr& g, long depth = 12, long budget = 10000000);

/// Membership by integer combinations of the declared generators.
bool member(const RealizedView& v, const VecQ& x);

/// Largest k <= kmax with x / p^k in the group; nullopt means ">= kmax".
std::optional<long> brute_force_height(const RealizedView& v, const VecQ& x,
                                       const Int& p, long kmax);

/// Every endomorphism whose entries have |numerator| <= num_bound and
/// denominator <= den_bound (denominator primes among the declared ones).
/// Deterministic order; throws InvariantError past the enumeration budget.
std::vector<MatQ> brute_force_end(const RealizedView& v, long num_bound, long den_bound);

/// Matrices in the same entry box that the symbolic end module accepts;
/// the comparison partner of brute_force_end.
std::vector<MatQ> module_members_in_box(const RealizedView& v, long num_bound,
                                        long den_bound);

struct ScalarLemmaReport {
  int trials = 0;
  int failures = 0;
  bool pass() const { return trials > 0 && failures == 0; }
  std::string note;
};

/// Line-rigidity check: when every sampled line off Q*v is an eigenline the
/// map must be scalar, and random non-scalar maps must violate the
/// hypothesis on some sampled line.
ScalarLemmaReport scalar_lemma_check(int dim, int trials, uint64_t seed);

}  // namespace tfg::oracle
