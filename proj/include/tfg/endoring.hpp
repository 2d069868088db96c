#pragma once

// The uniform endomorphism ring of a group: rational matrices M with M(G)
// inside G, where "uniform" means denominators of entries avoid the
// anonymous family primes.  The ring is represented as a finitely generated
// module  End = sum_i  Q_{kappa_i} * M_i :  each generator carries a
// coefficient characteristic recording how divisible its coefficient may be
// at every prime class.
//
// Solving happens in two stages.  The rational span of End is cut out by
// homogeneous linear equations (divisible-subspace invariance plus the
// vanishing of negative symbol powers in the local conjugates); the lattice
// part is then glued from one congruence system per explicit prime, and the
// extra family/rest divisibility of each basis direction is read off the
// symbol order of its local conjugates.

#include "tfg/group.hpp"

namespace tfg {

struct Certificate {
  std::string reason;   // machine tag, e.g. "no-rational-solution"
  std::string detail;   // human-readable one-liner
  MatQ system;          // linear system whose unsolvability refutes the query
  VecQ rhs;
  VecQ scale;           // coefficient scaling of the integral stage (optional)
  std::vector<Int> smith_invariants;  // of the integerized system
};

struct Verdict {
  enum class Outcome { Holds, Fails, Unknown, Vacuous };
  Outcome outcome = Outcome::Unknown;
  std::optional<MatQ> witness;
  std::optional<Certificate> certificate;
  long bound = 0;

  static Verdict holds(MatQ w) { return {Outcome::Holds, std::move(w), std::nullopt, 0}; }
  static Verdict fails(Certificate c) { return {Outcome::Fails, std::nullopt, std::move(c), 0}; }
  static Verdict unknown(long bound) { return {Outcome::Unknown, std::nullopt, std::nullopt, bound}; }
  static Verdict vacuous() { return {Outcome::Vacuous, std::nullopt, std::nullopt, 0}; }
  bool is_holds() const { return outcome == Outcome::Holds; }
  bool is_fails() const { return outcome == Outcome::Fails; }
  std::string str() const;
};

struct EndGenerator {
  MatQ mat;
  Characteristic kappa;
};

class EndModule {
 public:
  GroupPtr group;
  std::vector<EndGenerator> gens;
  bool adapted = true;  // basis adapted to every divisibility flag
  bool closed = true;   // products of generators re-expand in the module

  Eigen::Index rank() const { return static_cast<Eigen::Index>(gens.size()); }

  /// Rational coordinates of m in the generator basis (nullopt: outside the
  /// rational span).
  std::optional<VecQ> coordinates(const MatQ& m) const;

  /// Membership including the coefficient characteristics.
  bool contains(const MatQ& m) const;

  MatQ combine(const VecQ& coeffs) const;

  std::string str() const;
};

bool is_endomorphism(const FRGroup& g, const MatQ& m);
bool is_automorphism(const FRGroup& g, const MatQ& m);

/// Computes (and caches on the group) the uniform endomorphism module.
std::shared_ptr<const EndModule> end_ring(const GroupPtr& g);

struct EndoSolve {
  enum class Status { Solved, NoRationalSolution, NoIntegralSolution, Unknown };
  Status status = Status::Unknown;
  std::optional<MatQ> witness;
  Certificate certificate;
  VecQ base;    // particular rational solution (coefficient coordinates)
  MatQ kernel;  // rational kernel of the mapping system
  bool no() const {
    return status == Status::NoRationalSolution || status == Status::NoIntegralSolution;
  }
};

/// Decides solvability of  (sum c_i M_i)(x) = y  with c_i in Q_{kappa_i}.
/// `pins` fixes selected coefficients to prescribed rational values.
EndoSolve solve_endo_mapping(const GroupPtr& g, const Element& x, const Element& y,
                             const std::vector<std::pair<Eigen::Index, Rat>>& pins = {});

/// Spec-level wrapper: witness endomorphism mapping x to y, or nothing.
std::optional<MatQ> endo_mapping_exists(const GroupPtr& g, const Element& x,
                                        const Element& y);

/// Exact where the endomorphism module has a recognized unit structure
/// (scalar, block-diagonal with scalar blocks, full matrix ring, block
/// triangular); bounded search otherwise.
Verdict auto_mapping_exists(const GroupPtr& g, const Element& x, const Element& y,
                            long bound);

/// phi = [[1 + beta*alpha, beta], [alpha, 1]] on G = A (+) B, verified to be
/// an automorphism.  alpha maps the A block into the B block (as an
/// (nB x nA) block), beta the other way around.
MatQ lemma3_automorphism(const GroupPtr& g, Eigen::Index rank_a, const MatQ& alpha,
                         const MatQ& beta);

/// Re-checks a refutation certificate by re-running the exact solver on the
/// stored system.  True when the unsolvability reproduces.
bool reverify(const Certificate& c);

}  // namespace tfg
