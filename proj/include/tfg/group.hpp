#pragma once

// Finite-rank torsion-free groups presented by local data.  The group is
// F = Z^n refined, one prime class at a time, by a local lattice L_c (basis
// matrix over the class symbol) together with a divisible subspace D_c:
//
//     G  =  intersection over classes of  ( L_c + Q*D_c )  localized at c.
//
// Membership, heights and characteristics are all computed class by class;
// the index [L_c : F] being a power of the class prime is an enforced
// invariant and is exactly what makes the classes independent.

#include "tfg/chartype.hpp"
#include "tfg/dvr.hpp"
#include "tfg/errors.hpp"
#include "tfg/intlattice.hpp"

#include <map>
#include <mutex>

namespace tfg {

class EndModule;  // endoring.hpp

struct LocalData {
  MatL basis;      // n x n over the class symbol; identity when absent
  MatQ divisible;  // n x r, independent columns (r may be 0)
};

class FRGroup;
using GroupPtr = std::shared_ptr<const FRGroup>;

class Element {
 public:
  Element() = default;
  Element(GroupPtr g, VecL coords);
  Element(GroupPtr g, const VecQ& coords);

  const GroupPtr& group() const { return group_; }
  const VecL& coords() const { return coords_; }
  int ctx() const { return ctx_; }
  bool is_zero() const;
  Eigen::Index size() const { return coords_.size(); }

  /// Decomposition by the powers of the element's own symbol; a plain
  /// rational element has the single slice {0: coords}.
  std::map<int, VecQ> slices() const;

  /// Substitute a concrete prime for the element's symbol.
  Element evaluated(const Rat& p) const;

  /// Concrete primes appearing in any coefficient of any coordinate.
  std::set<Int> prime_support() const;

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Rat& c) const;
  bool operator==(const Element& o) const;
  std::string str() const;

 private:
  GroupPtr group_;
  VecL coords_;
  int ctx_ = kNoCtx;
};

/// Solver for one prime class of one group: projection along the divisible
/// subspace, Smith data of the projected local basis, and the two factor
/// matrices that conjugate an endomorphism into quotient-lattice coordinates.
struct LocalSolver {
  int cls = -1;
  ClassVal val;
  Eigen::Index qdim = 0;   // n - dim(divisible)
  MatQ proj;               // qdim x n, kernel = span(divisible)
  DvrSmith smith;          // of proj * basis
  MatF left;               // qdim x n : diag(pi^-a) * Uinv * proj
  MatF right;              // n x qdim : basis * Vinv (first qdim columns)
  MatQ divisible;          // copy of the class divisible columns

  /// Height of x at this class (nullopt encodes x = 0 / x in the divisible
  /// span, i.e. infinite height).
  std::optional<long> height(const Element& x) const;
  std::optional<long> height_slices(const std::map<int, VecQ>& sl) const;

  /// Quotient conjugate of a rational matrix: integral entries iff M
  /// preserves the local lattice modulo the divisible span.
  MatF conjugate(const MatQ& m) const;
};

struct CdBlock {              // completely-decomposable metadata
  Eigen::Index offset = 0;    // coordinate of the rank-1 block
  Characteristic chi;
};

class FRGroup : public std::enable_shared_from_this<FRGroup> {
 public:
  /// Validates and freezes the group.  Throws InvariantError when the data
  /// violates a model invariant (index not a class-prime power, basis not
  /// containing Z^n, unregistered primes in scalars, ...).
  static GroupPtr make(std::shared_ptr<const Registry> reg, Eigen::Index rank,
                       std::map<int, LocalData> locals, std::string name);

  Eigen::Index rank() const { return rank_; }
  const std::shared_ptr<const Registry>& registry() const { return reg_; }
  const std::string& name() const { return name_; }
  bool has_local(int cls) const { return locals_.count(cls) > 0; }
  const LocalData& local(int cls) const;
  const std::map<int, LocalData>& locals() const { return locals_; }

  const LocalSolver& solver(int cls) const;
  /// Solver for a concrete prime of the Rest class (structure evaluated at q).
  LocalSolver rest_solver_at(const Int& q) const;

  const std::optional<std::vector<CdBlock>>& cd_blocks() const { return cd_blocks_; }

  /// Canonical generator elements: the standard basis of F plus the columns
  /// of every non-identity local basis.
  std::vector<Element> generators() const;

  Element element(const VecL& coords) const;
  Element element(const VecQ& coords) const;
  Element basis_element(Eigen::Index i) const;

  // end_ring cache, single writer / many readers
  mutable std::mutex end_mutex;
  mutable std::shared_ptr<const EndModule> end_cache;

 private:
  friend GroupPtr direct_sum(const GroupPtr&, const GroupPtr&);
  friend GroupPtr rank1(std::shared_ptr<const Registry>, const Characteristic&, std::string);

  std::shared_ptr<const Registry> reg_;
  Eigen::Index rank_ = 0;
  std::map<int, LocalData> locals_;
  std::string name_;
  std::optional<std::vector<CdBlock>> cd_blocks_;
  LocalData identity_local_;
  mutable std::map<int, LocalSolver> solvers_;
  mutable std::mutex solver_mutex_;
};

/// Rank-1 group with the height sequence of 1 equal to chi.
GroupPtr rank1(std::shared_ptr<const Registry> reg, const Characteristic& chi,
               std::string name = "");

GroupPtr direct_sum(const GroupPtr& a, const GroupPtr& b);

bool contains(const FRGroup& g, const Element& x);

/// Height at one prime class; for a family class this is the common height
/// at every prime of the family.
HeightValue height(const FRGroup& g, const Element& x, int cls);
HeightValue height_at_prime(const FRGroup& g, const Element& x, const Int& p);

Characteristic characteristic_of(const FRGroup& g, const Element& x);
TypeRep type_of_element(const FRGroup& g, const Element& x);

bool in_chi_subgroup(const FRGroup& g, const Element& x, const Characteristic& chi);
bool in_tau_subgroup(const FRGroup& g, const Element& x, const TypeRep& tau);

/// Unimodular integer matrix whose first column is the primitive vector v.
inline MatZ complete_to_basis(const VecZ& v) { return unimodular_completion(v); }

/// Group over the realized registry: each sample prime becomes an explicit
/// class carrying the family structure evaluated at that prime.
struct RealizedGroup {
  GroupPtr group;
  Registry::Realized realization;
};
RealizedGroup realize_group(const GroupPtr& g,
                            const std::vector<std::pair<std::string, std::vector<Int>>>& samples);

}  // namespace tfg
