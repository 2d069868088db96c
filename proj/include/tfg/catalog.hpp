#pragma once

// Built-in constructions with their witness pairs and expected verdicts.
// Each entry records the region of the four-property diagram the
// construction demonstrates; entries whose desk-scale truncation sits in a
// different region than the untruncated object carry both values.

#include "tfg/transit.hpp"

namespace tfg {

struct CatalogWitness {
  Element x, y;
  Property property;
  Verdict::Outcome expected;
  std::string label;
};

struct CatalogEntry {
  std::string name;
  GroupPtr group;
  std::vector<CatalogWitness> witnesses;
  int expected_region = 0;           // region of the construction
  std::optional<int> truncated_region;  // what the finite truncation shows
  std::string notes;

  int classify_region() const {
    return truncated_region ? *truncated_region : expected_region;
  }
};

/// Rank-1 group (height 1 at the prime 2, zero elsewhere).
CatalogEntry example1();

/// The rigid-line construction: F = Z^rank refined so that each listed line
/// becomes divisible along one fresh prime family (the first line gets no
/// family).  The default line list for rank 3 is eigen-rigid: only scalar
/// matrices fix all seven lines.
CatalogEntry example3(Eigen::Index rank = 3, std::vector<VecZ> lines = {});

/// Default eigen-rigid line list for a given rank (2 or 3).
std::vector<VecZ> default_lines(Eigen::Index rank);

/// Rigid rank-3 group whose endomorphism ring is Z, with all of the first
/// three lines carrying families; the interesting object is its square.
CatalogEntry theorem15_group();

struct SquareWitness {
  GroupPtr square;
  Element x, y;  // a1 + b2 and a1 + b3
};
SquareWitness theorem15_square_witness(const CatalogEntry& entry);

/// Sum of two rank-1 groups of incomparable type, neither divisible at p.
CatalogEntry example5(const Characteristic& chi_a, const Characteristic& chi_b,
                      const Int& p);
CatalogEntry example5_default();

/// Sum of two rank-1 groups where at every class exactly one side is
/// divisible.
CatalogEntry example_complementary(const Characteristic& chi_a,
                                   const Characteristic& chi_b);
CatalogEntry example_complementary_default();

/// Z + H with H of height 1 everywhere except at 5.
CatalogEntry example6();

/// Composite of two groups with class-disjoint supports.  The component
/// properties are supplied by the caller (certified flags with optional
/// refutation pairs); the entry demonstrates the componentwise mapping logic.
struct ComponentFlags {
  bool fully_transitive = false;
  bool transitive = false;
  bool weakly_transitive = false;
  std::vector<std::pair<VecQ, VecQ>> fully_refutations;       // pairs inside the component
  std::vector<std::pair<VecQ, VecQ>> transitive_refutations;
};
CatalogEntry compose_disjoint_localizations(const GroupPtr& a, const ComponentFlags& fa,
                                            const GroupPtr& b, const ComponentFlags& fb);

/// All entries that replay without extra inputs, keyed as in the CLI.
std::vector<std::string> catalog_names();
CatalogEntry catalog_entry(const std::string& name);

}  // namespace tfg
