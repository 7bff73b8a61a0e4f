#pragma once

#include "chorefair/rational.hpp"

#include <compare>
#include <optional>
#include <vector>

namespace chorefair {

// A chore is identified everywhere by its 0-based index into
// Instance::chores; Chore itself only carries the measurements.
struct Chore {
  Rational size;        // > 0
  Rational disutility;  // >= 0, the objective (shared) disutility
};

struct Instance {
  std::vector<Chore> chores;
  std::vector<Rational> budgets;  // one per agent, each > 0

  // Optional per-agent disutilities (row i = agent i's view of all
  // chores). Only the divisible solver and its verifiers read this;
  // the indivisible algorithms work on the objective values above.
  std::optional<std::vector<std::vector<Rational>>> disutility_matrix;

  int agent_count() const { return static_cast<int>(budgets.size()); }
  int chore_count() const { return static_cast<int>(chores.size()); }

  // Index of the housekeeper bundle in an Allocation.
  int housekeeper_index() const { return agent_count(); }

  // Agent i's disutility for chore j: the matrix entry when a matrix is
  // present, the objective value otherwise.
  const Rational& disutility(int agent, int chore) const;
};

// Throws ValidationError unless every size is positive, every
// disutility non-negative, every budget positive, at least one agent
// exists, and the matrix (if any) is agent_count() x chore_count().
void validate_instance(const Instance& instance);

// A set of chores, stored as strictly increasing ids. The default
// vector comparison is exactly the subset order used for witness
// tie-breaking: compare smallest elements first, prefixes sort low.
struct Bundle {
  std::vector<int> ids;

  bool contains(int id) const;
  void insert(int id);  // no-op if already present
  void erase(int id);   // no-op if absent
  std::size_t count() const { return ids.size(); }
  bool empty() const { return ids.empty(); }

  friend auto operator<=>(const Bundle&, const Bundle&) = default;
};

// Sorts and checks for duplicates (throws std::invalid_argument).
Bundle make_bundle(std::vector<int> ids);

struct BundleTotals {
  Rational size;
  Rational disutility;
};

// Objective size and disutility totals of a bundle.
BundleTotals aggregate(const Bundle& bundle, const Instance& instance);

// disutility / size.
Rational density(const Chore& chore);

// bundles[i] is agent i's bundle for i < agent_count(); the last entry
// belongs to the housekeeper, who absorbs every unassigned chore.
struct Allocation {
  std::vector<Bundle> bundles;

  const Bundle& housekeeper(const Instance& instance) const {
    return bundles[static_cast<std::size_t>(instance.housekeeper_index())];
  }
};

// All chores at the housekeeper, every agent bundle empty.
Allocation all_housekeeper(const Instance& instance);

// Right shape and every chore in exactly one bundle.
bool is_partition(const Allocation& allocation, const Instance& instance);

// is_partition plus s(bundle i) <= budget i for every agent; the
// housekeeper bundle is never budget-checked.
bool is_feasible(const Allocation& allocation, const Instance& instance);

}  // namespace chorefair
