#pragma once

#include "chorefair/fairness.hpp"
#include "chorefair/instance.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace chorefair {

// Exact structural properties that upgrade the densest-first guarantee
// from EF2 to EF1 (or select the dedicated two-agent composition).
struct SpecialCase {
  bool identically_valued = false;  // all positive disutilities equal
  bool binary_disutility = false;   // disutilities in {0, v} for one v
  bool identically_sized = false;
  bool identically_dense = false;
  bool identical_budgets = false;
  bool two_agents = false;

  // The four chore/budget structures of the EF1 theorems, excluding
  // the two-agent case (which has its own algorithm).
  bool chore_or_budget_flag() const {
    return identically_valued || binary_disutility || identically_sized ||
           identically_dense || identical_budgets;
  }
  bool any() const { return chore_or_budget_flag() || two_agents; }

  friend bool operator==(const SpecialCase&, const SpecialCase&) = default;
};

// A minimum-cardinality subset of the housekeeper's chores that agent
// `target_agent` could take (fits her budget) and strictly dislikes
// compared to her current bundle.
struct ManageableSet {
  Bundle chores;
  int target_agent = 0;
};

// Searches cardinality 1, 2, ... over the housekeeper bundle; for each
// size solves a cardinality-constrained max-disutility knapsack per
// agent. Ties among minimum-cardinality candidates: maximum
// disutility, then lexicographically smallest chore set, then smallest
// agent index. Absent when no subset qualifies for any agent.
std::optional<ManageableSet> find_manageable_set(const Allocation& allocation,
                                                 const Instance& instance);

struct SolverResult {
  Allocation allocation;
  int iterations = 0;
};

// Repeatedly hands the chosen manageable set to its agent (displaced
// chores return to the housekeeper) until no manageable set exists.
// The result always satisfies EFX; the total assigned disutility
// strictly increases every round, which bounds the loop.
SolverResult solve_efx(const Instance& instance);

struct DensestFirstOptions {
  // Budgets to use instead of the instance's (same length). The
  // two-agent composition runs its first phase with both budgets
  // lowered to the smaller one.
  std::optional<std::vector<Rational>> budget_override;

  // Restrict assignment to these chores; everything else stays with
  // the housekeeper.
  std::optional<Bundle> chore_subset;

  // Restrict participation to these agent indices.
  std::optional<std::vector<int>> live_agents;

  // Called after every loop iteration (assignment or retirement) with
  // the running allocation; used by tests of per-iteration invariants.
  std::function<void(const Allocation&)> on_iteration;
};

// Greedy: the live agent with the least total disutility (ties toward
// the lower index) takes the densest remaining chore that fits her
// budget (ties toward smaller size, then lower id), or retires if none
// fits. At most n + m iterations. Output satisfies EF2 always, and EF1
// whenever any chore/budget special-case flag holds.
SolverResult densest_first(const Instance& instance,
                           const DensestFirstOptions& options = {});

// The two-agent composition (EF1): run densest_first with both budgets
// set to the smaller budget; give the higher-disutility bundle (ties:
// the first) to the smaller-budget agent; rerun densest_first for the
// other agent alone, with her real budget, on the remaining chores.
// Agents are reordered internally so the smaller budget comes first
// and the output is restored to input order. Throws WrongAgentCount
// unless n == 2.
SolverResult solve_two_agents(const Instance& instance);

struct Classification {
  SpecialCase flags;
  EnvyCriterion guaranteed;  // EF1 if any flag is set, else EF2
};

Classification classify_instance(const Instance& instance);

// What densest_first itself guarantees on this instance: EF1 under any
// chore/budget flag, EF2 otherwise. (The two-agent flag upgrades the
// instance-level guarantee only via solve_two_agents.)
EnvyCriterion densest_first_guarantee(const Instance& instance);

}  // namespace chorefair
