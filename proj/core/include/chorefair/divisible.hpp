#pragma once

#include "chorefair/fairness.hpp"
#include "chorefair/instance.hpp"
#include "chorefair/lp.hpp"

#include <optional>
#include <vector>

namespace chorefair {

// Fractions of each chore held by each party: rows 0..n-1 are agents,
// row n is the housekeeper; every column sums to exactly 1.
struct FractionalAllocation {
  std::vector<std::vector<Rational>> fractions;
};

// Shape, entries in [0,1], unit column sums, agent rows within budgets.
void validate_fractional(const FractionalAllocation& allocation,
                         const Instance& instance);

// Per-agent permutation of chore ids in non-increasing density order
// (agent's own densities when a disutility matrix is present), ties
// toward the lower id. On an augmented instance the zero-disutility
// slack chore always sorts last.
struct DensityOrdering {
  std::vector<std::vector<int>> order;
};

// cutoffs[i] in [1, chore_count + 1]: the chores strictly before the
// cutoff in agent i's density order are "internal" (fully in play for
// i), the chore at the cutoff is i's "edge" chore, everything after is
// out of play. cutoff = chore_count + 1 means everything is internal.
using DensityCutoffs = std::vector<int>;

struct InternalEdgeSplit {
  std::vector<int> internal;  // in the agent's density order
  std::optional<int> edge;
};

// The certificate that a fractional allocation has the density
// domination structure: internal minimality, budget equality, and full
// assignment of internal chores, relative to these cutoffs. Always
// stated over the augmented instance.
struct DDCertificate {
  DensityCutoffs cutoffs;
  FractionalAllocation allocation;
};

// Appends the slack chore: zero disutility for everyone and size
// 2 * n * max budget, so large that budget constraints can always be
// made to bind with equality.
Instance augment_instance(const Instance& instance);

DensityOrdering density_ordering(const Instance& instance);

std::vector<InternalEdgeSplit> internal_edge_sets(
    const DensityCutoffs& cutoffs, const DensityOrdering& ordering);

// Which form the per-agent budget rows take: equality for the target
// system, upper bound for the relaxation probed while advancing
// cutoffs.
enum class BudgetMode { Equality, UpperBound };

// The feasibility program over variables z[agent][chore] in [0,1]:
//   (per internal chore of its owner)  z_ij <= z_i'j for every other i'
//   (per agent)                        sum of s_j z_ij over internal
//                                      and edge chores = or <= budget
//   (per internal chore of anyone)     fractions assigned to agents sum to 1
//   (per out-of-play pair)             z_ih = 0
//   (per chore internal to nobody)     fractions sum to <= 1
LinearSystem build_lp(const DensityCutoffs& cutoffs, BudgetMode mode,
                      const Instance& augmented);

struct DivisibleResult {
  FractionalAllocation allocation;  // over the original chores
  DDCertificate certificate;        // over the augmented instance
  int iterations = 0;
};

// Starts with every cutoff at 1; advances the first cutoff whose
// upper-bound system stays feasible until the equality system has a
// solution that also passes the fractional envy check (density
// domination by itself does not rule out envy between agents whose
// cutoffs differ). That solution's density-domination structure is
// verified, then the slack chore is stripped (agent disutilities are
// unchanged by the strip). At most n * (m + 1) loop iterations.
//
// The single-cutoff advance rule is not complete: on some instances no
// advance keeps the relaxed system feasible, and the solver throws
// InternalInvariantViolation rather than return an allocation without
// the density-domination structure or with envy. Two such instances
// are pinned in the tests — one where no cutoff vector admits a
// budget-equality solution at all (unequal budgets), and one where a
// solution exists but only past a diagonal step the rule cannot take
// (per-agent density orders that disagree). Instances with identical
// budgets and one shared density order (objective disutilities, or
// matrix rows that are per-agent scalings of one vector) are reliably
// solvable for up to three agents.
DivisibleResult solve_divisible(const Instance& instance);

// Exact check of the three density-domination conditions.
bool verify_dd(const DDCertificate& certificate, const Instance& augmented);

// Fractional envy-freeness: for every envier i (housekeeper included)
// and agent j, the best Y <= X_i with s(Y) <= B_j — found by exact
// fractional-knapsack greedy in i's density order — must not exceed
// d_i(X_j). Housekeeper comparisons toward agent j use agent j's
// disutilities. A violation carries the maximizing Y as witness
// (support ids plus fractions).
EnvyReport verify_ef_divisible(const FractionalAllocation& allocation,
                               const Instance& instance);

}  // namespace chorefair
