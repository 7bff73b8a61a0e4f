#pragma once

#include "chorefair/instance.hpp"
#include "chorefair/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace chorefair {

// Which fairness notion a check enforces. EFk keeps its k; EF is the
// k = 0 case and EFX is its own removal rule (drop the least bad chore
// of the compared subset).
struct EnvyCriterion {
  enum class Kind { Ef, Efk, Efx };

  Kind kind = Kind::Ef;
  int k = 0;  // >= 1 exactly when kind == Efk

  static EnvyCriterion ef() { return {Kind::Ef, 0}; }
  static EnvyCriterion efk(int k);
  static EnvyCriterion ef1() { return efk(1); }
  static EnvyCriterion ef2() { return efk(2); }
  static EnvyCriterion efx() { return {Kind::Efx, 0}; }

  friend bool operator==(const EnvyCriterion&, const EnvyCriterion&) = default;
};

// How the envy-surplus kernel discounts a candidate subset S:
//   BestRemoval  — subtract the sum of the removal_count largest
//                  disutilities in S (EF with count 0, EFk with count k);
//   WorstRemoval — subtract the single smallest disutility in S (EFX).
enum class RemovalMode { BestRemoval, WorstRemoval };

struct EnvyWitness {
  int envier;     // bundle index in [0, n]; n is the housekeeper
  int envied;     // agent index in [0, n)
  Bundle subset;  // subset of the envier's bundle, fits the envied budget

  // Present only for fractional (divisible) violations: the fraction of
  // each subset chore used, aligned with subset.ids.
  std::optional<std::vector<Rational>> fractions;

  friend bool operator==(const EnvyWitness&, const EnvyWitness&) = default;
};

struct EnvyReport {
  bool satisfied = true;
  std::optional<EnvyWitness> witness;
};

// Maximum post-removal disutility over all subsets S of `source` with
// s(S) <= budget (the empty subset always qualifies, so the result is
// >= 0). removal_count is ignored under WorstRemoval, which always
// drops exactly one chore (the cheapest of S, if S is nonempty).
//
// Exhaustive search when |source| <= 25, otherwise a pseudopolynomial
// DP over integer-scaled sizes; throws VerificationIntractable when the
// DP table would exceed 10^7 cells.
Rational envy_surplus(const Bundle& source, const Rational& budget,
                      int removal_count, RemovalMode mode,
                      const Instance& instance);

// Checks every ordered pair (envier i in [0, n], envied agent j in
// [0, n)), i != j, in lexicographic order, housekeeper included as an
// envier but never as an envied party. On the first violated pair,
// reports the lexicographically smallest violating subset.
EnvyReport verify(const Allocation& allocation, const EnvyCriterion& criterion,
                  const Instance& instance);

// Minimum number of chores to remove from X so that d(X \ R) <= d(Y).
// Removals are unconstrained, so dropping chores in non-increasing
// disutility order is optimal.
int ef_count(const Bundle& x, const Bundle& y, const Instance& instance);

// The i densest chores of S (density ties toward the lower chore id).
// Throws std::out_of_range when i > |S|.
Bundle prefix_by_count(const Bundle& s, int i, const Instance& instance);

// A density-ordered prefix of a bundle filled fractionally to an exact
// size threshold: whole chores plus at most one fringe chore taken at
// fraction alpha in [0, 1].
struct FractionalPrefix {
  std::vector<int> whole_chores;  // non-increasing density order
  std::optional<std::pair<int, Rational>> fringe;  // (chore id, alpha)
};

// Largest density-ordered prefix P of S with s(P) <= threshold, plus a
// fringe fraction of the next chore making the total size exactly
// min(threshold, s(S)). A zero fringe fraction is dropped.
FractionalPrefix prefix_by_size(const Bundle& s, const Rational& threshold,
                                const Instance& instance);

// Exact size and disutility of a fractional prefix (the fringe chore
// contributes alpha times its measurements).
BundleTotals aggregate(const FractionalPrefix& prefix,
                       const Instance& instance);

// ef_count generalized to fractional prefixes: the fringe counts as a
// single removable item of disutility alpha * d(fringe chore).
int ef_count_prefix(const FractionalPrefix& x, const FractionalPrefix& y,
                    const Instance& instance);

}  // namespace chorefair
