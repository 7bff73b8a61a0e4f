#pragma once

#include "chorefair/rational.hpp"

#include <vector>

namespace chorefair {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LinearConstraint {
  std::vector<Rational> coefficients;  // one per variable
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

// Box-bounded variables plus arbitrary equality / inequality rows.
struct LinearSystem {
  int variable_count = 0;
  std::vector<Rational> lower;  // per-variable lower bounds
  std::vector<Rational> upper;  // per-variable upper bounds
  std::vector<LinearConstraint> constraints;
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<Rational> point;  // one value per variable when feasible
};

struct SolveOptions {
  // Cheap exact reductions (empty/singleton rows, fixed-variable
  // substitution, implied upper bounds) applied before the simplex.
  // Equivalence-preserving; switchable so tests can compare both paths.
  bool presolve = true;
};

// Exact feasibility check: presolve plus a phase-one simplex over
// rationals with Bland's anti-cycling rule. Any returned point is
// re-validated against the original system before it leaves here.
// Throws std::invalid_argument on malformed systems (wrong coefficient
// counts); bound pairs with lower > upper are simply infeasible.
FeasibilityResult feasible(const LinearSystem& system,
                           const SolveOptions& options = {});

// Exact bounds-and-constraints check of one candidate point.
bool satisfies(const LinearSystem& system, const std::vector<Rational>& point);

}  // namespace chorefair
