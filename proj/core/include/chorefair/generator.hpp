#pragma once

#include "chorefair/fairness.hpp"
#include "chorefair/instance.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace chorefair {

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;  // inclusive
};

enum class ForcedCase {
  IdenticallyValued,
  BinaryDisutility,
  IdenticallySized,
  IdenticallyDense,
  IdenticalBudgets,
  TwoAgents,
};

struct GeneratorConfig {
  std::uint64_t seed = 0;
  IntRange agents{1, 4};
  IntRange chores{1, 10};
  IntRange size{1, 20};        // lo >= 1
  IntRange disutility{0, 20};  // lo >= 0
  IntRange budget{1, 20};      // lo >= 1
  std::optional<ForcedCase> special_case;

  // > 1 turns integer draws into fractions value/denominator with the
  // denominator drawn from [1, denominator_limit].
  std::int64_t denominator_limit = 1;

  // Emit a per-agent disutility matrix (divisible instances).
  bool subjective = false;
};

// Deterministic function of the config (including the seed); the
// produced instance always validates, and classify_instance includes
// any forced special-case flag.
Instance generate(const GeneratorConfig& config);

// Visits every feasible allocation of the instance exactly once (the
// assignment space is walked in odometer order); the visitor returns
// false to stop early. Throws OracleTooLarge when the assignment space
// (n+1)^m exceeds 10^7.
void enumerate_allocations(const Instance& instance,
                           const std::function<bool(const Allocation&)>& visit);

// True iff some feasible allocation satisfies the criterion.
bool oracle_exists(const Instance& instance, const EnvyCriterion& criterion);

}  // namespace chorefair
