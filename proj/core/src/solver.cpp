#include "chorefair/solver.hpp"

#include "chorefair/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace chorefair {

namespace {

constexpr std::size_t kEnumerationBound = 25;
constexpr std::size_t kDpCellCap = 10'000'000;

// Best achievable disutility per exact subset cardinality, over subsets
// of a fixed pool that fit a budget. The enumeration path also records
// the lexicographically smallest optimal subset per cardinality; the DP
// path records values only (subsets are reconstructed on demand).
struct CardinalityTable {
  std::vector<std::optional<Rational>> value;  // index = cardinality
  std::vector<std::vector<int>> ids;           // enumeration mode only
  bool has_ids = false;
};

class CardinalityEnumeration {
 public:
  CardinalityEnumeration(const std::vector<int>& pool, const Rational& budget,
                         const Instance& instance)
      : pool_(pool), budget_(budget), instance_(instance) {
    table_.value.assign(pool.size() + 1, std::nullopt);
    table_.ids.assign(pool.size() + 1, {});
    table_.has_ids = true;
  }

  CardinalityTable run() {
    chosen_.reserve(pool_.size());
    // Include-before-exclude over ascending ids visits subsets in
    // lexicographic order, so a strict improvement test keeps the
    // lexicographically smallest optimum per cardinality.
    walk(0, Rational(0), Rational(0));
    return std::move(table_);
  }

 private:
  void walk(std::size_t index, const Rational& used, const Rational& value) {
    const std::size_t t = chosen_.size();
    if (!table_.value[t] || value > *table_.value[t]) {
      table_.value[t] = value;
      table_.ids[t] = chosen_;
    }
    if (index == pool_.size()) return;
    const Chore& chore =
        instance_.chores[static_cast<std::size_t>(pool_[index])];
    const Rational with = used + chore.size;
    if (with <= budget_) {
      chosen_.push_back(pool_[index]);
      walk(index + 1, with, value + chore.disutility);
      chosen_.pop_back();
    }
    walk(index + 1, used, value);
  }

  const std::vector<int>& pool_;
  const Rational& budget_;
  const Instance& instance_;
  std::vector<int> chosen_;
  CardinalityTable table_;
};

struct ScaledPool {
  Int scale = 1;
  std::size_t capacity = 0;          // floor(budget * scale)
  std::vector<std::size_t> sizes;    // capacity + 1 marks "never fits"
};

ScaledPool scale_pool(const std::vector<int>& pool, const Rational& budget,
                      const Instance& instance, std::size_t states) {
  ScaledPool scaled;
  for (int id : pool) {
    scaled.scale = boost::multiprecision::lcm(
        scaled.scale,
        denominator(instance.chores[static_cast<std::size_t>(id)].size));
  }
  const Int capacity_int = floor_rational(Rational(scaled.scale) * budget);
  if (capacity_int < 0) {
    scaled.capacity = 0;
    scaled.sizes.assign(pool.size(), 1);  // nothing fits a negative budget
    return scaled;
  }
  if ((capacity_int + 1) * Int(states) > Int(kDpCellCap)) {
    throw VerificationIntractable(
        "manageable-set search needs a DP table over " +
        Int((capacity_int + 1) * Int(states)).str() +
        " cells (cap 10^7) and the pool is too large to enumerate");
  }
  scaled.capacity = capacity_int.convert_to<std::size_t>();
  for (int id : pool) {
    const Chore& chore = instance.chores[static_cast<std::size_t>(id)];
    const Int s = numerator(chore.size) * (scaled.scale / denominator(chore.size));
    scaled.sizes.push_back(s > capacity_int ? scaled.capacity + 1
                                            : s.convert_to<std::size_t>());
  }
  return scaled;
}

CardinalityTable cardinality_dp(const std::vector<int>& pool,
                                const Rational& budget,
                                const Instance& instance) {
  const std::size_t states = pool.size() + 1;
  const ScaledPool scaled = scale_pool(pool, budget, instance, states);
  const std::size_t width = scaled.capacity + 1;
  std::vector<std::optional<Rational>> dp(width * states);
  const auto at = [states](std::size_t w, std::size_t t) {
    return w * states + t;
  };
  dp[at(0, 0)] = Rational(0);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const std::size_t sz = scaled.sizes[i];
    const Rational& d =
        instance.chores[static_cast<std::size_t>(pool[i])].disutility;
    if (sz > scaled.capacity) continue;
    // Descending weight sweep makes the in-place 0/1 update safe.
    for (std::size_t w = scaled.capacity - sz + 1; w-- > 0;) {
      for (std::size_t t = i + 1; t-- > 0;) {
        const auto& cell = dp[at(w, t)];
        if (!cell) continue;
        auto& target = dp[at(w + sz, t + 1)];
        const Rational candidate = *cell + d;
        if (!target || candidate > *target) target = candidate;
      }
    }
  }
  CardinalityTable table;
  table.value.assign(states, std::nullopt);
  for (std::size_t w = 0; w < width; ++w) {
    for (std::size_t t = 0; t < states; ++t) {
      const auto& cell = dp[at(w, t)];
      if (cell && (!table.value[t] || *cell > *table.value[t])) {
        table.value[t] = *cell;
      }
    }
  }
  return table;
}

CardinalityTable cardinality_table(const std::vector<int>& pool,
                                   const Rational& budget,
                                   const Instance& instance) {
  if (pool.size() <= kEnumerationBound) {
    return CardinalityEnumeration(pool, budget, instance).run();
  }
  return cardinality_dp(pool, budget, instance);
}

// Best disutility among subsets of `allowed` (all ids > the forced
// ones) extended by `forced`, with exact total cardinality and budget.
std::optional<Rational> best_with_forced(const std::vector<int>& forced,
                                         const std::vector<int>& allowed,
                                         std::size_t cardinality,
                                         const Rational& budget,
                                         const Instance& instance) {
  Rational base_size(0), base_value(0);
  for (int id : forced) {
    const Chore& chore = instance.chores[static_cast<std::size_t>(id)];
    base_size += chore.size;
    base_value += chore.disutility;
  }
  if (base_size > budget || forced.size() > cardinality) return std::nullopt;
  const std::size_t residual = cardinality - forced.size();
  if (residual > allowed.size()) return std::nullopt;
  const CardinalityTable table =
      cardinality_table(allowed, budget - base_size, instance);
  if (!table.value[residual]) return std::nullopt;
  return base_value + *table.value[residual];
}

// Lexicographically smallest subset of `pool` achieving `target` at the
// given cardinality within the budget (used when the table came from
// the DP and carries no subsets).
std::vector<int> reconstruct_subset(const std::vector<int>& pool,
                                    std::size_t cardinality,
                                    const Rational& target,
                                    const Rational& budget,
                                    const Instance& instance) {
  std::vector<int> forced;
  std::size_t start = 0;
  while (forced.size() < cardinality) {
    bool advanced = false;
    for (std::size_t pos = start; pos < pool.size(); ++pos) {
      std::vector<int> attempt = forced;
      attempt.push_back(pool[pos]);
      const std::vector<int> allowed(pool.begin() +
                                         static_cast<std::ptrdiff_t>(pos) + 1,
                                     pool.end());
      const auto best =
          best_with_forced(attempt, allowed, cardinality, budget, instance);
      if (best && *best == target) {
        forced = std::move(attempt);
        start = pos + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      throw InternalInvariantViolation(
          "failed to reconstruct an optimal manageable set");
    }
  }
  return forced;
}

}  // namespace

std::optional<ManageableSet> find_manageable_set(const Allocation& allocation,
                                                 const Instance& instance) {
  const int n = instance.agent_count();
  const std::vector<int>& pool = allocation.housekeeper(instance).ids;
  if (pool.empty()) return std::nullopt;

  std::vector<Rational> current;
  std::vector<CardinalityTable> tables;
  current.reserve(static_cast<std::size_t>(n));
  tables.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    current.push_back(
        aggregate(allocation.bundles[static_cast<std::size_t>(k)], instance)
            .disutility);
    tables.push_back(cardinality_table(
        pool, instance.budgets[static_cast<std::size_t>(k)], instance));
  }

  for (std::size_t cardinality = 1; cardinality <= pool.size(); ++cardinality) {
    // Candidates at this (minimum) cardinality: best value first.
    std::optional<Rational> best_value;
    for (int k = 0; k < n; ++k) {
      const auto& value = tables[static_cast<std::size_t>(k)].value[cardinality];
      if (!value || *value <= current[static_cast<std::size_t>(k)]) continue;
      if (!best_value || *value > *best_value) best_value = *value;
    }
    if (!best_value) continue;

    std::optional<std::vector<int>> best_ids;
    int best_agent = -1;
    for (int k = 0; k < n; ++k) {
      const auto& table = tables[static_cast<std::size_t>(k)];
      const auto& value = table.value[cardinality];
      if (!value || *value != *best_value ||
          *value <= current[static_cast<std::size_t>(k)]) {
        continue;
      }
      std::vector<int> ids =
          table.has_ids
              ? table.ids[cardinality]
              : reconstruct_subset(
                    pool, cardinality, *best_value,
                    instance.budgets[static_cast<std::size_t>(k)], instance);
      if (!best_ids || ids < *best_ids) {
        best_ids = std::move(ids);
        best_agent = k;
      }
    }
    return ManageableSet{make_bundle(std::move(*best_ids)), best_agent};
  }
  return std::nullopt;
}

SolverResult solve_efx(const Instance& instance) {
  validate_instance(instance);
  Allocation allocation = all_housekeeper(instance);
  const int n = instance.agent_count();
  int iterations = 0;
  while (auto found = find_manageable_set(allocation, instance)) {
    const int k = found->target_agent;
    Bundle& mine = allocation.bundles[static_cast<std::size_t>(k)];
    Bundle& keeper = allocation.bundles[static_cast<std::size_t>(n)];

    const Rational gained = aggregate(found->chores, instance).disutility;
    const Rational lost = aggregate(mine, instance).disutility;
    if (gained <= lost) {
      throw InternalInvariantViolation(
          "manageable set does not increase the assigned disutility");
    }

    for (int id : found->chores.ids) keeper.erase(id);
    for (int id : mine.ids) keeper.insert(id);
    mine = std::move(found->chores);
    ++iterations;
  }
  return {std::move(allocation), iterations};
}

SolverResult densest_first(const Instance& instance,
                           const DensestFirstOptions& options) {
  validate_instance(instance);
  const int n = instance.agent_count();
  const int m = instance.chore_count();

  const std::vector<Rational>& budgets =
      options.budget_override ? *options.budget_override : instance.budgets;
  if (budgets.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("budget override has wrong length");
  }

  std::vector<char> live(static_cast<std::size_t>(n), 0);
  if (options.live_agents) {
    for (int i : *options.live_agents) {
      live.at(static_cast<std::size_t>(i)) = 1;
    }
  } else {
    std::fill(live.begin(), live.end(), 1);
  }

  std::vector<char> assignable(static_cast<std::size_t>(m), 0);
  int remaining = 0;
  if (options.chore_subset) {
    for (int id : options.chore_subset->ids) {
      assignable.at(static_cast<std::size_t>(id)) = 1;
      ++remaining;
    }
  } else {
    std::fill(assignable.begin(), assignable.end(), 1);
    remaining = m;
  }

  std::vector<Rational> densities;
  densities.reserve(static_cast<std::size_t>(m));
  for (const Chore& chore : instance.chores) densities.push_back(density(chore));

  Allocation allocation = all_housekeeper(instance);
  std::vector<Rational> bundle_size(static_cast<std::size_t>(n), Rational(0));
  std::vector<Rational> bundle_value(static_cast<std::size_t>(n), Rational(0));

  int live_count = 0;
  for (char f : live) live_count += f;

  int iterations = 0;
  while (live_count > 0 && remaining > 0) {
    int agent = -1;
    for (int i = 0; i < n; ++i) {
      if (!live[static_cast<std::size_t>(i)]) continue;
      if (agent < 0 || bundle_value[static_cast<std::size_t>(i)] <
                           bundle_value[static_cast<std::size_t>(agent)]) {
        agent = i;
      }
    }

    int choice = -1;
    for (int id = 0; id < m; ++id) {
      if (!assignable[static_cast<std::size_t>(id)]) continue;
      const Chore& chore = instance.chores[static_cast<std::size_t>(id)];
      if (bundle_size[static_cast<std::size_t>(agent)] + chore.size >
          budgets[static_cast<std::size_t>(agent)]) {
        continue;
      }
      if (choice < 0) {
        choice = id;
        continue;
      }
      const Chore& incumbent = instance.chores[static_cast<std::size_t>(choice)];
      const Rational& rho = densities[static_cast<std::size_t>(id)];
      const Rational& rho_best = densities[static_cast<std::size_t>(choice)];
      if (rho > rho_best ||
          (rho == rho_best && chore.size < incumbent.size)) {
        choice = id;  // equal density and size: the lower id already won
      }
    }

    if (choice < 0) {
      live[static_cast<std::size_t>(agent)] = 0;
      --live_count;
    } else {
      allocation.bundles[static_cast<std::size_t>(agent)].insert(choice);
      allocation.bundles[static_cast<std::size_t>(n)].erase(choice);
      const Chore& chore = instance.chores[static_cast<std::size_t>(choice)];
      bundle_size[static_cast<std::size_t>(agent)] += chore.size;
      bundle_value[static_cast<std::size_t>(agent)] += chore.disutility;
      assignable[static_cast<std::size_t>(choice)] = 0;
      --remaining;
    }
    ++iterations;
    if (options.on_iteration) options.on_iteration(allocation);
  }
  return {std::move(allocation), iterations};
}

SolverResult solve_two_agents(const Instance& instance) {
  validate_instance(instance);
  if (instance.agent_count() != 2) {
    throw WrongAgentCount("the two-agent composition requires exactly 2 "
                          "agents, got " +
                          std::to_string(instance.agent_count()));
  }
  // Reorder so the smaller budget comes first (ties keep input order).
  const bool swapped = instance.budgets[1] < instance.budgets[0];
  Instance ordered;
  ordered.chores = instance.chores;
  ordered.budgets = swapped
                        ? std::vector<Rational>{instance.budgets[1],
                                                instance.budgets[0]}
                        : instance.budgets;

  const Rational low_budget = ordered.budgets[0];

  DensestFirstOptions phase_one;
  phase_one.budget_override = std::vector<Rational>{low_budget, low_budget};
  SolverResult equal_run = densest_first(ordered, phase_one);

  const Rational d0 =
      aggregate(equal_run.allocation.bundles[0], ordered).disutility;
  const Rational d1 =
      aggregate(equal_run.allocation.bundles[1], ordered).disutility;
  const Bundle first_bundle = d0 >= d1 ? equal_run.allocation.bundles[0]
                                       : equal_run.allocation.bundles[1];

  Bundle leftover;
  for (int id = 0; id < ordered.chore_count(); ++id) {
    if (!first_bundle.contains(id)) leftover.insert(id);
  }

  DensestFirstOptions phase_two;
  phase_two.chore_subset = leftover;
  phase_two.live_agents = std::vector<int>{1};
  SolverResult second_run = densest_first(ordered, phase_two);

  Allocation result = all_housekeeper(ordered);
  result.bundles[0] = first_bundle;
  result.bundles[1] = second_run.allocation.bundles[1];
  for (int id : result.bundles[0].ids) result.bundles[2].erase(id);
  for (int id : result.bundles[1].ids) result.bundles[2].erase(id);

  if (swapped) std::swap(result.bundles[0], result.bundles[1]);
  return {std::move(result), equal_run.iterations + second_run.iterations};
}

Classification classify_instance(const Instance& instance) {
  validate_instance(instance);
  SpecialCase flags;

  // Zero-disutility chores are ignored for the value tests (they can
  // always be parked with the housekeeper without creating envy).
  std::optional<Rational> positive_value;
  bool uniform_positive = true;
  for (const Chore& chore : instance.chores) {
    if (chore.disutility == 0) continue;
    if (!positive_value) {
      positive_value = chore.disutility;
    } else if (chore.disutility != *positive_value) {
      uniform_positive = false;
    }
  }
  flags.identically_valued = uniform_positive;
  flags.binary_disutility = uniform_positive;

  flags.identically_sized = true;
  flags.identically_dense = true;
  for (const Chore& chore : instance.chores) {
    if (chore.size != instance.chores.front().size) {
      flags.identically_sized = false;
    }
    if (density(chore) != density(instance.chores.front())) {
      flags.identically_dense = false;
    }
  }

  flags.identical_budgets = true;
  for (const Rational& budget : instance.budgets) {
    if (budget != instance.budgets.front()) flags.identical_budgets = false;
  }

  flags.two_agents = instance.agent_count() == 2;

  return {flags, flags.any() ? EnvyCriterion::ef1() : EnvyCriterion::ef2()};
}

EnvyCriterion densest_first_guarantee(const Instance& instance) {
  return classify_instance(instance).flags.chore_or_budget_flag()
             ? EnvyCriterion::ef1()
             : EnvyCriterion::ef2();
}

}  // namespace chorefair
