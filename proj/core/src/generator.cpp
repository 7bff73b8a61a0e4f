#include "chorefair/generator.hpp"

#include "chorefair/errors.hpp"
#include "chorefair/rational.hpp"

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace chorefair {

namespace {

// mt19937_64 output is fixed by the standard, so draws are reproducible
// across platforms as long as the mapping to a range avoids
// std::uniform_int_distribution (whose algorithm is unspecified).
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  // Uniform over [0, range) by rejection.
  std::uint64_t bounded(std::uint64_t range) {
    const std::uint64_t min = (0 - range) % range;  // 2^64 mod range
    std::uint64_t raw = engine_();
    while (raw < min) raw = engine_();
    return raw % range;
  }

  std::int64_t integer(const IntRange& range) {
    const auto span = static_cast<std::uint64_t>(range.hi - range.lo) + 1;
    return range.lo + static_cast<std::int64_t>(bounded(span));
  }

  bool coin() { return bounded(2) == 1; }

 private:
  std::mt19937_64 engine_;
};

void check_range(const IntRange& range, std::int64_t floor, const char* name) {
  if (range.lo > range.hi) {
    throw std::invalid_argument(std::string(name) + " range is empty");
  }
  if (range.lo < floor) {
    throw std::invalid_argument(std::string(name) + " range extends below " +
                                std::to_string(floor));
  }
}

}  // namespace

Instance generate(const GeneratorConfig& config) {
  check_range(config.agents, 1, "agents");
  check_range(config.chores, 0, "chores");
  check_range(config.size, 1, "size");
  check_range(config.disutility, 0, "disutility");
  check_range(config.budget, 1, "budget");
  if (config.denominator_limit < 1) {
    throw std::invalid_argument("denominator limit must be at least 1");
  }

  Draw draw(config.seed);
  const auto value = [&](const IntRange& range) {
    const Rational numerator(draw.integer(range));
    if (config.denominator_limit == 1) return numerator;
    return numerator / Rational(draw.integer({1, config.denominator_limit}));
  };

  const ForcedCase* forced =
      config.special_case ? &*config.special_case : nullptr;
  const auto is_forced = [&](ForcedCase c) { return forced && *forced == c; };

  const int n = is_forced(ForcedCase::TwoAgents)
                    ? 2
                    : static_cast<int>(draw.integer(config.agents));
  const int m = static_cast<int>(draw.integer(config.chores));

  // Shared values for the uniformity cases are drawn once, up front.
  Rational shared_disutility;
  Rational shared_size;
  Rational shared_density;
  Rational shared_budget;
  if (is_forced(ForcedCase::IdenticallyValued) ||
      is_forced(ForcedCase::BinaryDisutility)) {
    shared_disutility = value(config.disutility);
  }
  if (is_forced(ForcedCase::IdenticallySized)) shared_size = value(config.size);
  if (is_forced(ForcedCase::IdenticallyDense)) {
    shared_density = value(config.disutility);
  }
  if (is_forced(ForcedCase::IdenticalBudgets)) {
    shared_budget = value(config.budget);
  }

  Instance instance;
  instance.chores.reserve(m);
  for (int j = 0; j < m; ++j) {
    Chore chore;
    chore.size = is_forced(ForcedCase::IdenticallySized) ? shared_size
                                                         : value(config.size);
    if (is_forced(ForcedCase::IdenticallyValued)) {
      chore.disutility = shared_disutility;
    } else if (is_forced(ForcedCase::BinaryDisutility)) {
      chore.disutility = draw.coin() ? shared_disutility : Rational(0);
    } else if (is_forced(ForcedCase::IdenticallyDense)) {
      chore.disutility = shared_density * chore.size;
    } else {
      chore.disutility = value(config.disutility);
    }
    instance.chores.push_back(std::move(chore));
  }

  instance.budgets.reserve(n);
  for (int i = 0; i < n; ++i) {
    instance.budgets.push_back(is_forced(ForcedCase::IdenticalBudgets)
                                   ? shared_budget
                                   : value(config.budget));
  }

  if (config.subjective) {
    std::vector<std::vector<Rational>> matrix(n);
    for (auto& row : matrix) {
      row.reserve(m);
      for (int j = 0; j < m; ++j) row.push_back(value(config.disutility));
    }
    instance.disutility_matrix = std::move(matrix);
  }

  validate_instance(instance);
  return instance;
}

void enumerate_allocations(
    const Instance& instance,
    const std::function<bool(const Allocation&)>& visit) {
  const int n = instance.agent_count();
  const int m = instance.chore_count();

  constexpr std::uint64_t kCap = 10'000'000;
  std::uint64_t total = 1;
  for (int j = 0; j < m; ++j) {
    total *= static_cast<std::uint64_t>(n) + 1;
    if (total > kCap) {
      throw OracleTooLarge("assignment space exceeds 10^7 allocations");
    }
  }

  // Odometer over base n+1 digits, one per chore; digit n is the
  // housekeeper. Bundle sizes are maintained incrementally and the
  // count of over-budget agents with them, so the feasibility test per
  // step is O(1).
  std::vector<int> digit(m, 0);
  std::vector<Rational> load(n, Rational(0));
  int over = 0;

  const auto add = [&](int agent, int chore) {
    if (agent == n) return;
    const bool was_over = load[agent] > instance.budgets[agent];
    load[agent] += instance.chores[chore].size;
    if (!was_over && load[agent] > instance.budgets[agent]) ++over;
  };
  const auto remove = [&](int agent, int chore) {
    if (agent == n) return;
    const bool was_over = load[agent] > instance.budgets[agent];
    load[agent] -= instance.chores[chore].size;
    if (was_over && load[agent] <= instance.budgets[agent]) --over;
  };

  for (int j = 0; j < m; ++j) add(0, j);

  while (true) {
    if (over == 0) {
      Allocation allocation;
      allocation.bundles.assign(n + 1, Bundle{});
      for (int j = 0; j < m; ++j) allocation.bundles[digit[j]].insert(j);
      if (!visit(allocation)) return;
    }

    int pos = m - 1;
    while (pos >= 0) {
      remove(digit[pos], pos);
      ++digit[pos];
      if (digit[pos] <= n) {
        add(digit[pos], pos);
        break;
      }
      digit[pos] = 0;
      add(0, pos);
      --pos;
    }
    if (pos < 0) return;
  }
}

bool oracle_exists(const Instance& instance, const EnvyCriterion& criterion) {
  bool found = false;
  enumerate_allocations(instance, [&](const Allocation& allocation) {
    if (verify(allocation, criterion, instance).satisfied) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace chorefair
