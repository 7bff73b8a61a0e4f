#include "chorefair/fairness.hpp"

#include "chorefair/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace chorefair {

namespace {

constexpr std::size_t kEnumerationBound = 25;
constexpr std::size_t kDpCellCap = 10'000'000;

struct SearchItem {
  int id = -1;
  Rational size;
  Rational value;
  bool forced = false;
};

// One subset-maximization query: over all S containing every forced
// item, drawn from `items`, with s(S) <= budget, maximize the
// post-removal disutility of S under `mode`. Items must already be in
// the mode's processing order (see order_items).
struct SurplusQuery {
  std::vector<SearchItem> items;
  Rational budget;
  int removal_count = 0;  // BestRemoval only
  RemovalMode mode = RemovalMode::BestRemoval;

  // Early exit: stop as soon as some subset beats this value. The
  // returned maximum is then only a witness above the bar, not the
  // true maximum.
  std::optional<Rational> stop_above;
};

// BestRemoval discounts the removal_count largest disutilities of S, so
// processing items in non-increasing disutility order lets the engine
// treat the first removal_count inclusions as the removed ones.
// WorstRemoval discounts the single smallest, hence ascending order and
// the first inclusion is the discarded chore.
void order_items(std::vector<SearchItem>& items, RemovalMode mode) {
  std::sort(items.begin(), items.end(),
            [mode](const SearchItem& a, const SearchItem& b) {
              if (a.value != b.value) {
                return mode == RemovalMode::BestRemoval ? a.value > b.value
                                                        : a.value < b.value;
              }
              return a.id < b.id;
            });
}

class EnumerationSearch {
 public:
  explicit EnumerationSearch(const SurplusQuery& query) : q_(query) {
    const std::size_t count = q_.items.size();
    // suffix_free_[i]: no forced item at position >= i, so the subset
    // decided before position i is already a complete candidate.
    suffix_free_.assign(count + 1, true);
    suffix_value_.assign(count + 1, Rational(0));
    for (std::size_t i = count; i-- > 0;) {
      suffix_free_[i] = suffix_free_[i + 1] && !q_.items[i].forced;
      suffix_value_[i] = suffix_value_[i + 1] + q_.items[i].value;
    }
  }

  std::optional<Rational> run() {
    walk(0, Rational(0), 0, false, Rational(0));
    return best_;
  }

 private:
  void note(const Rational& value) {
    if (!best_ || value > *best_) {
      best_ = value;
      if (q_.stop_above && *best_ > *q_.stop_above) done_ = true;
    }
  }

  void walk(std::size_t index, const Rational& used, int removed,
            bool started, const Rational& value) {
    if (done_) return;
    if (suffix_free_[index]) {
      note(value);
      if (done_) return;
    }
    // Even keeping every remaining chore cannot beat the incumbent.
    if (best_ && value + suffix_value_[index] <= *best_) return;
    if (index == q_.items.size()) return;

    const SearchItem& item = q_.items[index];
    const Rational with = used + item.size;
    if (with <= q_.budget) {
      if (q_.mode == RemovalMode::BestRemoval) {
        if (removed < q_.removal_count) {
          walk(index + 1, with, removed + 1, started, value);
        } else {
          walk(index + 1, with, removed, started, value + item.value);
        }
      } else {
        if (!started) {
          walk(index + 1, with, removed, true, value);
        } else {
          walk(index + 1, with, removed, started, value + item.value);
        }
      }
    }
    if (!item.forced) walk(index + 1, used, removed, started, value);
  }

  const SurplusQuery& q_;
  std::vector<char> suffix_free_;
  std::vector<Rational> suffix_value_;
  std::optional<Rational> best_;
  bool done_ = false;
};

std::optional<Rational> dp_search(const SurplusQuery& q) {
  // Scale sizes to integers: s(S) <= budget iff the scaled sum is at
  // most floor(budget * lcm), because the scaled sum is an integer.
  Int scale = 1;
  for (const SearchItem& item : q.items) {
    scale = boost::multiprecision::lcm(scale, denominator(item.size));
  }
  const Int capacity_int = floor_rational(Rational(scale) * q.budget);
  if (capacity_int < 0) return std::nullopt;

  const std::size_t states =
      q.mode == RemovalMode::BestRemoval
          ? static_cast<std::size_t>(q.removal_count) + 1
          : 2;
  if (Int(capacity_int + 1) * Int(states) > Int(kDpCellCap)) {
    throw VerificationIntractable(
        "envy check needs a DP table over " +
        Int(Int(capacity_int + 1) * Int(states)).str() +
        " cells (cap 10^7) and the bundle is too large to enumerate");
  }
  const std::size_t capacity = capacity_int.convert_to<std::size_t>();

  std::vector<std::size_t> scaled_sizes;
  scaled_sizes.reserve(q.items.size());
  for (const SearchItem& item : q.items) {
    const Int scaled = numerator(item.size) * (scale / denominator(item.size));
    if (scaled > capacity_int) {
      scaled_sizes.push_back(capacity + 1);  // never fits
    } else {
      scaled_sizes.push_back(scaled.convert_to<std::size_t>());
    }
  }

  const std::size_t cells = (capacity + 1) * states;
  std::vector<std::optional<Rational>> current(cells), next(cells);
  const auto at = [states](std::size_t weight, std::size_t state) {
    return weight * states + state;
  };
  current[at(0, 0)] = Rational(0);

  const auto raise = [](std::optional<Rational>& cell, Rational candidate) {
    if (!cell || candidate > *cell) cell = std::move(candidate);
  };

  for (std::size_t i = 0; i < q.items.size(); ++i) {
    const SearchItem& item = q.items[i];
    const std::size_t sz = scaled_sizes[i];
    std::fill(next.begin(), next.end(), std::nullopt);
    for (std::size_t w = 0; w <= capacity; ++w) {
      for (std::size_t r = 0; r < states; ++r) {
        const auto& cell = current[at(w, r)];
        if (!cell) continue;
        if (!item.forced) raise(next[at(w, r)], *cell);
        if (sz > capacity || w + sz > capacity) continue;
        if (q.mode == RemovalMode::BestRemoval) {
          if (r < static_cast<std::size_t>(q.removal_count)) {
            raise(next[at(w + sz, r + 1)], *cell);
          } else {
            raise(next[at(w + sz, r)], *cell + item.value);
          }
        } else {
          if (r == 0) {
            raise(next[at(w + sz, 1)], *cell);
          } else {
            raise(next[at(w + sz, 1)], *cell + item.value);
          }
        }
      }
    }
    current.swap(next);
  }

  std::optional<Rational> best;
  for (const auto& cell : current) {
    if (cell && (!best || *cell > *best)) best = *cell;
  }
  return best;
}

std::optional<Rational> max_surplus(SurplusQuery query) {
  order_items(query.items, query.mode);
  if (query.items.size() <= kEnumerationBound) {
    return EnumerationSearch(query).run();
  }
  return dp_search(query);
}

SurplusQuery make_query(const std::vector<int>& ids,
                        const std::vector<int>& forced_ids,
                        const Rational& budget, int removal_count,
                        RemovalMode mode, const Instance& instance) {
  SurplusQuery query;
  query.budget = budget;
  query.removal_count = removal_count;
  query.mode = mode;
  query.items.reserve(ids.size() + forced_ids.size());
  for (int id : ids) {
    const Chore& c = instance.chores[static_cast<std::size_t>(id)];
    query.items.push_back({id, c.size, c.disutility, false});
  }
  for (int id : forced_ids) {
    const Chore& c = instance.chores[static_cast<std::size_t>(id)];
    query.items.push_back({id, c.size, c.disutility, true});
  }
  return query;
}

struct CriterionRule {
  RemovalMode mode;
  int removal_count;
};

CriterionRule rule_for(const EnvyCriterion& criterion) {
  switch (criterion.kind) {
    case EnvyCriterion::Kind::Ef:
      return {RemovalMode::BestRemoval, 0};
    case EnvyCriterion::Kind::Efk:
      return {RemovalMode::BestRemoval, criterion.k};
    case EnvyCriterion::Kind::Efx:
      return {RemovalMode::WorstRemoval, 1};
  }
  throw std::logic_error("unreachable");
}

// Post-removal disutility of one concrete subset (no search).
Rational subset_value(const std::vector<int>& ids, const CriterionRule& rule,
                      const Instance& instance) {
  std::vector<Rational> values;
  values.reserve(ids.size());
  Rational total(0);
  for (int id : ids) {
    const Rational& d = instance.chores[static_cast<std::size_t>(id)].disutility;
    values.push_back(d);
    total += d;
  }
  if (values.empty()) return Rational(0);
  if (rule.mode == RemovalMode::WorstRemoval) {
    return total - *std::min_element(values.begin(), values.end());
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  const std::size_t removable =
      std::min(values.size(), static_cast<std::size_t>(rule.removal_count));
  for (std::size_t i = 0; i < removable; ++i) total -= values[i];
  return total;
}

// Lexicographically smallest subset of `source` that fits `budget` and
// whose post-removal disutility exceeds `threshold`. Built greedily:
// fix the smallest possible first chore, then the smallest second, and
// so on, each step validated by an existence query over extensions.
Bundle lexmin_violating_subset(const Bundle& source, const Rational& budget,
                               const Rational& threshold,
                               const CriterionRule& rule,
                               const Instance& instance) {
  std::vector<int> chosen;
  Rational chosen_size(0);
  while (true) {
    if (chosen_size <= budget &&
        subset_value(chosen, rule, instance) > threshold) {
      return Bundle{chosen};
    }
    bool extended = false;
    const int floor_id = chosen.empty() ? -1 : chosen.back();
    for (std::size_t pos = 0; pos < source.ids.size(); ++pos) {
      const int candidate = source.ids[pos];
      if (candidate <= floor_id) continue;
      std::vector<int> forced = chosen;
      forced.push_back(candidate);
      std::vector<int> allowed(source.ids.begin() +
                                   static_cast<std::ptrdiff_t>(pos) + 1,
                               source.ids.end());
      SurplusQuery query = make_query(allowed, forced, budget,
                                      rule.removal_count, rule.mode, instance);
      query.stop_above = threshold;
      const auto best = max_surplus(std::move(query));
      if (best && *best > threshold) {
        chosen.push_back(candidate);
        chosen_size +=
            instance.chores[static_cast<std::size_t>(candidate)].size;
        extended = true;
        break;
      }
    }
    if (!extended) {
      throw InternalInvariantViolation(
          "witness search failed although a violating subset exists");
    }
  }
}

}  // namespace

EnvyCriterion EnvyCriterion::efk(int k) {
  if (k < 1) throw std::invalid_argument("EFk requires k >= 1");
  return {Kind::Efk, k};
}

Rational envy_surplus(const Bundle& source, const Rational& budget,
                      int removal_count, RemovalMode mode,
                      const Instance& instance) {
  if (removal_count < 0) {
    throw std::invalid_argument("negative removal count");
  }
  SurplusQuery query =
      make_query(source.ids, {}, budget, removal_count, mode, instance);
  const auto best = max_surplus(std::move(query));
  // With no forced items the empty subset always qualifies.
  return best.value_or(Rational(0));
}

EnvyReport verify(const Allocation& allocation, const EnvyCriterion& criterion,
                  const Instance& instance) {
  const CriterionRule rule = rule_for(criterion);
  const int n = instance.agent_count();
  std::vector<Rational> bundle_disutility;
  bundle_disutility.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    bundle_disutility.push_back(
        aggregate(allocation.bundles[static_cast<std::size_t>(j)], instance)
            .disutility);
  }
  for (int i = 0; i <= n; ++i) {
    const Bundle& mine = allocation.bundles[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;  // subsets of one's own bundle never exceed it
      const Rational& budget = instance.budgets[static_cast<std::size_t>(j)];
      const Rational& threshold = bundle_disutility[static_cast<std::size_t>(j)];
      SurplusQuery query = make_query(mine.ids, {}, budget,
                                      rule.removal_count, rule.mode, instance);
      query.stop_above = threshold;
      const auto best = max_surplus(std::move(query));
      if (best && *best > threshold) {
        EnvyWitness witness;
        witness.envier = i;
        witness.envied = j;
        witness.subset =
            lexmin_violating_subset(mine, budget, threshold, rule, instance);
        return EnvyReport{false, std::move(witness)};
      }
    }
  }
  return EnvyReport{true, std::nullopt};
}

int ef_count(const Bundle& x, const Bundle& y, const Instance& instance) {
  const Rational target = aggregate(y, instance).disutility;
  std::vector<Rational> values;
  values.reserve(x.ids.size());
  Rational total(0);
  for (int id : x.ids) {
    const Rational& d = instance.chores[static_cast<std::size_t>(id)].disutility;
    values.push_back(d);
    total += d;
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  int removed = 0;
  for (const Rational& v : values) {
    if (total <= target) break;
    total -= v;
    ++removed;
  }
  return removed;
}

namespace {

// Ids of S in non-increasing density order, ties toward lower id.
std::vector<int> density_sorted(const Bundle& s, const Instance& instance) {
  std::vector<int> ids = s.ids;
  std::sort(ids.begin(), ids.end(), [&instance](int a, int b) {
    const Rational da = density(instance.chores[static_cast<std::size_t>(a)]);
    const Rational db = density(instance.chores[static_cast<std::size_t>(b)]);
    if (da != db) return da > db;
    return a < b;
  });
  return ids;
}

}  // namespace

Bundle prefix_by_count(const Bundle& s, int i, const Instance& instance) {
  if (i < 0 || static_cast<std::size_t>(i) > s.ids.size()) {
    throw std::out_of_range("prefix count " + std::to_string(i) +
                            " out of range for a bundle of " +
                            std::to_string(s.ids.size()) + " chores");
  }
  std::vector<int> ordered = density_sorted(s, instance);
  ordered.resize(static_cast<std::size_t>(i));
  return make_bundle(std::move(ordered));
}

FractionalPrefix prefix_by_size(const Bundle& s, const Rational& threshold,
                                const Instance& instance) {
  if (threshold < 0) throw std::invalid_argument("negative size threshold");
  FractionalPrefix prefix;
  const std::vector<int> ordered = density_sorted(s, instance);
  Rational used(0);
  std::size_t next = 0;
  while (next < ordered.size()) {
    const Rational& sz =
        instance.chores[static_cast<std::size_t>(ordered[next])].size;
    if (used + sz > threshold) break;
    prefix.whole_chores.push_back(ordered[next]);
    used += sz;
    ++next;
  }
  if (next < ordered.size()) {
    const Rational& sz =
        instance.chores[static_cast<std::size_t>(ordered[next])].size;
    const Rational alpha = (threshold - used) / sz;
    if (alpha > 0) prefix.fringe = {ordered[next], alpha};
  }
  return prefix;
}

BundleTotals aggregate(const FractionalPrefix& prefix,
                       const Instance& instance) {
  BundleTotals totals{Rational(0), Rational(0)};
  for (int id : prefix.whole_chores) {
    const Chore& c = instance.chores[static_cast<std::size_t>(id)];
    totals.size += c.size;
    totals.disutility += c.disutility;
  }
  if (prefix.fringe) {
    const Chore& c =
        instance.chores[static_cast<std::size_t>(prefix.fringe->first)];
    totals.size += prefix.fringe->second * c.size;
    totals.disutility += prefix.fringe->second * c.disutility;
  }
  return totals;
}

int ef_count_prefix(const FractionalPrefix& x, const FractionalPrefix& y,
                    const Instance& instance) {
  const Rational target = aggregate(y, instance).disutility;
  std::vector<Rational> values;
  values.reserve(x.whole_chores.size() + 1);
  Rational total(0);
  for (int id : x.whole_chores) {
    const Rational& d = instance.chores[static_cast<std::size_t>(id)].disutility;
    values.push_back(d);
    total += d;
  }
  if (x.fringe) {
    const Rational d =
        x.fringe->second *
        instance.chores[static_cast<std::size_t>(x.fringe->first)].disutility;
    values.push_back(d);
    total += d;
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  int removed = 0;
  for (const Rational& v : values) {
    if (total <= target) break;
    total -= v;
    ++removed;
  }
  return removed;
}

}  // namespace chorefair
