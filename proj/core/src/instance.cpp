#include "chorefair/instance.hpp"

#include "chorefair/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace chorefair {

const Rational& Instance::disutility(int agent, int chore) const {
  // The housekeeper (index n) has no row of its own and falls back to
  // the objective values, matrix or not.
  if (disutility_matrix && agent < agent_count()) {
    return (*disutility_matrix)[static_cast<std::size_t>(agent)]
                               [static_cast<std::size_t>(chore)];
  }
  return chores[static_cast<std::size_t>(chore)].disutility;
}

void validate_instance(const Instance& instance) {
  if (instance.budgets.empty()) {
    throw ValidationError(ValidationError::Code::DimensionMismatch,
                          "instance has no agents");
  }
  for (std::size_t j = 0; j < instance.chores.size(); ++j) {
    const Chore& c = instance.chores[j];
    if (c.size <= 0) {
      throw ValidationError(
          ValidationError::Code::NonPositiveSize,
          "chore " + std::to_string(j + 1) + " has non-positive size");
    }
    if (c.disutility < 0) {
      throw ValidationError(
          ValidationError::Code::NegativeDisutility,
          "chore " + std::to_string(j + 1) + " has negative disutility");
    }
  }
  for (std::size_t i = 0; i < instance.budgets.size(); ++i) {
    if (instance.budgets[i] <= 0) {
      throw ValidationError(
          ValidationError::Code::NonPositiveBudget,
          "agent " + std::to_string(i + 1) + " has non-positive budget");
    }
  }
  if (instance.disutility_matrix) {
    const auto& matrix = *instance.disutility_matrix;
    if (matrix.size() != instance.budgets.size()) {
      throw ValidationError(ValidationError::Code::DimensionMismatch,
                            "disutility matrix row count does not match "
                            "the number of agents");
    }
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      if (matrix[i].size() != instance.chores.size()) {
        throw ValidationError(ValidationError::Code::DimensionMismatch,
                              "disutility matrix row " + std::to_string(i + 1) +
                                  " does not match the number of chores");
      }
      for (std::size_t j = 0; j < matrix[i].size(); ++j) {
        if (matrix[i][j] < 0) {
          throw ValidationError(ValidationError::Code::NegativeDisutility,
                                "matrix entry for agent " +
                                    std::to_string(i + 1) + ", chore " +
                                    std::to_string(j + 1) + " is negative");
        }
      }
    }
  }
}

bool Bundle::contains(int id) const {
  return std::binary_search(ids.begin(), ids.end(), id);
}

void Bundle::insert(int id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it != ids.end() && *it == id) return;
  ids.insert(it, id);
}

void Bundle::erase(int id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it != ids.end() && *it == id) ids.erase(it);
}

Bundle make_bundle(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw std::invalid_argument("bundle with duplicate chore id");
  }
  return Bundle{std::move(ids)};
}

BundleTotals aggregate(const Bundle& bundle, const Instance& instance) {
  BundleTotals totals{Rational(0), Rational(0)};
  for (int id : bundle.ids) {
    const Chore& c = instance.chores[static_cast<std::size_t>(id)];
    totals.size += c.size;
    totals.disutility += c.disutility;
  }
  return totals;
}

Rational density(const Chore& chore) { return chore.disutility / chore.size; }

Allocation all_housekeeper(const Instance& instance) {
  Allocation allocation;
  allocation.bundles.resize(static_cast<std::size_t>(instance.agent_count()) + 1);
  Bundle& keeper = allocation.bundles.back();
  keeper.ids.resize(static_cast<std::size_t>(instance.chore_count()));
  for (int j = 0; j < instance.chore_count(); ++j) {
    keeper.ids[static_cast<std::size_t>(j)] = j;
  }
  return allocation;
}

bool is_partition(const Allocation& allocation, const Instance& instance) {
  if (allocation.bundles.size() !=
      static_cast<std::size_t>(instance.agent_count()) + 1) {
    return false;
  }
  std::vector<int> seen(static_cast<std::size_t>(instance.chore_count()), 0);
  for (const Bundle& bundle : allocation.bundles) {
    int previous = -1;
    for (int id : bundle.ids) {
      if (id <= previous) return false;  // unsorted or duplicate within bundle
      previous = id;
      if (id < 0 || id >= instance.chore_count()) return false;
      if (seen[static_cast<std::size_t>(id)]++) return false;
    }
  }
  for (int flag : seen) {
    if (!flag) return false;
  }
  return true;
}

bool is_feasible(const Allocation& allocation, const Instance& instance) {
  if (!is_partition(allocation, instance)) return false;
  for (int i = 0; i < instance.agent_count(); ++i) {
    const BundleTotals totals =
        aggregate(allocation.bundles[static_cast<std::size_t>(i)], instance);
    if (totals.size > instance.budgets[static_cast<std::size_t>(i)]) {
      return false;
    }
  }
  return true;
}

}  // namespace chorefair
