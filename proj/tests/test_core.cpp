#include "chorefair/errors.hpp"
#include "chorefair/instance.hpp"
#include "chorefair/rational.hpp"

#include <doctest.h>

#include <stdexcept>
#include <string>

using namespace chorefair;

namespace {

Rational rat(long p, long q = 1) { return Rational(p) / Rational(q); }

Instance small_instance() {
  Instance instance;
  instance.chores = {{rat(2), rat(3)}, {rat(1), rat(1)}, {rat(4), rat(5)}};
  instance.budgets = {rat(3), rat(4)};
  return instance;
}

}  // namespace

TEST_CASE("rationals are constructed and normalized exactly") {
  CHECK(make_rational(Int(6), Int(4)) == rat(3, 2));
  CHECK(make_rational(Int(-6), Int(4)) == rat(-3, 2));
  CHECK(make_rational(Int(6), Int(-4)) == rat(-3, 2));
  CHECK(make_rational(Int(0), Int(7)) == rat(0));
  CHECK_THROWS_AS(make_rational(Int(1), Int(0)), std::invalid_argument);
}

TEST_CASE("rational parsing accepts integers, fractions and decimals") {
  CHECK(parse_rational("5") == rat(5));
  CHECK(parse_rational("-5") == rat(-5));
  CHECK(parse_rational("3/4") == rat(3, 4));
  CHECK(parse_rational("-3/6") == rat(-1, 2));
  CHECK(parse_rational("2.5") == rat(5, 2));
  CHECK(parse_rational("-0.125") == rat(-1, 8));
  CHECK(parse_rational("0.20") == rat(1, 5));
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("seven"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1.2.3"), std::invalid_argument);
}

TEST_CASE("rational formatting round-trips") {
  CHECK(format_rational(rat(7)) == "7");
  CHECK(format_rational(rat(5, 2)) == "5/2");
  CHECK(format_rational(rat(-5, 2)) == "-5/2");
  CHECK(format_rational(rat(0)) == "0");
  for (long p = -9; p <= 9; ++p) {
    for (long q = 1; q <= 9; ++q) {
      const Rational value = rat(p, q);
      CHECK(parse_rational(format_rational(value)) == value);
    }
  }
}

TEST_CASE("floor truncates toward negative infinity") {
  CHECK(floor_rational(rat(7, 2)) == Int(3));
  CHECK(floor_rational(rat(-7, 2)) == Int(-4));
  CHECK(floor_rational(rat(4)) == Int(4));
  CHECK(floor_rational(rat(-4)) == Int(-4));
  CHECK(floor_rational(rat(0)) == Int(0));
}

TEST_CASE("density divides disutility by size") {
  CHECK(density({rat(3), rat(6)}) == rat(2));
  CHECK(density({rat(4), rat(0)}) == rat(0));
  CHECK(density({rat(2), rat(5)}) == rat(5, 2));
}

TEST_CASE("bundles stay sorted and deduplicated") {
  Bundle bundle;
  bundle.insert(3);
  bundle.insert(1);
  bundle.insert(3);  // duplicate is a no-op
  CHECK(bundle.ids == std::vector<int>{1, 3});
  CHECK(bundle.contains(1));
  CHECK_FALSE(bundle.contains(2));
  bundle.erase(2);  // absent is a no-op
  bundle.erase(1);
  CHECK(bundle.ids == std::vector<int>{3});
  CHECK(bundle.count() == 1);

  CHECK(make_bundle({4, 0, 2}).ids == std::vector<int>{0, 2, 4});
  CHECK_THROWS_AS(make_bundle({1, 1}), std::invalid_argument);

  // Comparison is lexicographic on the sorted id lists; witness
  // reporting relies on this order.
  CHECK(make_bundle({0, 2}) < make_bundle({1}));
  CHECK(make_bundle({1}) < make_bundle({1, 2}));
  CHECK(Bundle{} < make_bundle({0}));
}

TEST_CASE("aggregate sums size and disutility") {
  const Instance instance = small_instance();
  const BundleTotals totals = aggregate(make_bundle({0, 2}), instance);
  CHECK(totals.size == rat(6));
  CHECK(totals.disutility == rat(8));
  const BundleTotals empty = aggregate(Bundle{}, instance);
  CHECK(empty.size == rat(0));
  CHECK(empty.disutility == rat(0));
}

TEST_CASE("instance validation pinpoints the first offender") {
  Instance instance = small_instance();
  validate_instance(instance);  // the base case is fine

  SUBCASE("no agents") {
    instance.budgets.clear();
    CHECK_THROWS_AS(validate_instance(instance), ValidationError);
  }
  SUBCASE("non-positive size") {
    instance.chores[1].size = rat(0);
    try {
      validate_instance(instance);
      FAIL("expected a validation error");
    } catch (const ValidationError& error) {
      CHECK(error.code() == ValidationError::Code::NonPositiveSize);
      CHECK(std::string(error.what()).find("chore 2") != std::string::npos);
    }
  }
  SUBCASE("negative disutility") {
    instance.chores[2].disutility = rat(-1);
    try {
      validate_instance(instance);
      FAIL("expected a validation error");
    } catch (const ValidationError& error) {
      CHECK(error.code() == ValidationError::Code::NegativeDisutility);
      CHECK(std::string(error.what()).find("chore 3") != std::string::npos);
    }
  }
  SUBCASE("non-positive budget") {
    instance.budgets[0] = rat(0);
    try {
      validate_instance(instance);
      FAIL("expected a validation error");
    } catch (const ValidationError& error) {
      CHECK(error.code() == ValidationError::Code::NonPositiveBudget);
      CHECK(std::string(error.what()).find("agent 1") != std::string::npos);
    }
  }
  SUBCASE("matrix shape mismatch") {
    instance.disutility_matrix = {{rat(1), rat(2), rat(3)}};  // one row, two agents
    try {
      validate_instance(instance);
      FAIL("expected a validation error");
    } catch (const ValidationError& error) {
      CHECK(error.code() == ValidationError::Code::DimensionMismatch);
    }
  }
  SUBCASE("matrix row length mismatch") {
    instance.disutility_matrix = {{rat(1), rat(2)}, {rat(1), rat(2), rat(3)}};
    try {
      validate_instance(instance);
      FAIL("expected a validation error");
    } catch (const ValidationError& error) {
      CHECK(error.code() == ValidationError::Code::DimensionMismatch);
    }
  }
  SUBCASE("negative matrix entry") {
    instance.disutility_matrix = {{rat(1), rat(2), rat(3)},
                                  {rat(1), rat(-2), rat(3)}};
    try {
      validate_instance(instance);
      FAIL("expected a validation error");
    } catch (const ValidationError& error) {
      CHECK(error.code() == ValidationError::Code::NegativeDisutility);
    }
  }
}

TEST_CASE("subjective disutilities override the objective column") {
  Instance instance = small_instance();
  instance.disutility_matrix = {{rat(7), rat(1), rat(5)},
                                {rat(3), rat(2), rat(5)}};
  CHECK(instance.disutility(0, 0) == rat(7));
  CHECK(instance.disutility(1, 1) == rat(2));
  // The housekeeper (index n) always uses the objective values.
  CHECK(instance.disutility(2, 0) == rat(3));

  Instance plain = small_instance();
  CHECK(plain.disutility(0, 0) == rat(3));
  CHECK(plain.disutility(1, 2) == rat(5));
}

TEST_CASE("partitions and feasibility") {
  const Instance instance = small_instance();

  Allocation good;
  good.bundles = {make_bundle({1}), make_bundle({2}), make_bundle({0})};
  CHECK(is_partition(good, instance));
  CHECK(is_feasible(good, instance));  // 1 <= 3 and 4 <= 4 on the boundary

  Allocation snug;
  snug.bundles = {make_bundle({0, 1}), make_bundle({2}), Bundle{}};
  CHECK(is_partition(snug, instance));
  CHECK(is_feasible(snug, instance));  // loads 3 and 4 hit both budgets exactly

  Allocation overloaded;
  overloaded.bundles = {make_bundle({0, 2}), make_bundle({1}), Bundle{}};
  CHECK(is_partition(overloaded, instance));
  CHECK_FALSE(is_feasible(overloaded, instance));  // agent 0 holds 2 + 4 = 6 > 3

  Allocation missing;
  missing.bundles = {make_bundle({1}), Bundle{}, make_bundle({0})};
  CHECK_FALSE(is_partition(missing, instance));
  CHECK_FALSE(is_feasible(missing, instance));

  Allocation duplicated;
  duplicated.bundles = {make_bundle({0, 1}), make_bundle({1, 2}), Bundle{}};
  CHECK_FALSE(is_partition(duplicated, instance));

  Allocation wrong_shape;
  wrong_shape.bundles = {make_bundle({0, 1, 2})};
  CHECK_FALSE(is_partition(wrong_shape, instance));

  // The housekeeper has no budget: dumping everything on it is feasible.
  CHECK(is_feasible(all_housekeeper(instance), instance));

  Allocation tight;
  tight.bundles = {make_bundle({0}), make_bundle({1, 2}), Bundle{}};
  CHECK(is_partition(tight, instance));
  CHECK_FALSE(is_feasible(tight, instance));  // agent 1 holds 1 + 4 = 5 > 4
}
