#include "chorefair/solver.hpp"

#include "chorefair/errors.hpp"
#include "chorefair/fairness.hpp"
#include "chorefair/generator.hpp"

#include <doctest.h>

#include <cstdint>
#include <vector>

namespace {

using namespace chorefair;

Rational rat(long long p, long long q = 1) { return make_rational(Int(p), Int(q)); }

// Agent-to-agent EF1 only (the housekeeper is exempt): the invariant the
// greedy loop maintains mid-run, when unassigned chores still pile up at
// the housekeeper.
bool agents_ef1(const Allocation& alloc, const Instance& ins) {
  const int n = ins.agent_count();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Rational target = aggregate(alloc.bundles[static_cast<std::size_t>(j)], ins).disutility;
      if (envy_surplus(alloc.bundles[static_cast<std::size_t>(i)], ins.budgets[static_cast<std::size_t>(j)], 1,
                       RemovalMode::BestRemoval, ins) > target) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("find_manageable_set picks minimum cardinality, then disutility") {
  // Keeper holds c0 (size 3, disutility 4) and c1 (size 2, disutility 1);
  // the lone agent is idle with budget 5. Both singletons qualify; the
  // richer one wins.
  Instance ins;
  ins.chores = {{rat(3), rat(4)}, {rat(2), rat(1)}};
  ins.budgets = {rat(5)};
  const Allocation start = all_housekeeper(ins);

  const auto found = find_manageable_set(start, ins);
  REQUIRE(found.has_value());
  CHECK(found->target_agent == 0);
  CHECK(found->chores == make_bundle({0}));
}

TEST_CASE("find_manageable_set breaks exact ties toward low ids and agents") {
  SUBCASE("equal-disutility singletons: lexicographically smaller set") {
    Instance ins;
    ins.chores = {{rat(3), rat(4)}, {rat(1), rat(4)}};
    ins.budgets = {rat(5)};
    const auto found = find_manageable_set(all_housekeeper(ins), ins);
    REQUIRE(found.has_value());
    CHECK(found->chores == make_bundle({0}));
  }
  SUBCASE("two identical agents: smaller index") {
    Instance ins;
    ins.chores = {{rat(3), rat(4)}};
    ins.budgets = {rat(5), rat(5)};
    const auto found = find_manageable_set(all_housekeeper(ins), ins);
    REQUIRE(found.has_value());
    CHECK(found->target_agent == 0);
  }
  SUBCASE("a pair can beat nothing: cardinality before disutility") {
    // No singleton clears agent 0's current disutility of 4, but the
    // pair {c1, c2} does.
    Instance ins;
    ins.chores = {{rat(2), rat(4)}, {rat(2), rat(3)}, {rat(2), rat(2)}};
    ins.budgets = {rat(5)};
    Allocation alloc{{make_bundle({0}), make_bundle({1, 2})}};
    const auto found = find_manageable_set(alloc, ins);
    REQUIRE(found.has_value());
    CHECK(found->chores == make_bundle({1, 2}));
  }
}

TEST_CASE("find_manageable_set returns nothing when no subset qualifies") {
  SUBCASE("keeper chores exceed the budget") {
    Instance ins;
    ins.chores = {{rat(10), rat(5)}};
    ins.budgets = {rat(4)};
    CHECK_FALSE(find_manageable_set(all_housekeeper(ins), ins).has_value());
  }
  SUBCASE("keeper chores carry no disutility") {
    Instance ins;
    ins.chores = {{rat(1), rat(0)}};
    ins.budgets = {rat(4)};
    CHECK_FALSE(find_manageable_set(all_housekeeper(ins), ins).has_value());
  }
  SUBCASE("empty keeper") {
    Instance ins;
    ins.chores = {{rat(1), rat(1)}};
    ins.budgets = {rat(4)};
    Allocation alloc{{make_bundle({0}), Bundle{}}};
    CHECK_FALSE(find_manageable_set(alloc, ins).has_value());
  }
}

TEST_CASE("solve_efx hands over and later displaces bundles") {
  // Round one gives the single agent c0 (disutility 3); round two swaps
  // it for the pair {c1, c2} (disutility 4), sending c0 back.
  Instance ins;
  ins.chores = {{rat(5), rat(3)}, {rat(3), rat(2)}, {rat(2), rat(2)}};
  ins.budgets = {rat(5)};

  const SolverResult result = solve_efx(ins);
  CHECK(result.iterations == 2);
  CHECK(result.allocation.bundles[0] == make_bundle({1, 2}));
  CHECK(result.allocation.housekeeper(ins) == make_bundle({0}));
  CHECK(verify(result.allocation, EnvyCriterion::efx(), ins).satisfied);
}

TEST_CASE("solve_efx stops when the keeper has nothing tempting") {
  Instance ins;
  ins.chores = {{rat(3), rat(4)}, {rat(2), rat(1)}};
  ins.budgets = {rat(5)};

  const SolverResult result = solve_efx(ins);
  CHECK(result.iterations == 1);
  CHECK(result.allocation.bundles[0] == make_bundle({0}));
  CHECK(result.allocation.housekeeper(ins) == make_bundle({1}));
  CHECK(verify(result.allocation, EnvyCriterion::efx(), ins).satisfied);
}

TEST_CASE("solve_efx outputs are feasible and EFX on random instances") {
  GeneratorConfig cfg;
  cfg.agents = {1, 3};
  cfg.chores = {1, 7};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    cfg.seed = 31000 + seed;
    const Instance ins = generate(cfg);
    const SolverResult result = solve_efx(ins);
    CAPTURE(seed);
    CHECK(is_feasible(result.allocation, ins));
    CHECK(verify(result.allocation, EnvyCriterion::efx(), ins).satisfied);
  }
}

TEST_CASE("densest_first walks the documented greedy trace") {
  // Densities 2, 1, 1; the tie between c1 (size 2) and c2 (size 4) goes
  // to the smaller chore. Nobody can afford c2 afterwards.
  Instance ins;
  ins.chores = {{rat(3), rat(6)}, {rat(2), rat(2)}, {rat(4), rat(4)}};
  ins.budgets = {rat(5), rat(5)};

  std::vector<Allocation> steps;
  DensestFirstOptions options;
  options.on_iteration = [&](const Allocation& a) { steps.push_back(a); };

  const SolverResult result = densest_first(ins, options);
  CHECK(result.allocation.bundles[0] == make_bundle({0}));
  CHECK(result.allocation.bundles[1] == make_bundle({1}));
  CHECK(result.allocation.housekeeper(ins) == make_bundle({2}));

  // Two assignments plus two retirements, within the n + m bound.
  CHECK(result.iterations == 4);
  CHECK(static_cast<int>(steps.size()) == result.iterations);
  CHECK(steps[0].bundles[0] == make_bundle({0}));  // agent 0 first (tie at 0)
  CHECK(steps[1].bundles[1] == make_bundle({1}));
  for (const Allocation& step : steps) CHECK(is_feasible(step, ins));
}

TEST_CASE("densest_first prefers the least-loaded agent, low index on ties") {
  // Four equal chores, two agents: strict alternation.
  Instance ins;
  ins.chores = {{rat(1), rat(1)}, {rat(1), rat(1)}, {rat(1), rat(1)}, {rat(1), rat(1)}};
  ins.budgets = {rat(10), rat(10)};

  const SolverResult result = densest_first(ins);
  CHECK(result.allocation.bundles[0] == make_bundle({0, 2}));
  CHECK(result.allocation.bundles[1] == make_bundle({1, 3}));
  CHECK(result.allocation.housekeeper(ins).empty());
}

TEST_CASE("densest_first honors overrides, chore subsets, and live agents") {
  Instance ins;
  ins.chores = {{rat(3), rat(6)}, {rat(2), rat(2)}, {rat(4), rat(4)}};
  ins.budgets = {rat(5), rat(5)};

  SUBCASE("budget override tightens feasibility") {
    DensestFirstOptions options;
    options.budget_override = std::vector<Rational>{rat(2), rat(2)};
    const SolverResult result = densest_first(ins, options);
    CHECK(result.allocation.bundles[0] == make_bundle({1}));
    CHECK(result.allocation.bundles[1].empty());
    CHECK(result.allocation.housekeeper(ins) == make_bundle({0, 2}));
  }
  SUBCASE("chore subset leaves the rest with the housekeeper") {
    // c1 and c2 tie on density 1; the smaller c1 goes first, to agent 0.
    DensestFirstOptions options;
    options.chore_subset = make_bundle({1, 2});
    const SolverResult result = densest_first(ins, options);
    CHECK(result.allocation.bundles[0] == make_bundle({1}));
    CHECK(result.allocation.bundles[1] == make_bundle({2}));
    CHECK(result.allocation.housekeeper(ins) == make_bundle({0}));
  }
  SUBCASE("only live agents participate") {
    DensestFirstOptions options;
    options.live_agents = std::vector<int>{1};
    const SolverResult result = densest_first(ins, options);
    CHECK(result.allocation.bundles[0].empty());
    CHECK(result.allocation.bundles[1] == make_bundle({0, 1}));
    CHECK(result.allocation.housekeeper(ins) == make_bundle({2}));
  }
}

TEST_CASE("densest_first outputs are feasible, EF2, and iteration-bounded") {
  GeneratorConfig cfg;
  cfg.agents = {1, 4};
  cfg.chores = {1, 8};
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    cfg.seed = 52000 + seed;
    const Instance ins = generate(cfg);
    const SolverResult result = densest_first(ins);
    CAPTURE(seed);
    CHECK(is_feasible(result.allocation, ins));
    CHECK(result.iterations <= ins.agent_count() + ins.chore_count());
    CHECK(verify(result.allocation, EnvyCriterion::ef2(), ins).satisfied);
  }
}

TEST_CASE("densest_first is EF1 under every special-case flag") {
  const ForcedCase cases[] = {ForcedCase::IdenticallyValued, ForcedCase::BinaryDisutility,
                              ForcedCase::IdenticallySized, ForcedCase::IdenticallyDense,
                              ForcedCase::IdenticalBudgets};
  for (const ForcedCase forced : cases) {
    GeneratorConfig cfg;
    cfg.agents = {1, 4};
    cfg.chores = {1, 7};
    cfg.special_case = forced;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      cfg.seed = 61000 + seed;
      const Instance ins = generate(cfg);
      CHECK(densest_first_guarantee(ins) == EnvyCriterion::ef1());

      // The agent-to-agent EF1 invariant holds after every iteration,
      // not just at the end (unassigned chores still sit with the
      // housekeeper mid-run, so it is exempt there).
      DensestFirstOptions options;
      options.on_iteration = [&](const Allocation& step) {
        CHECK(agents_ef1(step, ins));
      };
      const SolverResult result = densest_first(ins, options);
      CAPTURE(static_cast<int>(forced));
      CAPTURE(seed);
      CHECK(verify(result.allocation, EnvyCriterion::ef1(), ins).satisfied);
    }
  }
}

TEST_CASE("solve_two_agents composes two greedy runs") {
  // Phase one runs both agents at budget 5 and assigns c0 and c1; the
  // heavier bundle {c0} goes to the small-budget agent, and the rerun
  // gives agent 1 the leftover c1 under its true budget of 10.
  Instance ins;
  ins.chores = {{rat(5), rat(10)}, {rat(5), rat(6)}};
  ins.budgets = {rat(5), rat(10)};

  const SolverResult result = solve_two_agents(ins);
  CHECK(result.allocation.bundles[0] == make_bundle({0}));
  CHECK(result.allocation.bundles[1] == make_bundle({1}));
  CHECK(result.allocation.housekeeper(ins).empty());
  CHECK(verify(result.allocation, EnvyCriterion::ef1(), ins).satisfied);
}

TEST_CASE("solve_two_agents restores the input agent order") {
  // Same instance with the agents swapped: the allocation swaps with them.
  Instance ins;
  ins.chores = {{rat(5), rat(10)}, {rat(5), rat(6)}};
  ins.budgets = {rat(10), rat(5)};

  const SolverResult result = solve_two_agents(ins);
  CHECK(result.allocation.bundles[0] == make_bundle({1}));
  CHECK(result.allocation.bundles[1] == make_bundle({0}));
  CHECK(verify(result.allocation, EnvyCriterion::ef1(), ins).satisfied);
}

TEST_CASE("solve_two_agents can use the larger budget in the second phase") {
  // At the shared budget 3 nobody can take c1 (size 5); the rerun with
  // agent 1's true budget 6 picks it up.
  Instance ins;
  ins.chores = {{rat(3), rat(9)}, {rat(5), rat(5)}};
  ins.budgets = {rat(3), rat(6)};

  const SolverResult result = solve_two_agents(ins);
  CHECK(result.allocation.bundles[0] == make_bundle({0}));
  CHECK(result.allocation.bundles[1] == make_bundle({1}));
  CHECK(result.allocation.housekeeper(ins).empty());
  CHECK(verify(result.allocation, EnvyCriterion::ef1(), ins).satisfied);
}

TEST_CASE("solve_two_agents rejects other agent counts") {
  Instance one;
  one.chores = {{rat(1), rat(1)}};
  one.budgets = {rat(2)};
  CHECK_THROWS_AS(solve_two_agents(one), WrongAgentCount);

  Instance three = one;
  three.budgets = {rat(2), rat(2), rat(2)};
  CHECK_THROWS_AS(solve_two_agents(three), WrongAgentCount);
}

TEST_CASE("solve_two_agents is EF1 on random two-agent instances") {
  GeneratorConfig cfg;
  cfg.special_case = ForcedCase::TwoAgents;
  cfg.chores = {1, 8};
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    cfg.seed = 73000 + seed;
    const Instance ins = generate(cfg);
    const SolverResult result = solve_two_agents(ins);
    CAPTURE(seed);
    CHECK(is_feasible(result.allocation, ins));
    CHECK(verify(result.allocation, EnvyCriterion::ef1(), ins).satisfied);
  }
}

TEST_CASE("classify_instance reports exact structural flags") {
  Instance ins;
  ins.chores = {{rat(2), rat(3)}, {rat(4), rat(3)}, {rat(1), rat(0)}};
  ins.budgets = {rat(5), rat(5), rat(5)};

  const Classification c = classify_instance(ins);
  // Positive disutilities are uniformly 3; the zero-disutility chore is
  // ignored by the value flags but breaks identical density and size.
  CHECK(c.flags.identically_valued);
  CHECK(c.flags.binary_disutility);
  CHECK_FALSE(c.flags.identically_sized);
  CHECK_FALSE(c.flags.identically_dense);
  CHECK(c.flags.identical_budgets);
  CHECK_FALSE(c.flags.two_agents);
  CHECK(c.guaranteed == EnvyCriterion::ef1());

  SUBCASE("a second positive value clears the value flags") {
    ins.chores[1].disutility = rat(7);
    const Classification c2 = classify_instance(ins);
    CHECK_FALSE(c2.flags.identically_valued);
    CHECK_FALSE(c2.flags.binary_disutility);
  }
  SUBCASE("general three-agent instances only guarantee EF2") {
    ins.chores[1].disutility = rat(7);
    ins.budgets = {rat(5), rat(6), rat(7)};
    const Classification c2 = classify_instance(ins);
    CHECK_FALSE(c2.flags.any());
    CHECK(c2.guaranteed == EnvyCriterion::ef2());
    CHECK(densest_first_guarantee(ins) == EnvyCriterion::ef2());
  }
  SUBCASE("two agents flag alone does not upgrade densest_first") {
    ins.chores[1].disutility = rat(7);
    ins.budgets = {rat(5), rat(6)};
    const Classification c2 = classify_instance(ins);
    CHECK(c2.flags.two_agents);
    CHECK_FALSE(c2.flags.chore_or_budget_flag());
    CHECK(c2.guaranteed == EnvyCriterion::ef1());
    CHECK(densest_first_guarantee(ins) == EnvyCriterion::ef2());
  }
  SUBCASE("identical densities with distinct sizes") {
    Instance dense;
    dense.chores = {{rat(2), rat(4)}, {rat(3), rat(6)}};
    dense.budgets = {rat(5), rat(6), rat(7)};
    const Classification c2 = classify_instance(dense);
    CHECK(c2.flags.identically_dense);
    CHECK_FALSE(c2.flags.identically_sized);
    CHECK_FALSE(c2.flags.identically_valued);
  }
}

TEST_CASE("forced generator cases land in the advertised class") {
  const std::pair<ForcedCase, bool SpecialCase::*> table[] = {
      {ForcedCase::IdenticallyValued, &SpecialCase::identically_valued},
      {ForcedCase::BinaryDisutility, &SpecialCase::binary_disutility},
      {ForcedCase::IdenticallySized, &SpecialCase::identically_sized},
      {ForcedCase::IdenticallyDense, &SpecialCase::identically_dense},
      {ForcedCase::IdenticalBudgets, &SpecialCase::identical_budgets},
      {ForcedCase::TwoAgents, &SpecialCase::two_agents},
  };
  for (const auto& [forced, member] : table) {
    GeneratorConfig cfg;
    cfg.special_case = forced;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      cfg.seed = 81000 + seed;
      const Classification c = classify_instance(generate(cfg));
      CAPTURE(static_cast<int>(forced));
      CHECK(c.flags.*member);
    }
  }
}
