#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "planbench/domains.hpp"
#include "planbench/instance_gen.hpp"
#include "planbench/planner.hpp"
#include "planbench/validator.hpp"

using namespace planbench;

namespace {

PlannerConfig with(HeuristicId h, PlannerMode mode = PlannerMode::optimal) {
    PlannerConfig c;
    c.mode = mode;
    c.heuristic = h;
    return c;
}

Problem bw_task(const oracle::Stacks& init, const oracle::Stacks& goal) { return create_problem_bw(init, goal); }

}  // namespace

TEST_CASE("Sussman anomaly needs six steps under every optimal heuristic") {
    const Domain& bw = builtin_domain(DomainId::blocksworld);
    const Problem p = parse_problem(fixtures::kSussmanProblem);
    for (HeuristicId h : {HeuristicId::blind, HeuristicId::hmax, HeuristicId::lmcut}) {
        CAPTURE(to_string(h));
        const PlanResult r = solve(bw, p, with(h));
        REQUIRE(r.outcome == PlanOutcome::plan);
        CHECK(r.plan->size() == 6);
        CHECK(validate(bw, p, *r.plan).valid);
    }
}

TEST_CASE("optimal lengths match breadth-first search on four blocks") {
    const Domain& bw = builtin_domain(DomainId::blocksworld);
    const auto configs = oracle::block_configurations(4);
    REQUIRE(configs.size() == 73);
    // A fixed stride through the ordered pairs keeps the run short.
    std::size_t checked = 0;
    for (std::size_t i = 0; i < configs.size(); i += 5) {
        for (std::size_t j = 0; j < configs.size(); j += 7) {
            if (i == j) continue;
            const Problem p = bw_task(configs[i], configs[j]);
            const auto expected = oracle::bfs_length(bw, p);
            REQUIRE(expected);
            const PlanResult r = solve(bw, p);
            REQUIRE(r.outcome == PlanOutcome::plan);
            CHECK(r.plan->size() == *expected);
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("admissible heuristics never exceed the true distance") {
    const Domain& bw = builtin_domain(DomainId::blocksworld);
    const auto configs = oracle::block_configurations(4);
    for (std::size_t i = 0; i < configs.size(); i += 9) {
        const Problem p = bw_task(configs[i], configs[(i * 31 + 17) % configs.size()]);
        const auto d = oracle::bfs_length(bw, p);
        REQUIRE(d);
        const GroundTask task(bw, p);
        for (HeuristicId h : {HeuristicId::hmax, HeuristicId::lmcut}) {
            auto eval = make_heuristic(h, task);
            CHECK(eval->evaluate(task.initial_bits().data()) <= static_cast<int>(*d));
        }
    }
}

TEST_CASE("logistics and grid optimal plans match breadth-first search") {
    SUBCASE("logistics, one package") {
        LogisticsGenConfig cfg;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            Rng rng(seed);
            const Problem p = random_logistics_problem(cfg, 1, rng);
            const Domain& d = builtin_domain(DomainId::logistics);
            const PlanResult r = solve(d, p);
            REQUIRE(r.outcome == PlanOutcome::plan);
            CHECK(r.plan->size() == oracle::bfs_length(d, p).value());
        }
    }
    SUBCASE("grid, two rooms") {
        const auto grid = fixtures::split_pddl_prompt(fixtures::golden("grid_1shot.txt"));
        const Problem p = parse_problem(grid.shot_problem);
        const Domain& d = builtin_domain(DomainId::grid);
        const PlanResult r = solve(d, p);
        REQUIRE(r.outcome == PlanOutcome::plan);
        CHECK(r.plan->size() == 8);
        CHECK(validate(d, p, *r.plan).valid);
    }
}

TEST_CASE("satisficing search returns valid plans") {
    GridGenConfig g;
    g.rooms = 3;
    g.width = 3;
    g.height = 3;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        const Problem p = random_grid_problem(g, rng);
        const PlanResult r = solve(builtin_domain(DomainId::grid), p, with(HeuristicId::hadd, PlannerMode::satisficing));
        REQUIRE(r.outcome == PlanOutcome::plan);
        CHECK(validate(builtin_domain(DomainId::grid), p, *r.plan).valid);
    }
}

TEST_CASE("unreachable goals and budgets are reported") {
    const Domain& bw = builtin_domain(DomainId::blocksworld);
    Problem p = parse_problem(fixtures::kSussmanProblem);
    p.goal = {{"on", {"A", "B"}}, {"on", {"B", "A"}}};
    CHECK(solve(bw, p).outcome == PlanOutcome::unsolvable);

    Problem self = parse_problem(fixtures::kSussmanProblem);
    self.goal = {{"on", {"A", "A"}}};
    CHECK(solve(bw, self).outcome == PlanOutcome::unsolvable);

    Problem unknown = parse_problem(fixtures::kSussmanProblem);
    unknown.goal = {{"levitating", {"A"}}};
    CHECK_THROWS_AS(solve(bw, unknown), PlannerError);

    Rng rng(11);
    const Problem big = create_problem_bw(create_stacks(7, rng), create_stacks(7, rng));
    PlannerConfig tiny;
    tiny.node_budget = 1;
    tiny.heuristic = HeuristicId::blind;
    CHECK(solve(bw, big, tiny).outcome == PlanOutcome::budget_exceeded);
}

TEST_CASE("heuristic names round-trip") {
    for (HeuristicId h : {HeuristicId::blind, HeuristicId::hmax, HeuristicId::lmcut, HeuristicId::hadd})
        CHECK(heuristic_from_name(to_string(h)) == h);
    CHECK_FALSE(heuristic_from_name("ff"));
    CHECK(to_string(PlanOutcome::budget_exceeded) == "budget-exceeded");
}

TEST_CASE("a goal already true needs the empty plan") {
    Problem p = parse_problem(fixtures::kSussmanProblem);
    p.goal = {{"on", {"A", "B"}}};
    const PlanResult r = solve(builtin_domain(DomainId::blocksworld), p);
    REQUIRE(r.outcome == PlanOutcome::plan);
    CHECK(r.plan->empty());
}

TEST_CASE("grounding respects every static precondition") {
    const Problem p = parse_problem(R"((define (problem two-cities)
(:domain logistics-strips)
(:objects a0 c0 c1 t0 t1 l0-0 l0-1 l1-0 l1-1 p0)
(:init (AIRPLANE a0) (CITY c0) (CITY c1) (TRUCK t0) (TRUCK t1)
  (LOCATION l0-0) (in-city l0-0 c0) (LOCATION l0-1) (in-city l0-1 c0)
  (LOCATION l1-0) (in-city l1-0 c1) (LOCATION l1-1) (in-city l1-1 c1)
  (AIRPORT l0-0) (AIRPORT l1-0) (OBJ p0)
  (at t0 l0-0) (at t1 l1-0) (at p0 l1-1) (at a0 l1-0))
(:goal (and (at p0 l0-1))))
)");
    const GroundTask task(builtin_domain(DomainId::logistics), p);
    for (const auto& op : task.operators())
        if (op.action.name == "fly-airplane") {
            CHECK(op.action.args[1].back() == '0');
            CHECK(op.action.args[2].back() == '0');
        }
    const PlanResult r = solve(builtin_domain(DomainId::logistics), p);
    REQUIRE(r.outcome == PlanOutcome::plan);
    CHECK(validate(builtin_domain(DomainId::logistics), p, *r.plan).valid);
    CHECK(r.plan->size() == oracle::bfs_length(builtin_domain(DomainId::logistics), p));
}
