#include "doctest.h"
#include "fixtures.hpp"
#include "planbench/domains.hpp"
#include "planbench/pddl.hpp"

using namespace planbench;

TEST_CASE("problem parsing keeps object case and source order") {
    const Problem p = parse_problem(fixtures::kSussmanProblem);
    CHECK(p.name == "BW-rand-3");
    CHECK(p.domain_name == "blocksworld-4ops");
    CHECK(p.objects == std::vector<std::string>{"A", "B", "C"});
    REQUIRE(p.init.size() == 5);
    CHECK(p.init[0] == GroundAtom{"handempty", {}});
    CHECK(p.init[3] == GroundAtom{"on", {"A", "B"}});
    REQUIRE(p.goal.size() == 2);
    CHECK(p.goal[1] == GroundAtom{"on", {"A", "C"}});
}

TEST_CASE("predicate names are case-insensitive") {
    const Problem p = parse_problem(
        "(define (problem x) (:domain logistics-strips) (:objects p0 l0-0) (:init (OBJ p0) (at p0 l0-0)) "
        "(:goal (and (at p0 l0-0))))");
    CHECK(p.init[0].predicate == "obj");
}

TEST_CASE("syntax errors carry a position") {
    try {
        parse_problem("(define (problem x)\n  (:domain d)\n  (:init (on a b)\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() >= 1);
        CHECK(e.column() >= 1);
    }
}

TEST_CASE("constructs outside STRIPS are rejected") {
    CHECK_THROWS_AS(parse_problem("(define (problem x) (:domain d) (:objects a) (:init) (:goal (not (on a a))))"),
                    UnsupportedConstruct);
    CHECK_THROWS_AS(parse_problem("(define (problem x) (:domain d) (:objects a) (:init) (:goal (or (p a) (q a))))"),
                    UnsupportedConstruct);
}

TEST_CASE("embedded domains parse and pass structural checks") {
    for (DomainId id : kAllDomains) {
        const Domain& d = builtin_domain(id);
        CHECK_NOTHROW(check_domain(d));
        CHECK(d.name == domain_name(id));
        CHECK(parse_domain(render_domain(d)) == d);
    }
    CHECK(builtin_domain(DomainId::blocksworld).actions.size() == 4);
    CHECK(builtin_domain(DomainId::logistics).actions.size() == 6);
    CHECK(builtin_domain(DomainId::grid).find_action("pickup-and-loose")->params.size() == 3);
}

TEST_CASE("step follows delete-then-add semantics") {
    const Domain& bw = builtin_domain(DomainId::blocksworld);
    const Problem p = parse_problem(fixtures::kSussmanProblem);
    const State s0 = initial_state(p);
    auto r = step(bw, s0, {"unstack", {"A", "B"}});
    REQUIRE(std::holds_alternative<State>(r));
    const State& s1 = std::get<State>(r);
    CHECK(s1.contains({"holding", {"A"}}));
    CHECK(s1.contains({"clear", {"B"}}));
    CHECK_FALSE(s1.contains({"on", {"A", "B"}}));
    CHECK_FALSE(s1.contains({"handempty", {}}));

    auto bad = step(bw, s0, {"pick-up", {"A"}});
    REQUIRE(std::holds_alternative<Inapplicable>(bad));
    CHECK(std::get<Inapplicable>(bad).missing == GroundAtom{"ontable", {"A"}});
    CHECK(std::get<Inapplicable>(bad).precondition_index == 1);

    CHECK_THROWS_AS(step(bw, s0, {"fly", {"A"}}), ActionError);
    CHECK_THROWS_AS(step(bw, s0, {"stack", {"A"}}), ActionError);
}

TEST_CASE("plan parsing stops at done and skips blank lines") {
    const Plan p = parse_plan("(pick-up c)\n\n(stack c b)\ndone.\n(put-down a)\n");
    REQUIRE(p.size() == 2);
    CHECK(p.steps[1] == GroundAction{"stack", {"c", "b"}});
    CHECK(parse_plan(fixtures::kSussmanPlan).size() == 6);
    CHECK(render_plan(p) == "(pick-up c)\n(stack c b)\ndone.\n");
    CHECK(render_plan(p, false) == "(pick-up c)\n(stack c b)\n");
    try {
        parse_plan("(pick-up c)\nstack c b\n");
        FAIL("expected PlanSyntaxError");
    } catch (const PlanSyntaxError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("rendered golden problems re-render byte-identically") {
    const auto bw = fixtures::split_pddl_prompt(fixtures::golden("blocksworld_1shot.txt"));
    CHECK(render_problem(parse_problem(bw.shot_problem)) == bw.shot_problem);
    CHECK(render_problem(parse_problem(bw.test_problem)) == bw.test_problem);
    const auto grid = fixtures::split_pddl_prompt(fixtures::golden("grid_1shot.txt"));
    CHECK(render_problem(parse_problem(grid.shot_problem)) == grid.shot_problem);
    CHECK(render_problem(parse_problem(grid.test_problem)) == grid.test_problem);
    // The logistics example has irregular spacing; structure still round-trips.
    const auto lg = fixtures::split_pddl_prompt(fixtures::golden("logistics_1shot.txt"));
    const Problem p = parse_problem(lg.shot_problem);
    CHECK(parse_problem(render_problem(p)) == p);
}

TEST_CASE("problems must reference declared objects") {
    Problem p = parse_problem(fixtures::kSussmanProblem);
    CHECK_NOTHROW(check_problem(p));
    p.goal.push_back({"on", {"A", "D"}});
    CHECK_THROWS_AS(check_problem(p), PddlError);
}
