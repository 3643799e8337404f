#include "doctest.h"
#include "fixtures.hpp"
#include "planbench/domains.hpp"
#include "planbench/nl_bridge.hpp"

using namespace planbench;

TEST_CASE("the blocks problem reads as the worked natural-language panel") {
    CHECK(problem_to_nl(parse_problem(fixtures::kSussmanProblem)) == fixtures::kSussmanNlProblem);
}

TEST_CASE("the worked natural-language plan maps back to the PDDL plan") {
    const NlPlanResult r = nl_plan_to_pddl(fixtures::kSussmanNlPlan, DomainId::blocksworld);
    CHECK(r.ok());
    CHECK(r.plan == parse_plan(fixtures::kSussmanPlan));
    // Its phrasing is not the canonical template text.
    CHECK_FALSE(nl_plan_to_pddl(fixtures::kSussmanNlPlan, DomainId::blocksworld, MatchMode::strict).ok());
}

TEST_CASE("canonical sentences") {
    CHECK(atom_to_nl(DomainId::blocksworld, {"on", {"b3", "b1"}}) == "b3 is on b1.");
    CHECK(action_to_nl(DomainId::blocksworld, {"unstack", {"A", "B"}}) == "Unstack A from B.");
    CHECK(action_to_nl(DomainId::blocksworld, {"put-down", {"A"}}) == "Put down A.");
    CHECK(plan_to_nl(DomainId::blocksworld, parse_plan("(pick-up c)\n(stack c b)\n")) == "Pick up c.\nStack c on b.\n");
    CHECK_THROWS_AS(action_to_nl(DomainId::blocksworld, {"fly", {"a"}}), VocabularyError);
}

TEST_CASE("every action of every domain round-trips") {
    const std::vector<std::pair<DomainId, std::string>> plans{
        {DomainId::blocksworld, "(pick-up b1)\n(put-down b1)\n(stack b2 b3)\n(unstack b2 b3)\n"},
        {DomainId::logistics,
         "(load-truck p0 t1 l1-1)\n(drive-truck t1 l1-1 l1-0 c1)\n(unload-truck p0 t1 l1-0)\n"
         "(load-airplane p0 a1 l1-0)\n(fly-airplane a1 l1-0 l2-0)\n(unload-airplane p0 a1 l2-0)\n"},
        {DomainId::grid,
         "(move p3 p2)\n(pickup p0 key0)\n(unlock p2 p4 key0 shape0)\n(pickup-and-loose p5 key1 key0)\n"}};
    for (const auto& [domain, text] : plans) {
        const Plan plan = parse_plan(text);
        for (MatchMode mode : {MatchMode::strict, MatchMode::tolerant}) {
            const NlPlanResult r = nl_plan_to_pddl(plan_to_nl(domain, plan), domain, mode);
            CHECK(r.ok());
            CHECK(r.plan == plan);
        }
    }
}

TEST_CASE("tolerant matching ignores case, markup and list markers") {
    const NlPlanResult r =
        nl_plan_to_pddl("1. **unstack A from B.**\n- put down A\n`Pick up C.` done. Stack C on B.", DomainId::blocksworld);
    CHECK(r.ok());
    CHECK(r.plan == parse_plan("(unstack A B)\n(put-down A)\n(pick-up C)\n"));
}

TEST_CASE("unmatched sentences are diagnosed") {
    const NlPlanResult r = nl_plan_to_pddl("Unstack A from B. Juggle the blocks. Put down A.", DomainId::blocksworld);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].sentence == 1);
    CHECK(r.errors[0].text.find("Juggle") != std::string::npos);
    CHECK(r.plan.size() == 2);
}

TEST_CASE("logistics problem statements mention every initial atom") {
    const auto lg = fixtures::split_pddl_prompt(fixtures::golden("logistics_1shot.txt"));
    const Problem p = parse_problem(lg.test_problem);
    const std::string nl = problem_to_nl(p);
    CHECK(nl.rfind("The initial state:\n", 0) == 0);
    for (const auto& atom : p.init) CHECK(nl.find(atom_to_nl(DomainId::logistics, atom)) != std::string::npos);
    CHECK(nl.find("The goal is: p0 is at l0-1.") != std::string::npos);
}
