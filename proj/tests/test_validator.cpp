#include "doctest.h"
#include "fixtures.hpp"
#include "planbench/domains.hpp"
#include "planbench/validator.hpp"

using namespace planbench;

namespace {
const Domain& bw() { return builtin_domain(DomainId::blocksworld); }
Problem sussman() { return parse_problem(fixtures::kSussmanProblem); }
}  // namespace

TEST_CASE("the worked blocks plan is valid") {
    const Verdict v = validate(bw(), sussman(), parse_plan(fixtures::kSussmanPlan));
    CHECK(v.valid);
    CHECK_FALSE(v.failure);
}

TEST_CASE("an inapplicable step is located") {
    const Verdict v = validate_text(bw(), sussman(), "(unstack A B)\n(pick-up C)\n");
    REQUIRE_FALSE(v.valid);
    REQUIRE(v.failure);
    CHECK(v.failure->step == 1);
    const auto* s = std::get_if<StepInapplicable>(&v.failure->reason);
    REQUIRE(s);
    CHECK(s->missing == GroundAtom{"handempty", {}});
    CHECK(describe(v).find("handempty") != std::string::npos);
}

TEST_CASE("an unreached goal lists the missing atoms") {
    const Verdict v = validate_text(bw(), sussman(), "(unstack A B)\n(put-down A)\n(pick-up C)\n(stack C B)\n");
    REQUIRE(v.failure);
    CHECK(v.failure->step == 4);
    const auto* g = std::get_if<GoalUnsatisfied>(&v.failure->reason);
    REQUIRE(g);
    CHECK(g->missing == std::vector<GroundAtom>{{"on", {"A", "C"}}});
}

TEST_CASE("unknown actions and bad arity are malformed steps") {
    Verdict v = validate_text(bw(), sussman(), "(unstack A B)\n(teleport A C)\n");
    REQUIRE(v.failure);
    CHECK(v.failure->step == 1);
    CHECK(std::holds_alternative<MalformedStep>(v.failure->reason));
    v = validate_text(bw(), sussman(), "(unstack A)\n");
    REQUIRE(v.failure);
    CHECK(std::holds_alternative<MalformedStep>(v.failure->reason));
}

TEST_CASE("unparseable plan text fails at the offending step") {
    const Verdict v = validate_text(bw(), sussman(), "(unstack A B)\n(put-down A)\nthen pick up C\n");
    REQUIRE(v.failure);
    CHECK(v.failure->step == 2);
    CHECK(std::holds_alternative<MalformedStep>(v.failure->reason));
}

TEST_CASE("the empty plan is valid only when the goal holds") {
    CHECK_FALSE(validate(bw(), sussman(), Plan{}).valid);
    Problem p = sussman();
    p.goal = {{"on", {"A", "B"}}};
    CHECK(validate(bw(), p, Plan{}).valid);
}

TEST_CASE("accuracy counts valid verdicts") {
    std::vector<Verdict> vs(4);
    vs[0].valid = vs[2].valid = vs[3].valid = true;
    CHECK(accuracy(vs) == doctest::Approx(0.75));
    CHECK_THROWS_AS(accuracy(std::span<const Verdict>{}), std::invalid_argument);
}
