#pragma once

// Plan verification in the style of VAL: execute from the initial state,
// check each precondition, then check the goal in the final state.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "planbench/pddl.hpp"

namespace planbench {

struct StepInapplicable {
    GroundAtom missing;
};

struct GoalUnsatisfied {
    std::vector<GroundAtom> missing;
};

// Unknown action, wrong arity, or unparseable plan text.
struct MalformedStep {
    std::string message;
};

using FailureReason = std::variant<StepInapplicable, GoalUnsatisfied, MalformedStep>;

struct Failure {
    std::size_t step = 0;  // 0-based; plan length for goal failures
    FailureReason reason;
};

struct Verdict {
    bool valid = false;
    std::optional<Failure> failure;  // present iff !valid
};

Verdict validate(const Domain& domain, const Problem& problem, const Plan& plan);
// Parses `plan_text` first; parse errors become a MalformedStep verdict.
Verdict validate_text(const Domain& domain, const Problem& problem, std::string_view plan_text);

std::string describe(const Verdict& verdict);

// Fraction of valid verdicts. Throws std::invalid_argument on an empty list.
double accuracy(std::span<const Verdict> verdicts);

}  // namespace planbench
