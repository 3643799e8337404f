#include "planbench/validator.hpp"

#include <stdexcept>

namespace planbench {

Verdict validate(const Domain& domain, const Problem& problem, const Plan& plan) {
    State state;
    try {
        state = initial_state(problem);
    } catch (const PddlError& e) {
        return {false, Failure{0, MalformedStep{e.what()}}};
    }
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        StepResult result;
        try {
            result = step(domain, state, plan.steps[i]);
        } catch (const PddlError& e) {
            return {false, Failure{i, MalformedStep{e.what()}}};
        }
        if (auto* bad = std::get_if<Inapplicable>(&result)) return {false, Failure{i, StepInapplicable{bad->missing}}};
        state = std::get<State>(std::move(result));
    }
    GoalUnsatisfied unmet;
    for (const auto& g : problem.goal)
        if (!state.contains(g)) unmet.missing.push_back(g);
    if (!unmet.missing.empty()) return {false, Failure{plan.steps.size(), std::move(unmet)}};
    return {true, std::nullopt};
}

Verdict validate_text(const Domain& domain, const Problem& problem, std::string_view plan_text) {
    Plan plan;
    try {
        plan = parse_plan(plan_text);
    } catch (const PlanSyntaxError& e) {
        // Step index = number of well-formed steps before the offending line.
        std::size_t pos = 0;
        for (std::size_t line = 1; line < e.line() && pos != std::string_view::npos; ++line) {
            pos = plan_text.find('\n', pos);
            if (pos != std::string_view::npos) ++pos;
        }
        std::size_t index = 0;
        try {
            index = parse_plan(plan_text.substr(0, pos == std::string_view::npos ? plan_text.size() : pos)).size();
        } catch (const PlanSyntaxError&) {
        }
        return {false, Failure{index, MalformedStep{e.what()}}};
    }
    return validate(domain, problem, plan);
}

std::string describe(const Verdict& verdict) {
    if (verdict.valid) return "plan valid";
    const Failure& f = *verdict.failure;
    if (const auto* r = std::get_if<StepInapplicable>(&f.reason))
        return "step " + std::to_string(f.step) + " inapplicable: missing precondition " + to_string(r->missing);
    if (const auto* r = std::get_if<GoalUnsatisfied>(&f.reason)) {
        std::string out = "goal not satisfied after " + std::to_string(f.step) + " steps; missing";
        for (const auto& a : r->missing) out += " " + to_string(a);
        return out;
    }
    return "malformed step " + std::to_string(f.step) + ": " + std::get<MalformedStep>(f.reason).message;
}

double accuracy(std::span<const Verdict> verdicts) {
    if (verdicts.empty()) throw std::invalid_argument("accuracy of an empty verdict list");
    std::size_t valid = 0;
    for (const auto& v : verdicts) valid += v.valid ? 1 : 0;
    return static_cast<double>(valid) / static_cast<double>(verdicts.size());
}

}  // namespace planbench
