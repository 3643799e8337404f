#pragma once

// Slot-filling translation between PDDL and natural language, and the
// pattern-matching inverse for plans.

#include <string>
#include <string_view>
#include <vector>

#include "planbench/domains.hpp"
#include "planbench/pddl.hpp"

namespace planbench {

// An atom or action without a sentence template.
class VocabularyError : public PddlError {
public:
    using PddlError::PddlError;
};

// Sentence for one atom, e.g. (on b3 b1) -> "b3 is on b1."
std::string atom_to_nl(DomainId domain, const GroundAtom& atom);
// Sentence for one step, e.g. (unstack A B) -> "Unstack A from B."
std::string action_to_nl(DomainId domain, const GroundAction& action);

// "The initial state:" block followed by "The goal is:" line. Consecutive
// initial atoms about the same object share a line.
std::string problem_to_nl(const Problem& problem);

// One sentence per line, no terminator.
std::string plan_to_nl(DomainId domain, const Plan& plan);

struct NlDiagnostic {
    std::size_t sentence = 0;  // 0-based index among the sentences considered
    std::string text;
    std::string message;
};

struct NlPlanResult {
    Plan plan;  // steps for every sentence that matched
    std::vector<NlDiagnostic> errors;
    bool ok() const { return errors.empty(); }
};

enum class MatchMode {
    strict,    // exact template text, case-sensitive, terminal period required
    tolerant,  // case-insensitive, optional periods, list markers and markdown stripped
};

// Sentences after a "done" sentence are ignored.
NlPlanResult nl_plan_to_pddl(std::string_view text, DomainId domain, MatchMode mode = MatchMode::tolerant);

}  // namespace planbench
