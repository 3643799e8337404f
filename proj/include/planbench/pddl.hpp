#pragma once

// STRIPS subset of PDDL: data model, parser, renderer and transition
// semantics shared by the generator, planner, validator and search.

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace planbench {

struct GroundAtom {
    std::string predicate;
    std::vector<std::string> args;

    auto operator<=>(const GroundAtom&) const = default;
    bool operator==(const GroundAtom&) const = default;
};

struct Predicate {
    std::string name;
    std::size_t arity = 0;

    bool operator==(const Predicate&) const = default;
};

// An atom inside an action schema. Terms starting with '?' are parameters.
struct LiftedAtom {
    std::string predicate;
    std::vector<std::string> terms;

    bool operator==(const LiftedAtom&) const = default;
};

struct ActionSchema {
    std::string name;
    std::vector<std::string> params;
    std::vector<LiftedAtom> preconditions;
    std::vector<LiftedAtom> add_effects;
    std::vector<LiftedAtom> delete_effects;

    bool operator==(const ActionSchema&) const = default;
};

struct Domain {
    std::string name;
    std::vector<Predicate> predicates;
    std::vector<ActionSchema> actions;

    const ActionSchema* find_action(std::string_view name) const;
    const Predicate* find_predicate(std::string_view name) const;

    bool operator==(const Domain&) const = default;
};

struct Problem {
    std::string name;
    std::string domain_name;
    std::vector<std::string> objects;  // declaration order is preserved
    std::vector<GroundAtom> init;      // duplicate-free, source order
    std::vector<GroundAtom> goal;      // positive conjunction

    bool operator==(const Problem&) const = default;
};

struct GroundAction {
    std::string name;
    std::vector<std::string> args;

    auto operator<=>(const GroundAction&) const = default;
    bool operator==(const GroundAction&) const = default;
};

struct Plan {
    std::vector<GroundAction> steps;

    std::size_t size() const { return steps.size(); }
    bool empty() const { return steps.empty(); }
    bool operator==(const Plan&) const = default;
};

// Closed-world set of true atoms, iterated in lexicographic order.
class State {
public:
    State() = default;
    explicit State(std::set<GroundAtom> atoms) : atoms_(std::move(atoms)) {}
    template <typename It>
    State(It first, It last) : atoms_(first, last) {}

    bool contains(const GroundAtom& atom) const { return atoms_.count(atom) != 0; }
    void insert(GroundAtom atom) { atoms_.insert(std::move(atom)); }
    void erase(const GroundAtom& atom) { atoms_.erase(atom); }
    std::size_t size() const { return atoms_.size(); }
    auto begin() const { return atoms_.begin(); }
    auto end() const { return atoms_.end(); }
    const std::set<GroundAtom>& atoms() const { return atoms_; }

    auto operator<=>(const State&) const = default;
    bool operator==(const State&) const = default;

private:
    std::set<GroundAtom> atoms_;
};

class PddlError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Syntax or structural error in PDDL source, with a 1-based position.
class ParseError : public PddlError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// Valid PDDL that falls outside the supported STRIPS subset
// (negative/disjunctive goals, types, numeric fluents, ...).
class UnsupportedConstruct : public ParseError {
public:
    using ParseError::ParseError;
};

// A plan line that is not a parenthesised step.
class PlanSyntaxError : public PddlError {
public:
    PlanSyntaxError(const std::string& what, std::size_t line);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Unknown action name or wrong number of arguments.
class ActionError : public PddlError {
public:
    using PddlError::PddlError;
};

class DomainError : public PddlError {
public:
    using PddlError::PddlError;
};

std::string to_string(const GroundAtom& atom);
std::string to_string(const GroundAction& action);
std::string to_string(const State& state);

Problem parse_problem(std::string_view text);
Domain parse_domain(std::string_view text);

// Layout is chosen by the problem's domain name so that generated prompts
// match the published benchmark formatting; unknown domains get a plain layout.
std::string render_problem(const Problem& problem);
std::string render_domain(const Domain& domain);

// Parses "(action arg ...)" lines. Blank lines are skipped and everything
// after a "done." line is ignored.
Plan parse_plan(std::string_view text);
// One step per line, followed by "done." when `terminate` is set.
std::string render_plan(const Plan& plan, bool terminate = true);

// Checks arity and name invariants; throws DomainError.
void check_domain(const Domain& domain);
// Checks that every atom refers to declared objects; throws PddlError.
void check_problem(const Problem& problem);

State initial_state(const Problem& problem);

struct GroundedAction {
    std::vector<GroundAtom> preconditions;
    std::vector<GroundAtom> add_effects;
    std::vector<GroundAtom> delete_effects;
};

// Substitutes `action.args` into the schema of the same name.
// Throws ActionError on an unknown name or arity mismatch.
GroundedAction instantiate(const Domain& domain, const GroundAction& action);

struct Inapplicable {
    std::size_t precondition_index = 0;
    GroundAtom missing;
};

using StepResult = std::variant<State, Inapplicable>;

// STRIPS transition: (state \ del) u add when every precondition holds,
// otherwise the first missing precondition.
StepResult step(const Domain& domain, const State& state, const GroundAction& action);

bool holds(const State& state, std::span<const GroundAtom> goal);

}  // namespace planbench
