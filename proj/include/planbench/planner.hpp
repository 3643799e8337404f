#pragma once

// Classical planner over the embedded STRIPS domains: A* with an admissible
// relaxation heuristic for optimal plans, greedy best-first search with the
// additive heuristic for satisficing plans.

#include <chrono>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "planbench/pddl.hpp"

namespace planbench {

enum class PlannerMode { optimal, satisficing };

enum class HeuristicId {
    blind,  // 0 everywhere
    hmax,   // max-cost relaxation, admissible
    lmcut,  // landmark-cut over h^max justification graphs, admissible
    hadd,   // additive relaxation, inadmissible
};

std::string to_string(HeuristicId id);
std::optional<HeuristicId> heuristic_from_name(std::string_view name);

struct PlannerConfig {
    PlannerMode mode = PlannerMode::optimal;
    std::uint64_t node_budget = 20'000'000;
    std::chrono::milliseconds time_budget{10'000};
    // Defaults to lmcut for optimal mode and hadd for satisficing mode.
    std::optional<HeuristicId> heuristic;
};

enum class PlanOutcome { plan, unsolvable, budget_exceeded };

std::string to_string(PlanOutcome outcome);

struct PlanStats {
    std::uint64_t expanded = 0;
    std::uint64_t generated = 0;
    double seconds = 0.0;
};

struct PlanResult {
    PlanOutcome outcome = PlanOutcome::unsolvable;
    std::optional<Plan> plan;  // present iff outcome == plan
    PlanStats stats;
};

// Thrown for goals the planner cannot handle (e.g. atoms over undeclared objects).
class PlannerError : public PddlError {
public:
    using PddlError::PddlError;
};

// Grounded STRIPS task restricted to relaxed-reachable atoms and operators.
// Static atoms (never changed by any operator) are compiled away.
class GroundTask {
public:
    struct Operator {
        GroundAction action;
        std::vector<int> pre;
        std::vector<int> add;
        std::vector<int> del;
    };

    GroundTask(const Domain& domain, const Problem& problem);

    std::size_t num_atoms() const { return atoms_.size(); }
    std::size_t num_words() const { return words_; }
    const std::vector<Operator>& operators() const { return ops_; }
    const std::vector<GroundAtom>& atoms() const { return atoms_; }
    const std::vector<int>& goal() const { return goal_; }
    // False when some goal atom is not even relaxed-reachable.
    bool goal_reachable() const { return goal_reachable_; }
    const std::vector<std::uint64_t>& initial_bits() const { return init_bits_; }

    // Encodes the fluent part of a state; static atoms are ignored.
    std::vector<std::uint64_t> encode(const State& state) const;
    State decode(const std::uint64_t* bits) const;

    bool applicable(const Operator& op, const std::uint64_t* bits) const;
    bool is_goal(const std::uint64_t* bits) const;
    void apply(const Operator& op, const std::uint64_t* in, std::uint64_t* out) const;

    // Pre-to-operator adjacency used by the relaxation heuristics.
    const std::vector<std::vector<int>>& consumers() const { return consumers_; }

private:
    std::vector<GroundAtom> atoms_;
    std::vector<Operator> ops_;
    std::vector<int> goal_;
    std::vector<std::vector<int>> consumers_;
    std::vector<std::uint64_t> init_bits_;
    std::size_t words_ = 1;
    bool goal_reachable_ = true;
};

inline constexpr int kDeadEnd = std::numeric_limits<int>::max();

// Heuristic evaluator bound to one GroundTask. Returns kDeadEnd for states
// from which the goal is relaxed-unreachable.
class Heuristic {
public:
    virtual ~Heuristic() = default;
    virtual int evaluate(const std::uint64_t* bits) = 0;
};

std::unique_ptr<Heuristic> make_heuristic(HeuristicId id, const GroundTask& task);

PlanResult solve(const Domain& domain, const Problem& problem, const PlannerConfig& config = {});

}  // namespace planbench
