#pragma once

// MCTS and tree-of-thought search over planning tasks. A Policy proposes
// next actions and predicts world states; a TaskAdapter supplies the start
// node, the terminal test and the verifier-based reward.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "planbench/endpoints.hpp"
#include "planbench/natplan.hpp"
#include "planbench/pddl.hpp"

namespace planbench {

struct SearchWeights {
    double action = 1.5;  // action log-probabilities
    double state = 1.0;   // predicted-state log-probabilities
    double uct = 1.0;     // exploitation term
    double lambda = 1.0;  // exploration term
};

struct SearchConfig {
    int max_depth = 5;
    int branching = 3;
    int simulations = 3;
    double temperature = 1.0;
    int samples = 1;  // completions per policy call
    SearchWeights weights;
    // Ask the policy for state text even when the task has an exact simulator.
    bool predict_states = false;
    int policy_retries = 3;

    // Throws std::invalid_argument on non-finite weights or non-positive sizes.
    void check() const;
};

nlohmann::json to_json(const SearchConfig& config);
SearchConfig search_config_from_json(const nlohmann::json& j);

struct SearchNode {
    int parent = -1;
    std::vector<int> children;  // expansion order
    std::vector<std::string> prefix;  // actions from the root
    std::string action;               // incoming action, empty at the root
    double action_logprob = 0.0;
    double state_logprob = 0.0;
    std::string state_text;
    std::optional<State> world;  // exact state when the task has a simulator
    bool dead = false;           // incoming action was inapplicable
    bool terminal = false;
    bool expanded = false;
    double reward = 0.0;  // meaningful on terminal nodes
    double q = 0.0;
    std::uint64_t n = 0;
    double score = 0.0;  // cumulative weighted log-probability, used by ToT

    std::size_t depth() const { return prefix.size(); }
};

struct SearchTree {
    std::vector<SearchNode> nodes;  // nodes[0] is the root
};

struct Proposal {
    std::string action;
    double logprob = 0.0;
};

struct Prediction {
    std::string state;
    double logprob = 0.0;
};

class PolicyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Policy {
public:
    virtual ~Policy() = default;
    // Up to k candidates, best first. Empty means the policy has nothing to offer.
    virtual std::vector<Proposal> propose(const SearchNode& node, std::size_t k) = 0;
    virtual Prediction predict_state(const SearchNode& node, const std::string& action) = 0;
};

struct Transition {
    bool dead = false;
    std::optional<State> world;
    std::string state_text;
};

class TaskAdapter {
public:
    virtual ~TaskAdapter() = default;
    virtual std::string task_text() const = 0;
    virtual std::string initial_state_text() const = 0;
    virtual std::optional<State> initial_world() const { return std::nullopt; }
    virtual bool has_transition() const { return false; }
    virtual Transition transition(const SearchNode& parent, const std::string& action) const;
    virtual bool is_terminal(const SearchNode& node) const = 0;
    // 1 when the verifier accepts the node's action sequence, else 0.
    virtual double reward(const SearchNode& node) const = 0;
};

class PddlTask : public TaskAdapter {
public:
    PddlTask(const Domain& domain, Problem problem);
    std::string task_text() const override;
    std::string initial_state_text() const override;
    std::optional<State> initial_world() const override;
    bool has_transition() const override { return true; }
    Transition transition(const SearchNode& parent, const std::string& action) const override;
    bool is_terminal(const SearchNode& node) const override;
    double reward(const SearchNode& node) const override;

private:
    const Domain& domain_;
    Problem problem_;
};

// One action is one answer attempt; the node is terminal once a slot can be read.
class CalendarTaskAdapter : public TaskAdapter {
public:
    explicit CalendarTaskAdapter(CalendarTask task) : task_(std::move(task)) {}
    std::string task_text() const override;
    std::string initial_state_text() const override { return ""; }
    bool is_terminal(const SearchNode& node) const override;
    double reward(const SearchNode& node) const override;

private:
    CalendarTask task_;
};

// Actions are itinerary lines; terminal once the days are covered or "done." appears.
class TripTaskAdapter : public TaskAdapter {
public:
    explicit TripTaskAdapter(TripTask task) : task_(std::move(task)) {}
    std::string task_text() const override;
    std::string initial_state_text() const override { return ""; }
    bool is_terminal(const SearchNode& node) const override;
    double reward(const SearchNode& node) const override;

private:
    TripTask task_;
};

struct SearchStats {
    std::uint64_t simulations = 0;
    std::uint64_t expansions = 0;
    std::uint64_t nodes = 0;
    std::uint64_t policy_calls = 0;
    std::uint64_t terminals_found = 0;
};

struct SearchResult {
    std::vector<std::string> actions;
    double reward = 0.0;
    double value = 0.0;
    bool partial = false;  // no terminal node was reached
    SearchStats stats;
    SearchTree tree;

    bool solved() const { return reward >= 1.0; }
};

double uct_score(double q, std::uint64_t n, std::uint64_t parent_n, const SearchConfig& config);
// Unvisited children first in expansion order, then argmax of uct_score;
// ties go to the lower index. Throws std::invalid_argument without children.
std::size_t uct_select(const SearchTree& tree, int parent, const SearchConfig& config);

SearchResult mcts_search(TaskAdapter& task, Policy& policy, const SearchConfig& config);
SearchResult tot_search(TaskAdapter& task, Policy& policy, const SearchConfig& config);

// Applicable actions ranked by the additive heuristic of their successor
// (log-probability -(rank+1)); exact successor text with log-probability 0.
std::unique_ptr<Policy> oracle_policy(const Domain& domain, const Problem& problem);

// Prompts an endpoint with the action and state templates.
class ModelPolicy : public Policy {
public:
    ModelPolicy(Endpoint& endpoint, std::string task_text, const SearchConfig& config);
    std::vector<Proposal> propose(const SearchNode& node, std::size_t k) override;
    Prediction predict_state(const SearchNode& node, const std::string& action) override;

    std::string action_prompt(const SearchNode& node) const;
    std::string state_prompt(const SearchNode& node, const std::string& action) const;

private:
    Completion call(const std::string& prompt, const GenerationParams& params);

    Endpoint& endpoint_;
    std::string task_text_;
    SearchConfig config_;
};

const std::string& action_prompt_template();
const std::string& state_prompt_template();

nlohmann::json trace_to_json(const SearchTree& tree);
nlohmann::json to_json(const SearchResult& result);

}  // namespace planbench
