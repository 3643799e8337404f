#include "planbench/search.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "planbench/planner.hpp"
#include "planbench/prompt_assets.hpp"
#include "planbench/validator.hpp"

namespace planbench {

using nlohmann::json;

void SearchConfig::check() const {
    if (max_depth < 0) throw std::invalid_argument("max_depth must be non-negative");
    if (branching < 1) throw std::invalid_argument("branching must be positive");
    if (simulations < 1) throw std::invalid_argument("simulations must be positive");
    if (samples < 1) throw std::invalid_argument("samples must be positive");
    if (policy_retries < 0) throw std::invalid_argument("policy_retries must be non-negative");
    for (double w : {weights.action, weights.state, weights.uct, weights.lambda, temperature})
        if (!std::isfinite(w)) throw std::invalid_argument("search weights must be finite");
}

json to_json(const SearchConfig& c) {
    return json{{"max_depth", c.max_depth},
                {"branching", c.branching},
                {"simulations", c.simulations},
                {"temperature", c.temperature},
                {"samples", c.samples},
                {"weights",
                 {{"action", c.weights.action},
                  {"state", c.weights.state},
                  {"uct", c.weights.uct},
                  {"lambda", c.weights.lambda}}},
                {"predict_states", c.predict_states},
                {"policy_retries", c.policy_retries}};
}

SearchConfig search_config_from_json(const json& j) {
    SearchConfig c;
    c.max_depth = j.value("max_depth", c.max_depth);
    c.branching = j.value("branching", c.branching);
    c.simulations = j.value("simulations", c.simulations);
    c.temperature = j.value("temperature", c.temperature);
    c.samples = j.value("samples", c.samples);
    if (j.contains("weights")) {
        const json& w = j["weights"];
        c.weights.action = w.value("action", c.weights.action);
        c.weights.state = w.value("state", c.weights.state);
        c.weights.uct = w.value("uct", c.weights.uct);
        c.weights.lambda = w.value("lambda", c.weights.lambda);
    }
    c.predict_states = j.value("predict_states", c.predict_states);
    c.policy_retries = j.value("policy_retries", c.policy_retries);
    c.check();
    return c;
}

namespace {

std::string join_lines(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) out += p + "\n";
    return out;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

bool mentions_done(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower.find("done.") != std::string::npos;
}

}  // namespace

Transition TaskAdapter::transition(const SearchNode&, const std::string&) const {
    throw std::logic_error("task has no exact transition");
}

// ---------------------------------------------------------------- adapters

PddlTask::PddlTask(const Domain& domain, Problem problem) : domain_(domain), problem_(std::move(problem)) {
    check_problem(problem_);
}

std::string PddlTask::task_text() const { return render_problem(problem_); }

std::string PddlTask::initial_state_text() const { return to_string(initial_state(problem_)); }

std::optional<State> PddlTask::initial_world() const { return initial_state(problem_); }

Transition PddlTask::transition(const SearchNode& parent, const std::string& action) const {
    Transition t;
    t.dead = true;
    if (!parent.world) return t;
    Plan parsed;
    try {
        parsed = parse_plan(action);
    } catch (const PddlError&) {
        return t;
    }
    if (parsed.size() != 1) return t;
    try {
        auto next = step(domain_, *parent.world, parsed.steps[0]);
        if (auto* s = std::get_if<State>(&next)) {
            t.dead = false;
            t.state_text = to_string(*s);
            t.world = std::move(*s);
        }
    } catch (const ActionError&) {
    }
    return t;
}

bool PddlTask::is_terminal(const SearchNode& node) const {
    return node.dead || (node.world && holds(*node.world, problem_.goal));
}

double PddlTask::reward(const SearchNode& node) const {
    if (node.dead) return 0.0;
    return validate_text(domain_, problem_, join_lines(node.prefix)).valid ? 1.0 : 0.0;
}

std::string CalendarTaskAdapter::task_text() const { return calendar_to_nl(task_); }

bool CalendarTaskAdapter::is_terminal(const SearchNode& node) const {
    if (node.prefix.empty()) return false;
    return extract_slot(node.action).has_value() || mentions_done(node.action);
}

double CalendarTaskAdapter::reward(const SearchNode& node) const {
    return verify_calendar(task_, join_lines(node.prefix)) ? 1.0 : 0.0;
}

std::string TripTaskAdapter::task_text() const { return trip_to_nl(task_); }

bool TripTaskAdapter::is_terminal(const SearchNode& node) const {
    if (node.prefix.empty()) return false;
    const std::string text = join_lines(node.prefix);
    if (mentions_done(node.action)) return true;
    const auto itinerary = extract_itinerary(text);
    return itinerary && !itinerary->empty() && itinerary->back().last >= task_.total_days;
}

double TripTaskAdapter::reward(const SearchNode& node) const {
    return verify_trip(task_, join_lines(node.prefix)) ? 1.0 : 0.0;
}

// ---------------------------------------------------------------- selection

double uct_score(double q, std::uint64_t n, std::uint64_t parent_n, const SearchConfig& config) {
    const double explore = std::sqrt(std::log(static_cast<double>(parent_n)) / static_cast<double>(n));
    return config.weights.uct * q + config.weights.lambda * explore;
}

std::size_t uct_select(const SearchTree& tree, int parent, const SearchConfig& config) {
    const SearchNode& p = tree.nodes.at(static_cast<std::size_t>(parent));
    if (p.children.empty()) throw std::invalid_argument("uct_select: node has no children");
    for (std::size_t i = 0; i < p.children.size(); ++i)
        if (tree.nodes[static_cast<std::size_t>(p.children[i])].n == 0) return i;
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.children.size(); ++i) {
        const SearchNode& c = tree.nodes[static_cast<std::size_t>(p.children[i])];
        const double s = uct_score(c.q, c.n, p.n, config);
        if (s > best_score) {
            best_score = s;
            best = i;
        }
    }
    return best;
}

// ---------------------------------------------------------------- engine

namespace {

struct Candidate {
    std::vector<std::string> actions;
    double reward = 0.0;
    double value = 0.0;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.reward != b.reward) return a.reward > b.reward;
    return a.value > b.value;
}

class Engine {
public:
    Engine(TaskAdapter& task, Policy& policy, const SearchConfig& config, SearchResult& result)
        : task_(task), policy_(policy), config_(config), result_(result) {
        config.check();
    }

    int make_root() {
        SearchNode root;
        root.world = task_.initial_world();
        root.state_text = task_.initial_state_text();
        root.terminal = task_.is_terminal(root);
        root.reward = root.terminal ? task_.reward(root) : 0.0;
        return add(std::move(root));
    }

    SearchNode child_of(const SearchNode& parent, const Proposal& p) {
        SearchNode c;
        c.prefix = parent.prefix;
        c.prefix.push_back(p.action);
        c.action = p.action;
        c.action_logprob = std::min(0.0, p.logprob);
        if (task_.has_transition()) {
            Transition t = task_.transition(parent, p.action);
            c.dead = t.dead;
            c.world = std::move(t.world);
            c.state_text = std::move(t.state_text);
        }
        c.terminal = task_.is_terminal(c);
        // Terminal nodes are never expanded, so their state is not needed.
        if (!c.terminal && (!task_.has_transition() || config_.predict_states)) {
            ++result_.stats.policy_calls;
            Prediction pr = policy_.predict_state(parent, p.action);
            c.state_text = std::move(pr.state);
            c.state_logprob = std::min(0.0, pr.logprob);
        }
        c.score = parent.score + config_.weights.action * c.action_logprob + config_.weights.state * c.state_logprob;
        c.reward = c.terminal ? task_.reward(c) : 0.0;
        return c;
    }

    std::vector<Proposal> propose(const SearchNode& node, std::size_t k) {
        ++result_.stats.policy_calls;
        auto props = policy_.propose(node, k);
        std::vector<Proposal> unique;
        std::set<std::string> seen;
        for (auto& p : props) {
            if (unique.size() == k) break;
            if (p.action.empty() || !seen.insert(p.action).second) continue;
            unique.push_back(std::move(p));
        }
        return unique;
    }

    // Creates up to `branching` children; marks the node expanded. With
    // prune_cycles, children whose exact world state repeats an ancestor's are dropped.
    void expand(int idx, bool prune_cycles = false) {
        ++result_.stats.expansions;
        const auto props = propose(node(idx), static_cast<std::size_t>(config_.branching));
        tree().nodes[static_cast<std::size_t>(idx)].expanded = true;
        std::set<State> ancestors;
        for (int a = idx; prune_cycles && a >= 0; a = node(a).parent)
            if (node(a).world) ancestors.insert(*node(a).world);
        for (const auto& p : props) {
            SearchNode c = child_of(node(idx), p);
            if (c.world && ancestors.count(*c.world)) continue;
            c.parent = idx;
            const int ci = add(std::move(c));
            tree().nodes[static_cast<std::size_t>(idx)].children.push_back(ci);
        }
    }

    bool can_expand(const SearchNode& n) const {
        return !n.terminal && !n.expanded && static_cast<int>(n.depth()) < config_.max_depth;
    }

    void offer(Candidate c) {
        ++result_.stats.terminals_found;
        if (!best_ || better(c, *best_)) best_ = std::move(c);
    }

    const SearchNode& node(int idx) { return tree().nodes[static_cast<std::size_t>(idx)]; }
    SearchTree& tree() { return result_.tree; }
    const std::optional<Candidate>& best() const { return best_; }

    void finish_with_best() {
        result_.actions = best_->actions;
        result_.reward = best_->reward;
        result_.value = best_->value;
        result_.partial = false;
    }

    void finish_partial(int idx) {
        const SearchNode& n = node(idx);
        result_.actions = n.prefix;
        result_.reward = n.dead ? 0.0 : task_.reward(n);
        result_.value = 0.0;
        result_.partial = true;
    }

    Policy& policy() { return policy_; }
    TaskAdapter& task() { return task_; }

private:
    int add(SearchNode n) {
        tree().nodes.push_back(std::move(n));
        ++result_.stats.nodes;
        return static_cast<int>(tree().nodes.size()) - 1;
    }

    TaskAdapter& task_;
    Policy& policy_;
    const SearchConfig& config_;
    SearchResult& result_;
    std::optional<Candidate> best_;
};

double discounted(double reward, const std::vector<double>& action_lp, const std::vector<double>& state_lp,
                  const SearchConfig& config) {
    if (reward == 0.0 || action_lp.empty()) return reward;
    double a = 0.0, s = 0.0;
    for (double x : action_lp) a += x;
    for (double x : state_lp) s += x;
    const double n = static_cast<double>(action_lp.size());
    return reward * std::exp(config.weights.action * a / n + config.weights.state * s / n);
}

}  // namespace

SearchResult mcts_search(TaskAdapter& task, Policy& policy, const SearchConfig& config) {
    SearchResult result;
    Engine engine(task, policy, config, result);
    const int root = engine.make_root();
    if (engine.node(root).terminal) {
        engine.offer({{}, engine.node(root).reward, engine.node(root).reward});
        engine.finish_with_best();
        return result;
    }

    for (int sim = 0; sim < config.simulations; ++sim) {
        ++result.stats.simulations;
        std::vector<int> path{root};
        int cur = root;
        while (engine.node(cur).expanded && !engine.node(cur).children.empty() && !engine.node(cur).terminal)
            cur = engine.node(cur).children[uct_select(result.tree, cur, config)], path.push_back(cur);
        if (engine.can_expand(engine.node(cur))) {
            engine.expand(cur, true);
            if (!engine.node(cur).children.empty()) {
                cur = engine.node(cur).children[uct_select(result.tree, cur, config)];
                path.push_back(cur);
            }
        }

        std::vector<double> action_lp, state_lp;
        for (std::size_t i = 1; i < path.size(); ++i) {
            action_lp.push_back(engine.node(path[i]).action_logprob);
            state_lp.push_back(engine.node(path[i]).state_logprob);
        }

        // Rollout: follow the policy's first proposal from the leaf. With exact
        // world states, a proposal that revisits a state on the path is replaced
        // by the next-ranked one; the rollout stops if all of them do.
        SearchNode leaf = engine.node(cur);
        double reward = 0.0;
        if (leaf.terminal) {
            reward = leaf.reward;
        } else {
            std::set<State> visited;
            for (int idx : path)
                if (engine.node(idx).world) visited.insert(*engine.node(idx).world);
            auto fresh = [&](const SearchNode& n) { return !n.world || !visited.count(*n.world); };
            while (!leaf.terminal && static_cast<int>(leaf.depth()) < config.max_depth) {
                auto props = engine.propose(leaf, 1);
                if (props.empty()) break;
                std::optional<SearchNode> next = engine.child_of(leaf, props.front());
                if (!fresh(*next)) {
                    next.reset();
                    props = engine.propose(leaf, static_cast<std::size_t>(config.branching));
                    for (std::size_t i = 1; i < props.size() && !next; ++i) {
                        SearchNode c = engine.child_of(leaf, props[i]);
                        if (fresh(c)) next = std::move(c);
                    }
                    if (!next) break;
                }
                leaf = std::move(*next);
                if (leaf.world) visited.insert(*leaf.world);
                action_lp.push_back(leaf.action_logprob);
                state_lp.push_back(leaf.state_logprob);
            }
            reward = leaf.terminal ? leaf.reward : 0.0;
        }
        const double g = discounted(reward, action_lp, state_lp, config);
        if (leaf.terminal) engine.offer({leaf.prefix, reward, g});

        for (int idx : path) {
            SearchNode& n = result.tree.nodes[static_cast<std::size_t>(idx)];
            ++n.n;
            n.q += (g - n.q) / static_cast<double>(n.n);
        }
    }

    if (engine.best()) {
        engine.finish_with_best();
    } else {
        // Most valuable visited path.
        int cur = root;
        while (!engine.node(cur).children.empty()) {
            int next = -1;
            for (int c : engine.node(cur).children) {
                const SearchNode& cn = engine.node(c);
                if (cn.n == 0) continue;
                if (next < 0 || cn.q > engine.node(next).q) next = c;
            }
            if (next < 0) break;
            cur = next;
        }
        engine.finish_partial(cur);
    }
    return result;
}

SearchResult tot_search(TaskAdapter& task, Policy& policy, const SearchConfig& config) {
    SearchResult result;
    Engine engine(task, policy, config, result);
    const int root = engine.make_root();

    struct Entry {
        double score;
        int idx;
        bool operator<(const Entry& o) const {
            if (score != o.score) return score < o.score;
            return idx > o.idx;  // earlier nodes first on ties
        }
    };
    std::priority_queue<Entry> frontier;
    frontier.push({0.0, root});
    const std::uint64_t budget = static_cast<std::uint64_t>(config.simulations) * static_cast<std::uint64_t>(config.max_depth);
    int deepest = root;

    while (!frontier.empty()) {
        const Entry e = frontier.top();
        frontier.pop();
        const SearchNode& n = engine.node(e.idx);
        const SearchNode& d = engine.node(deepest);
        if (n.depth() > d.depth() || (n.depth() == d.depth() && n.score > d.score)) deepest = e.idx;
        if (n.terminal) {
            engine.offer({n.prefix, n.reward, n.score});
            if (n.reward >= 1.0) break;
            continue;
        }
        if (!engine.can_expand(n) || result.stats.expansions >= budget) continue;
        engine.expand(e.idx);
        for (int c : engine.node(e.idx).children) frontier.push({engine.node(c).score, c});
    }

    if (engine.best())
        engine.finish_with_best();
    else
        engine.finish_partial(deepest);
    return result;
}

// ---------------------------------------------------------------- oracle

namespace {

class OraclePolicy : public Policy {
public:
    OraclePolicy(const Domain& domain, const Problem& problem)
        : domain_(domain), problem_(problem), task_(domain, problem),
          heuristic_(make_heuristic(HeuristicId::hadd, task_)) {}

    std::vector<Proposal> propose(const SearchNode& node, std::size_t k) override {
        const State state = current(node);
        if (holds(state, problem_.goal)) return {};
        const auto bits = task_.encode(state);
        std::vector<std::uint64_t> next(bits.size());
        std::vector<std::pair<int, std::size_t>> ranked;
        const auto& ops = task_.operators();
        for (std::size_t i = 0; i < ops.size(); ++i) {
            if (!task_.applicable(ops[i], bits.data())) continue;
            task_.apply(ops[i], bits.data(), next.data());
            ranked.emplace_back(heuristic_->evaluate(next.data()), i);
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Proposal> out;
        for (std::size_t r = 0; r < ranked.size() && r < k; ++r)
            out.push_back({to_string(ops[ranked[r].second].action), -static_cast<double>(r + 1)});
        return out;
    }

    Prediction predict_state(const SearchNode& node, const std::string& action) override {
        const State state = current(node);
        const Plan p = parse_plan(action);
        if (p.size() != 1) throw PolicyError("oracle cannot predict the effect of '" + action + "'");
        auto next = step(domain_, state, p.steps[0]);
        if (auto* s = std::get_if<State>(&next)) return {to_string(*s), 0.0};
        throw PolicyError("oracle asked to predict an inapplicable action " + action);
    }

private:
    State current(const SearchNode& node) const {
        if (node.world) return *node.world;
        State s = initial_state(problem_);
        for (const auto& line : node.prefix) {
            const Plan p = parse_plan(line);
            for (const auto& a : p.steps) {
                auto next = step(domain_, s, a);
                auto* ok = std::get_if<State>(&next);
                if (!ok) throw PolicyError("oracle replay hit inapplicable action " + to_string(a));
                s = std::move(*ok);
            }
        }
        return s;
    }

    const Domain& domain_;
    Problem problem_;
    GroundTask task_;
    std::unique_ptr<Heuristic> heuristic_;
};

}  // namespace

std::unique_ptr<Policy> oracle_policy(const Domain& domain, const Problem& problem) {
    return std::make_unique<OraclePolicy>(domain, problem);
}

// ---------------------------------------------------------------- model

const std::string& action_prompt_template() {
    static const std::string s(assets::kActionPrompt);
    return s;
}

const std::string& state_prompt_template() {
    static const std::string s(assets::kStatePrompt);
    return s;
}

namespace {

std::string fill(const std::string& tmpl, const std::string& state) {
    std::string out = tmpl;
    const auto pos = out.find("{state}");
    if (pos != std::string::npos) out.replace(pos, 7, state);
    return out;
}

std::string first_line(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        const std::string line = trim(text.substr(start, end == std::string_view::npos ? text.npos : end - start));
        if (!line.empty()) return line;
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return {};
}

}  // namespace

ModelPolicy::ModelPolicy(Endpoint& endpoint, std::string task_text, const SearchConfig& config)
    : endpoint_(endpoint), task_text_(std::move(task_text)), config_(config) {}

std::string ModelPolicy::action_prompt(const SearchNode& node) const {
    std::string out = task_text_;
    if (!out.empty() && out.back() != '\n') out += "\n";
    for (const auto& a : node.prefix) out += "[ACTION] " + a + "\n";
    return out + fill(action_prompt_template(), node.state_text);
}

std::string ModelPolicy::state_prompt(const SearchNode& node, const std::string& action) const {
    std::string out = task_text_;
    if (!out.empty() && out.back() != '\n') out += "\n";
    out += "[ACTION] " + action + "\n";
    return out + fill(state_prompt_template(), node.state_text);
}

Completion ModelPolicy::call(const std::string& prompt, const GenerationParams& params) {
    for (int attempt = 0;; ++attempt) {
        try {
            return endpoint_.complete(prompt, params, RequestContext{});
        } catch (const TransportError& e) {
            if (attempt >= config_.policy_retries)
                throw PolicyError(std::string("policy endpoint failed after retries: ") + e.what());
        }
    }
}

std::vector<Proposal> ModelPolicy::propose(const SearchNode& node, std::size_t k) {
    const std::string prompt = action_prompt(node);
    GenerationParams params;
    params.temperature = config_.temperature;
    params.max_tokens = 256;
    params.stop = {"[END"};
    const std::size_t calls = k * static_cast<std::size_t>(config_.samples);
    // Sequential calls keep replayed and seeded endpoints deterministic.
    std::vector<Proposal> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < calls; ++i) {
        const Completion c = call(prompt, params);
        std::string action = first_line(c.text);
        if (action.empty() || !seen.insert(action).second) continue;
        out.push_back({std::move(action), std::min(0.0, c.logprob.value_or(0.0))});
    }
    std::stable_sort(out.begin(), out.end(), [](const Proposal& a, const Proposal& b) { return a.logprob > b.logprob; });
    if (out.size() > k) out.resize(k);
    return out;
}

Prediction ModelPolicy::predict_state(const SearchNode& node, const std::string& action) {
    GenerationParams params;
    params.temperature = config_.temperature;
    params.max_tokens = 1024;
    params.stop = {"[END STATE]"};
    const Completion c = call(state_prompt(node, action), params);
    return {trim(c.text), std::min(0.0, c.logprob.value_or(0.0))};
}

// ---------------------------------------------------------------- traces

namespace {

json node_json(const SearchTree& tree, int idx) {
    const SearchNode& n = tree.nodes[static_cast<std::size_t>(idx)];
    json j{{"action", n.action},
           {"action_logprob", n.action_logprob},
           {"state", n.state_text},
           {"state_logprob", n.state_logprob},
           {"q", n.q},
           {"n", n.n},
           {"score", n.score},
           {"terminal", n.terminal},
           {"dead", n.dead},
           {"reward", n.reward}};
    json children = json::array();
    for (int c : n.children) children.push_back(node_json(tree, c));
    j["children"] = std::move(children);
    return j;
}

}  // namespace

json trace_to_json(const SearchTree& tree) {
    if (tree.nodes.empty()) return json::object();
    return node_json(tree, 0);
}

json to_json(const SearchResult& r) {
    return json{{"actions", r.actions},
                {"reward", r.reward},
                {"value", r.value},
                {"partial", r.partial},
                {"stats",
                 {{"simulations", r.stats.simulations},
                  {"expansions", r.stats.expansions},
                  {"nodes", r.stats.nodes},
                  {"policy_calls", r.stats.policy_calls},
                  {"terminals_found", r.stats.terminals_found}}},
                {"tree", trace_to_json(r.tree)}};
}

}  // namespace planbench
