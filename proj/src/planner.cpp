#include "planbench/planner.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace planbench {

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

bool is_variable(const std::string& t) { return !t.empty() && t.front() == '?'; }

// Key layout for interned atoms: [predicate id, arg ids...].
using AtomKey = std::vector<int>;

class Grounder {
public:
    Grounder(const Domain& domain, const Problem& problem) : domain_(domain) {
        for (const auto& p : domain.predicates) pred_id(p.name);
        for (const auto& o : problem.objects) obj_id(o);
        for (const auto& a : domain.actions)
            for (const auto& e : a.add_effects) dynamic_.insert(pred_id(e.predicate));
        for (const auto& a : domain.actions)
            for (const auto& e : a.delete_effects) dynamic_.insert(pred_id(e.predicate));
        for (const auto& atom : problem.init) add_reached(key_of(atom));
    }

    void run() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t s = 0; s < domain_.actions.size(); ++s) {
                const ActionSchema& schema = domain_.actions[s];
                std::vector<int> binding(schema.params.size(), -1);
                const auto order = precondition_order(schema);
                enumerate(schema, order, 0, binding, changed);
            }
        }
    }

    AtomKey key_of(const GroundAtom& atom) {
        AtomKey key{pred_id(atom.predicate)};
        for (const auto& a : atom.args) key.push_back(obj_id(a));
        return key;
    }

    bool is_dynamic(int pred) const { return dynamic_.count(pred) != 0; }
    bool reached(const AtomKey& key) const { return reached_set_.count(key) != 0; }

    const std::vector<AtomKey>& reached_atoms() const { return reached_order_; }
    const std::vector<std::pair<std::size_t, std::vector<int>>>& instances() const { return instances_; }

    GroundAtom atom_of(const AtomKey& key) const {
        GroundAtom atom{pred_names_[static_cast<std::size_t>(key[0])], {}};
        for (std::size_t i = 1; i < key.size(); ++i) atom.args.push_back(obj_names_[static_cast<std::size_t>(key[i])]);
        return atom;
    }

    const std::string& object_name(int id) const { return obj_names_[static_cast<std::size_t>(id)]; }

    AtomKey bind(const LiftedAtom& lifted, const ActionSchema& schema, const std::vector<int>& binding) {
        AtomKey key{pred_id(lifted.predicate)};
        for (const auto& t : lifted.terms) {
            if (is_variable(t)) {
                auto it = std::find(schema.params.begin(), schema.params.end(), t);
                key.push_back(binding[static_cast<std::size_t>(it - schema.params.begin())]);
            } else {
                key.push_back(obj_id(t));
            }
        }
        return key;
    }

private:
    int pred_id(const std::string& name) {
        auto [it, inserted] = pred_ids_.emplace(name, static_cast<int>(pred_names_.size()));
        if (inserted) {
            pred_names_.push_back(name);
            by_pred_.emplace_back();
        }
        return it->second;
    }

    int obj_id(const std::string& name) {
        auto [it, inserted] = obj_ids_.emplace(name, static_cast<int>(obj_names_.size()));
        if (inserted) obj_names_.push_back(name);
        return it->second;
    }

    bool add_reached(const AtomKey& key) {
        if (!reached_set_.insert(key).second) return false;
        reached_order_.push_back(key);
        by_pred_[static_cast<std::size_t>(key[0])].push_back(key);
        return true;
    }

    // Greedy join order: prefer preconditions whose variables are already bound.
    std::vector<std::size_t> precondition_order(const ActionSchema& schema) const {
        std::vector<std::size_t> order;
        std::vector<bool> used(schema.preconditions.size(), false);
        std::set<std::string> bound;
        for (std::size_t k = 0; k < schema.preconditions.size(); ++k) {
            std::size_t best = 0;
            long best_score = std::numeric_limits<long>::min();
            for (std::size_t i = 0; i < schema.preconditions.size(); ++i) {
                if (used[i]) continue;
                const auto& terms = schema.preconditions[i].terms;
                long bound_count = 0;
                long free_count = 0;
                for (const auto& t : terms) {
                    if (!is_variable(t) || bound.count(t))
                        ++bound_count;
                    else
                        ++free_count;
                }
                long score = free_count == 0 ? 1000 : bound_count * 10 + (terms.size() > 1 ? 5 : 0) - free_count;
                if (score > best_score) {
                    best_score = score;
                    best = i;
                }
            }
            used[best] = true;
            order.push_back(best);
            for (const auto& t : schema.preconditions[best].terms)
                if (is_variable(t)) bound.insert(t);
        }
        return order;
    }

    void enumerate(const ActionSchema& schema, const std::vector<std::size_t>& order, std::size_t depth,
                   std::vector<int>& binding, bool& changed) {
        if (depth == order.size()) {
            for (std::size_t i = 0; i < binding.size(); ++i) {
                if (binding[i] >= 0) continue;
                for (int o = 0; o < static_cast<int>(obj_names_.size()); ++o) {
                    binding[i] = o;
                    enumerate(schema, order, depth, binding, changed);
                }
                binding[i] = -1;
                return;
            }
            emit(schema, binding, changed);
            return;
        }
        const LiftedAtom& pre = schema.preconditions[order[depth]];
        const int pred = pred_id(pre.predicate);
        // Copy: emitting may grow the candidate list during iteration.
        const std::vector<AtomKey> candidates = by_pred_[static_cast<std::size_t>(pred)];
        for (const AtomKey& cand : candidates) {
            if (cand.size() != pre.terms.size() + 1) continue;
            std::vector<std::size_t> newly_bound;
            bool ok = true;
            for (std::size_t t = 0; t < pre.terms.size() && ok; ++t) {
                const std::string& term = pre.terms[t];
                const int value = cand[t + 1];
                if (!is_variable(term)) {
                    ok = obj_ids_.count(term) && obj_ids_.at(term) == value;
                    continue;
                }
                auto idx = static_cast<std::size_t>(
                    std::find(schema.params.begin(), schema.params.end(), term) - schema.params.begin());
                if (binding[idx] < 0) {
                    binding[idx] = value;
                    newly_bound.push_back(idx);
                } else if (binding[idx] != value) {
                    ok = false;
                }
            }
            if (ok) enumerate(schema, order, depth + 1, binding, changed);
            for (std::size_t idx : newly_bound) binding[idx] = -1;
        }
    }

    void emit(const ActionSchema& schema, const std::vector<int>& binding, bool& changed) {
        const std::size_t schema_index = static_cast<std::size_t>(&schema - domain_.actions.data());
        std::vector<int> key{static_cast<int>(schema_index)};
        key.insert(key.end(), binding.begin(), binding.end());
        if (!seen_instances_.insert(key).second) return;
        instances_.emplace_back(schema_index, binding);
        for (const auto& e : schema.add_effects)
            if (add_reached(bind(e, schema, binding))) changed = true;
    }

    const Domain& domain_;
    std::unordered_map<std::string, int> pred_ids_;
    std::vector<std::string> pred_names_;
    std::unordered_map<std::string, int> obj_ids_;
    std::vector<std::string> obj_names_;
    std::unordered_set<int> dynamic_;
    std::unordered_set<AtomKey, VecHash> reached_set_;
    std::vector<AtomKey> reached_order_;
    std::vector<std::vector<AtomKey>> by_pred_;
    std::unordered_set<std::vector<int>, VecHash> seen_instances_;
    std::vector<std::pair<std::size_t, std::vector<int>>> instances_;
};

inline bool test_bit(const std::uint64_t* bits, int i) { return (bits[i >> 6] >> (i & 63)) & 1u; }
inline void set_bit(std::uint64_t* bits, int i) { bits[i >> 6] |= std::uint64_t{1} << (i & 63); }
inline void clear_bit(std::uint64_t* bits, int i) { bits[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

}  // namespace

GroundTask::GroundTask(const Domain& domain, const Problem& problem) {
    check_problem(problem);
    Grounder grounder(domain, problem);
    grounder.run();

    std::unordered_map<AtomKey, int, VecHash> index;
    for (const AtomKey& key : grounder.reached_atoms()) {
        if (!grounder.is_dynamic(key[0])) continue;
        index.emplace(key, static_cast<int>(atoms_.size()));
        atoms_.push_back(grounder.atom_of(key));
    }
    words_ = std::max<std::size_t>(1, (atoms_.size() + 63) / 64);

    for (const auto& [schema_index, binding] : grounder.instances()) {
        const ActionSchema& schema = domain.actions[schema_index];
        Operator op;
        op.action.name = schema.name;
        for (int b : binding) op.action.args.push_back(grounder.object_name(b));
        for (const auto& p : schema.preconditions) {
            AtomKey key = grounder.bind(p, schema, binding);
            auto it = index.find(key);
            if (it != index.end()) op.pre.push_back(it->second);
        }
        for (const auto& e : schema.add_effects) op.add.push_back(index.at(grounder.bind(e, schema, binding)));
        for (const auto& e : schema.delete_effects) {
            auto it = index.find(grounder.bind(e, schema, binding));
            if (it != index.end()) op.del.push_back(it->second);
        }
        std::sort(op.pre.begin(), op.pre.end());
        op.pre.erase(std::unique(op.pre.begin(), op.pre.end()), op.pre.end());
        ops_.push_back(std::move(op));
    }

    consumers_.assign(atoms_.size(), {});
    for (std::size_t o = 0; o < ops_.size(); ++o)
        for (int p : ops_[o].pre) consumers_[static_cast<std::size_t>(p)].push_back(static_cast<int>(o));

    for (const auto& g : problem.goal) {
        AtomKey key = grounder.key_of(g);
        if (!grounder.is_dynamic(key[0])) {
            if (!grounder.reached(key)) goal_reachable_ = false;
            continue;
        }
        auto it = index.find(key);
        if (it == index.end()) {
            goal_reachable_ = false;
            continue;
        }
        goal_.push_back(it->second);
    }

    init_bits_.assign(words_, 0);
    for (const auto& atom : problem.init) {
        auto it = index.find(grounder.key_of(atom));
        if (it != index.end()) set_bit(init_bits_.data(), it->second);
    }
}

std::vector<std::uint64_t> GroundTask::encode(const State& state) const {
    std::vector<std::uint64_t> bits(words_, 0);
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (state.contains(atoms_[i])) set_bit(bits.data(), static_cast<int>(i));
    return bits;
}

State GroundTask::decode(const std::uint64_t* bits) const {
    State s;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (test_bit(bits, static_cast<int>(i))) s.insert(atoms_[i]);
    return s;
}

bool GroundTask::applicable(const Operator& op, const std::uint64_t* bits) const {
    for (int p : op.pre)
        if (!test_bit(bits, p)) return false;
    return true;
}

bool GroundTask::is_goal(const std::uint64_t* bits) const {
    if (!goal_reachable_) return false;
    for (int g : goal_)
        if (!test_bit(bits, g)) return false;
    return true;
}

void GroundTask::apply(const Operator& op, const std::uint64_t* in, std::uint64_t* out) const {
    std::copy(in, in + words_, out);
    for (int d : op.del) clear_bit(out, d);
    for (int a : op.add) set_bit(out, a);
}

// ---------------------------------------------------------------------------
// Heuristics

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Monotone bucket queue for small non-negative integer priorities.
class BucketQueue {
public:
    void clear() {
        for (auto& b : buckets_) b.clear();
        current_ = 0;
        size_ = 0;
    }
    void push(int priority, int item) {
        if (static_cast<std::size_t>(priority) >= buckets_.size()) buckets_.resize(static_cast<std::size_t>(priority) + 1);
        buckets_[static_cast<std::size_t>(priority)].push_back(item);
        ++size_;
    }
    bool empty() const { return size_ == 0; }
    std::pair<int, int> pop() {
        while (buckets_[current_].empty()) ++current_;
        int item = buckets_[current_].back();
        buckets_[current_].pop_back();
        --size_;
        return {static_cast<int>(current_), item};
    }

private:
    std::vector<std::vector<int>> buckets_;
    std::size_t current_ = 0;
    std::size_t size_ = 0;
};

class BlindHeuristic : public Heuristic {
public:
    explicit BlindHeuristic(const GroundTask& task) : task_(task) {}
    int evaluate(const std::uint64_t* bits) override { return task_.is_goal(bits) ? 0 : (task_.goal_reachable() ? 1 : kDeadEnd); }

private:
    const GroundTask& task_;
};

// h^max / h^add by generalized Dijkstra over the delete relaxation.
class RelaxationHeuristic : public Heuristic {
public:
    RelaxationHeuristic(const GroundTask& task, bool additive)
        : task_(task),
          additive_(additive),
          cost_(task.num_atoms()),
          unsat_(task.operators().size()),
          op_value_(task.operators().size()),
          is_goal_(task.num_atoms(), false) {
        for (int g : task.goal()) is_goal_[static_cast<std::size_t>(g)] = true;
        for (std::size_t o = 0; o < task.operators().size(); ++o)
            if (task.operators()[o].pre.empty()) no_pre_.push_back(static_cast<int>(o));
    }

    int evaluate(const std::uint64_t* bits) override {
        if (!task_.goal_reachable()) return kDeadEnd;
        const auto& ops = task_.operators();
        std::fill(cost_.begin(), cost_.end(), kInf);
        for (std::size_t o = 0; o < ops.size(); ++o) {
            unsat_[o] = static_cast<int>(ops[o].pre.size());
            op_value_[o] = 0;
        }
        queue_.clear();
        for (std::size_t a = 0; a < cost_.size(); ++a) {
            if (test_bit(bits, static_cast<int>(a))) {
                cost_[a] = 0;
                queue_.push(0, static_cast<int>(a));
            }
        }
        for (int o : no_pre_) fire(o, 0);

        std::size_t goals_left = task_.goal().size();
        while (!queue_.empty() && goals_left > 0) {
            auto [c, a] = queue_.pop();
            if (c > cost_[static_cast<std::size_t>(a)]) continue;
            if (is_goal_[static_cast<std::size_t>(a)]) --goals_left;
            for (int o : task_.consumers()[static_cast<std::size_t>(a)]) {
                auto& v = op_value_[static_cast<std::size_t>(o)];
                v = additive_ ? v + c : std::max(v, c);
                if (--unsat_[static_cast<std::size_t>(o)] == 0) fire(o, v);
            }
        }
        long total = 0;
        for (int g : task_.goal()) {
            const int c = cost_[static_cast<std::size_t>(g)];
            if (c >= kInf) return kDeadEnd;
            total = additive_ ? total + c : std::max<long>(total, c);
        }
        return static_cast<int>(std::min<long>(total, kDeadEnd - 1));
    }

private:
    void fire(int o, int value) {
        const int next = value + 1;
        for (int e : task_.operators()[static_cast<std::size_t>(o)].add) {
            if (next < cost_[static_cast<std::size_t>(e)]) {
                cost_[static_cast<std::size_t>(e)] = next;
                queue_.push(next, e);
            }
        }
    }

    const GroundTask& task_;
    bool additive_;
    std::vector<int> cost_;
    std::vector<int> unsat_;
    std::vector<int> op_value_;
    std::vector<bool> is_goal_;
    std::vector<int> no_pre_;
    BucketQueue queue_;
};

// Landmark-cut heuristic. Atoms are extended with an artificial start atom
// (precondition of operators without preconditions) and an artificial goal
// atom reached by a zero-cost goal operator.
class LmCutHeuristic : public Heuristic {
public:
    explicit LmCutHeuristic(const GroundTask& task) : task_(task) {
        const auto& ops = task.operators();
        num_atoms_ = static_cast<int>(task.num_atoms()) + 2;
        start_ = num_atoms_ - 2;
        goal_atom_ = num_atoms_ - 1;
        pre_.resize(ops.size() + 1);
        add_.resize(ops.size() + 1);
        for (std::size_t o = 0; o < ops.size(); ++o) {
            pre_[o] = ops[o].pre;
            if (pre_[o].empty()) pre_[o].push_back(start_);
            add_[o] = ops[o].add;
        }
        goal_op_ = static_cast<int>(ops.size());
        pre_[ops.size()] = task.goal();
        if (pre_[ops.size()].empty()) pre_[ops.size()].push_back(start_);
        add_[ops.size()] = {goal_atom_};

        consumers_.assign(static_cast<std::size_t>(num_atoms_), {});
        producers_.assign(static_cast<std::size_t>(num_atoms_), {});
        for (std::size_t o = 0; o < pre_.size(); ++o) {
            for (int p : pre_[o]) consumers_[static_cast<std::size_t>(p)].push_back(static_cast<int>(o));
            for (int e : add_[o]) producers_[static_cast<std::size_t>(e)].push_back(static_cast<int>(o));
        }
        const std::size_t n_ops = pre_.size();
        op_cost_.resize(n_ops);
        unsat_.resize(n_ops);
        pcf_.resize(n_ops);
        cut_.resize(n_ops);
        cost_.resize(static_cast<std::size_t>(num_atoms_));
        in_zone_.resize(static_cast<std::size_t>(num_atoms_));
        reached_.resize(static_cast<std::size_t>(num_atoms_));
        by_pcf_.resize(static_cast<std::size_t>(num_atoms_));
    }

    int evaluate(const std::uint64_t* bits) override {
        if (!task_.goal_reachable()) return kDeadEnd;
        std::fill(op_cost_.begin(), op_cost_.end(), 1);
        op_cost_[static_cast<std::size_t>(goal_op_)] = 0;
        int total = 0;
        for (;;) {
            compute_hmax(bits);
            const int hgoal = cost_[static_cast<std::size_t>(goal_atom_)];
            if (hgoal >= kInf) return total == 0 ? kDeadEnd : total;
            if (hgoal == 0) return total;

            // Goal zone: atoms with a zero-cost justification path to the goal.
            std::fill(in_zone_.begin(), in_zone_.end(), false);
            stack_.clear();
            in_zone_[static_cast<std::size_t>(goal_atom_)] = true;
            stack_.push_back(goal_atom_);
            while (!stack_.empty()) {
                const int z = stack_.back();
                stack_.pop_back();
                for (int o : producers_[static_cast<std::size_t>(z)]) {
                    if (op_cost_[static_cast<std::size_t>(o)] != 0 || unsat_[static_cast<std::size_t>(o)] != 0) continue;
                    const int p = pcf_[static_cast<std::size_t>(o)];
                    if (!in_zone_[static_cast<std::size_t>(p)]) {
                        in_zone_[static_cast<std::size_t>(p)] = true;
                        stack_.push_back(p);
                    }
                }
            }

            // Forward sweep from the state; operators crossing into the zone form the cut.
            for (auto& v : by_pcf_) v.clear();
            for (std::size_t o = 0; o < pre_.size(); ++o)
                if (unsat_[o] == 0) by_pcf_[static_cast<std::size_t>(pcf_[o])].push_back(static_cast<int>(o));
            std::fill(reached_.begin(), reached_.end(), false);
            std::fill(cut_.begin(), cut_.end(), false);
            stack_.clear();
            auto reach = [&](int a) {
                if (!reached_[static_cast<std::size_t>(a)] && !in_zone_[static_cast<std::size_t>(a)]) {
                    reached_[static_cast<std::size_t>(a)] = true;
                    stack_.push_back(a);
                }
            };
            reach(start_);
            for (int a = 0; a < static_cast<int>(task_.num_atoms()); ++a)
                if (test_bit(bits, a)) reach(a);
            int min_cost = kInf;
            while (!stack_.empty()) {
                const int a = stack_.back();
                stack_.pop_back();
                for (int o : by_pcf_[static_cast<std::size_t>(a)]) {
                    for (int e : add_[static_cast<std::size_t>(o)]) {
                        if (in_zone_[static_cast<std::size_t>(e)]) {
                            if (!cut_[static_cast<std::size_t>(o)]) {
                                cut_[static_cast<std::size_t>(o)] = true;
                                min_cost = std::min(min_cost, op_cost_[static_cast<std::size_t>(o)]);
                            }
                        } else {
                            reach(e);
                        }
                    }
                }
            }
            if (min_cost <= 0 || min_cost >= kInf) return total;  // cannot happen for a well-formed cut
            total += min_cost;
            for (std::size_t o = 0; o < cut_.size(); ++o)
                if (cut_[o]) op_cost_[o] -= min_cost;
        }
    }

private:
    void compute_hmax(const std::uint64_t* bits) {
        std::fill(cost_.begin(), cost_.end(), kInf);
        for (std::size_t o = 0; o < pre_.size(); ++o) unsat_[o] = static_cast<int>(pre_[o].size());
        queue_.clear();
        auto relax = [&](int a, int c) {
            if (c < cost_[static_cast<std::size_t>(a)]) {
                cost_[static_cast<std::size_t>(a)] = c;
                queue_.push(c, a);
            }
        };
        relax(start_, 0);
        for (int a = 0; a < static_cast<int>(task_.num_atoms()); ++a)
            if (test_bit(bits, a)) relax(a, 0);
        while (!queue_.empty()) {
            auto [c, a] = queue_.pop();
            if (c > cost_[static_cast<std::size_t>(a)]) continue;
            if (a == goal_atom_) break;
            for (int o : consumers_[static_cast<std::size_t>(a)]) {
                if (--unsat_[static_cast<std::size_t>(o)] == 0) {
                    pcf_[static_cast<std::size_t>(o)] = a;
                    const int next = c + op_cost_[static_cast<std::size_t>(o)];
                    for (int e : add_[static_cast<std::size_t>(o)]) relax(e, next);
                }
            }
        }
    }

    const GroundTask& task_;
    int num_atoms_ = 0;
    int start_ = 0;
    int goal_atom_ = 0;
    int goal_op_ = 0;
    std::vector<std::vector<int>> pre_;
    std::vector<std::vector<int>> add_;
    std::vector<std::vector<int>> consumers_;
    std::vector<std::vector<int>> producers_;
    std::vector<int> op_cost_;
    std::vector<int> unsat_;
    std::vector<int> pcf_;
    std::vector<bool> cut_;
    std::vector<int> cost_;
    std::vector<bool> in_zone_;
    std::vector<bool> reached_;
    std::vector<std::vector<int>> by_pcf_;
    std::vector<int> stack_;
    BucketQueue queue_;
};

// ---------------------------------------------------------------------------
// Search

class StateRegistry {
public:
    explicit StateRegistry(std::size_t words) : words_(words), table_(1024, -1) {}

    // Returns (id, inserted).
    std::pair<int, bool> insert(const std::uint64_t* bits) {
        if ((size_ + 1) * 2 > table_.size()) grow();
        std::size_t slot = hash(bits) & (table_.size() - 1);
        while (table_[slot] >= 0) {
            if (std::equal(bits, bits + words_, at(table_[slot]))) return {table_[slot], false};
            slot = (slot + 1) & (table_.size() - 1);
        }
        const int id = static_cast<int>(size_++);
        pool_.insert(pool_.end(), bits, bits + words_);
        table_[slot] = id;
        return {id, true};
    }

    const std::uint64_t* at(int id) const { return pool_.data() + static_cast<std::size_t>(id) * words_; }
    std::size_t size() const { return size_; }

private:
    std::size_t hash(const std::uint64_t* bits) const {
        std::uint64_t h = 0x84222325cbf29ce4ull;
        for (std::size_t i = 0; i < words_; ++i) {
            h ^= bits[i];
            h *= 0x100000001b3ull;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }

    void grow() {
        std::vector<int> bigger(table_.size() * 2, -1);
        for (int id = 0; id < static_cast<int>(size_); ++id) {
            std::size_t slot = hash(at(id)) & (bigger.size() - 1);
            while (bigger[slot] >= 0) slot = (slot + 1) & (bigger.size() - 1);
            bigger[slot] = id;
        }
        table_.swap(bigger);
    }

    std::size_t words_;
    std::vector<std::uint64_t> pool_;
    std::vector<int> table_;
    std::size_t size_ = 0;
};

struct SearchNode {
    int parent = -1;
    int op = -1;
    int g = 0;
    int h = 0;
    bool closed = false;
};

struct OpenEntry {
    int f;
    int h;
    std::uint64_t order;
    int id;
    int g;
    bool operator>(const OpenEntry& o) const {
        if (f != o.f) return f > o.f;
        if (h != o.h) return h > o.h;
        return order > o.order;
    }
};

Plan extract_plan(const GroundTask& task, const std::vector<SearchNode>& nodes, int id) {
    Plan plan;
    while (nodes[static_cast<std::size_t>(id)].parent >= 0) {
        plan.steps.push_back(task.operators()[static_cast<std::size_t>(nodes[static_cast<std::size_t>(id)].op)].action);
        id = nodes[static_cast<std::size_t>(id)].parent;
    }
    std::reverse(plan.steps.begin(), plan.steps.end());
    return plan;
}

}  // namespace

std::string to_string(HeuristicId id) {
    switch (id) {
        case HeuristicId::blind: return "blind";
        case HeuristicId::hmax: return "hmax";
        case HeuristicId::lmcut: return "lmcut";
        case HeuristicId::hadd: return "hadd";
    }
    return "?";
}

std::optional<HeuristicId> heuristic_from_name(std::string_view name) {
    for (HeuristicId id : {HeuristicId::blind, HeuristicId::hmax, HeuristicId::lmcut, HeuristicId::hadd})
        if (name == to_string(id)) return id;
    return std::nullopt;
}

std::string to_string(PlanOutcome outcome) {
    switch (outcome) {
        case PlanOutcome::plan: return "plan";
        case PlanOutcome::unsolvable: return "unsolvable";
        case PlanOutcome::budget_exceeded: return "budget-exceeded";
    }
    return "?";
}

std::unique_ptr<Heuristic> make_heuristic(HeuristicId id, const GroundTask& task) {
    switch (id) {
        case HeuristicId::blind: return std::make_unique<BlindHeuristic>(task);
        case HeuristicId::hmax: return std::make_unique<RelaxationHeuristic>(task, false);
        case HeuristicId::hadd: return std::make_unique<RelaxationHeuristic>(task, true);
        case HeuristicId::lmcut: return std::make_unique<LmCutHeuristic>(task);
    }
    return nullptr;
}

PlanResult solve(const Domain& domain, const Problem& problem, const PlannerConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    PlanResult result;
    auto finish = [&](PlanOutcome outcome) {
        result.outcome = outcome;
        result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        return result;
    };

    for (const auto& g : problem.goal)
        if (!domain.find_predicate(g.predicate))
            throw PlannerError("goal uses predicate '" + g.predicate + "' unknown to domain " + domain.name);

    const GroundTask task(domain, problem);
    if (!task.goal_reachable()) return finish(PlanOutcome::unsolvable);

    const bool optimal = config.mode == PlannerMode::optimal;
    const HeuristicId hid = config.heuristic.value_or(optimal ? HeuristicId::lmcut : HeuristicId::hadd);
    auto heuristic = make_heuristic(hid, task);

    const std::size_t words = task.num_words();
    StateRegistry registry(words);
    std::vector<SearchNode> nodes;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
    std::uint64_t order = 0;

    {
        auto [id, inserted] = registry.insert(task.initial_bits().data());
        (void)inserted;
        SearchNode root;
        root.h = heuristic->evaluate(registry.at(id));
        nodes.push_back(root);
        if (root.h == kDeadEnd) return finish(PlanOutcome::unsolvable);
        open.push({optimal ? root.h : root.h, root.h, order++, id, 0});
    }

    std::vector<std::uint64_t> child(words);
    const auto& ops = task.operators();
    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        SearchNode& node = nodes[static_cast<std::size_t>(top.id)];
        if (top.g > node.g) continue;  // stale entry
        if (node.closed && !optimal) continue;
        node.closed = true;

        const std::uint64_t* bits = registry.at(top.id);
        if (task.is_goal(bits)) {
            result.plan = extract_plan(task, nodes, top.id);
            return finish(PlanOutcome::plan);
        }
        if (++result.stats.expanded > config.node_budget) return finish(PlanOutcome::budget_exceeded);
        if ((result.stats.expanded & 255) == 0 &&
            std::chrono::steady_clock::now() - started > config.time_budget)
            return finish(PlanOutcome::budget_exceeded);

        const int g = node.g;
        for (std::size_t o = 0; o < ops.size(); ++o) {
            // `bits` may dangle after registry growth; re-fetch each time.
            const std::uint64_t* parent_bits = registry.at(top.id);
            if (!task.applicable(ops[o], parent_bits)) continue;
            task.apply(ops[o], parent_bits, child.data());
            ++result.stats.generated;
            auto [cid, inserted] = registry.insert(child.data());
            const int cg = g + 1;
            if (inserted) {
                SearchNode n;
                n.parent = top.id;
                n.op = static_cast<int>(o);
                n.g = cg;
                n.h = heuristic->evaluate(child.data());
                nodes.push_back(n);
                if (n.h == kDeadEnd) continue;
                open.push({optimal ? cg + n.h : n.h, n.h, order++, cid, cg});
            } else if (optimal) {
                SearchNode& existing = nodes[static_cast<std::size_t>(cid)];
                if (existing.h == kDeadEnd || cg >= existing.g) continue;
                existing.g = cg;
                existing.parent = top.id;
                existing.op = static_cast<int>(o);
                existing.closed = false;
                open.push({cg + existing.h, existing.h, order++, cid, cg});
            }
        }
    }
    return finish(PlanOutcome::unsolvable);
}

}  // namespace planbench
