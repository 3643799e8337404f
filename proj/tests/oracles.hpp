#pragma once

// Reference implementations used only by tests. They deliberately avoid the
// library's planner, solvers and generators.

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "planbench/natplan.hpp"
#include "planbench/pddl.hpp"

namespace oracle {

using planbench::Domain;
using planbench::GroundAction;
using planbench::Problem;
using planbench::State;

// Every ground action over the problem objects, by brute force.
inline std::vector<GroundAction> all_ground_actions(const Domain& domain, const Problem& problem) {
    std::vector<GroundAction> out;
    for (const auto& schema : domain.actions) {
        const std::size_t k = schema.params.size();
        std::vector<std::size_t> idx(k, 0);
        const std::size_t m = problem.objects.size();
        if (k > 0 && m == 0) continue;
        while (true) {
            GroundAction a{schema.name, {}};
            for (std::size_t i = 0; i < k; ++i) a.args.push_back(problem.objects[idx[i]]);
            out.push_back(a);
            std::size_t pos = 0;
            while (pos < k && ++idx[pos] == m) idx[pos++] = 0;
            if (pos == k) break;
        }
    }
    return out;
}

// Length of a shortest plan by breadth-first search, or nullopt.
inline std::optional<std::size_t> bfs_length(const Domain& domain, const Problem& problem) {
    const auto actions = all_ground_actions(domain, problem);
    const State init = planbench::initial_state(problem);
    std::map<State, std::size_t> dist{{init, 0}};
    std::deque<State> queue{init};
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        const std::size_t d = dist[s];
        if (planbench::holds(s, problem.goal)) return d;
        for (const auto& a : actions) {
            auto next = planbench::step(domain, s, a);
            if (auto* t = std::get_if<State>(&next); t && !dist.count(*t)) {
                dist.emplace(*t, d + 1);
                queue.push_back(*t);
            }
        }
    }
    return std::nullopt;
}

using Stacks = std::vector<std::vector<std::string>>;

// All arrangements of the blocks into unordered stacks, each stack listed
// bottom to top, stacks sorted.
inline std::vector<Stacks> block_configurations(int n) {
    std::vector<std::string> blocks;
    for (int i = 1; i <= n; ++i) blocks.push_back("b" + std::to_string(i));
    std::set<Stacks> seen;
    std::vector<std::string> perm = blocks;
    do {
        // Every subset of the n-1 gaps is a set of cut points.
        for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
            Stacks s{{perm[0]}};
            for (int i = 1; i < n; ++i) {
                if (mask & (1u << (i - 1))) s.push_back({});
                s.back().push_back(perm[static_cast<std::size_t>(i)]);
            }
            std::sort(s.begin(), s.end());
            seen.insert(s);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {seen.begin(), seen.end()};
}

// Minute-resolution scan of every start time.
inline std::vector<std::pair<int, int>> calendar_slots(const planbench::CalendarTask& task) {
    std::vector<std::pair<int, int>> out;
    for (int s = task.work_start; s + task.duration <= task.work_end; ++s) {
        const int e = s + task.duration;
        bool ok = true;
        for (const auto& a : task.attendees)
            for (const auto& b : a.busy)
                if (s < b.end && b.start < e) ok = false;
        for (const auto& c : task.constraints) {
            if (c.kind == planbench::ConstraintKind::not_before && s < c.time) ok = false;
            if (c.kind == planbench::ConstraintKind::not_after && e > c.time) ok = false;
        }
        if (ok) out.emplace_back(s, e);
    }
    return out;
}

// Every city order whose implied day ranges respect flights and events.
inline std::vector<planbench::Itinerary> trip_solutions(const planbench::TripTask& task) {
    std::vector<planbench::Itinerary> out;
    std::vector<std::size_t> order(task.cities.size());
    std::iota(order.begin(), order.end(), 0);
    auto connected = [&](const std::string& a, const std::string& b) {
        for (const auto& [x, y] : task.flights)
            if ((x == a && y == b) || (x == b && y == a)) return true;
        return false;
    };
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return task.cities[a].name < task.cities[b].name; });
    do {
        planbench::Itinerary it;
        int day = 1;
        bool ok = true;
        for (std::size_t k = 0; k < order.size() && ok; ++k) {
            const auto& c = task.cities[order[k]];
            if (k > 0 && !connected(task.cities[order[k - 1]].name, c.name)) ok = false;
            const int last = day + c.days - 1;
            if (c.event && (c.event->first < day || c.event->last > last)) ok = false;
            it.push_back({c.name, day, last});
            day = last;
        }
        if (ok && day == task.total_days) out.push_back(it);
    } while (std::next_permutation(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return task.cities[a].name < task.cities[b].name;
    }));
    return out;
}

}  // namespace oracle
