#include "planbench/instance_gen.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "planbench/nl_bridge.hpp"

namespace planbench {

using nlohmann::json;

StackConfig create_stacks(int blocks, Rng& rng) {
    if (blocks < 1) throw std::invalid_argument("create_stacks: need at least one block");
    std::vector<std::string> names;
    for (int i = 1; i <= blocks; ++i) names.push_back("b" + std::to_string(i));
    rng.shuffle(names);
    StackConfig stacks;
    std::size_t next = 0;
    while (next < names.size()) {
        const std::size_t height = 1 + rng.index(names.size() - next);
        stacks.emplace_back(names.begin() + static_cast<std::ptrdiff_t>(next),
                            names.begin() + static_cast<std::ptrdiff_t>(next + height));
        next += height;
    }
    return stacks;
}

bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::isdigit(static_cast<unsigned char>(a[i])) && std::isdigit(static_cast<unsigned char>(b[j]))) {
            std::size_t ie = i;
            std::size_t je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            std::string x = a.substr(i, ie - i);
            std::string y = b.substr(j, je - j);
            x.erase(0, std::min(x.find_first_not_of('0'), x.size()));
            y.erase(0, std::min(y.find_first_not_of('0'), y.size()));
            if (x.size() != y.size()) return x.size() < y.size();
            if (x != y) return x < y;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() - i < b.size() - j;
}

StackConfig canonical(StackConfig config) {
    std::sort(config.begin(), config.end(),
              [](const Stack& x, const Stack& y) { return natural_less(x.front(), y.front()); });
    return config;
}

Problem create_problem_bw(const StackConfig& init, const StackConfig& goal, const std::string& name) {
    std::vector<std::string> init_blocks;
    std::vector<std::string> goal_blocks;
    for (const auto& s : init) {
        if (s.empty()) throw std::invalid_argument("create_problem_bw: empty stack");
        init_blocks.insert(init_blocks.end(), s.begin(), s.end());
    }
    for (const auto& s : goal) {
        if (s.empty()) throw std::invalid_argument("create_problem_bw: empty stack");
        goal_blocks.insert(goal_blocks.end(), s.begin(), s.end());
    }
    std::sort(init_blocks.begin(), init_blocks.end(), natural_less);
    std::sort(goal_blocks.begin(), goal_blocks.end(), natural_less);
    if (init_blocks != goal_blocks) throw std::invalid_argument("create_problem_bw: init and goal use different blocks");
    if (std::adjacent_find(init_blocks.begin(), init_blocks.end()) != init_blocks.end())
        throw std::invalid_argument("create_problem_bw: block appears twice");

    Problem p;
    p.name = name.empty() ? "BW-rand-" + std::to_string(init_blocks.size()) : name;
    p.domain_name = std::string(domain_name(DomainId::blocksworld));
    p.objects = init_blocks;
    p.init.push_back({"handempty", {}});
    for (const auto& s : init) {
        p.init.push_back({"ontable", {s.front()}});
        for (std::size_t i = 1; i < s.size(); ++i) p.init.push_back({"on", {s[i], s[i - 1]}});
        p.init.push_back({"clear", {s.back()}});
    }
    for (const auto& s : goal)
        for (std::size_t i = 1; i < s.size(); ++i) p.goal.push_back({"on", {s[i], s[i - 1]}});
    return p;
}

std::string task_key(DomainId domain, const Problem& problem) {
    std::vector<std::string> init;
    std::vector<std::string> goal;
    for (const auto& a : problem.init) init.push_back(to_string(a));
    for (const auto& a : problem.goal) goal.push_back(to_string(a));
    std::sort(init.begin(), init.end());
    std::sort(goal.begin(), goal.end());
    std::string key(domain_key(domain));
    for (const auto& s : init) key += "|" + s;
    key += "||";
    for (const auto& s : goal) key += "|" + s;
    return key;
}

// ---------------------------------------------------------------------------
// Records

json to_json(const InstanceRecord& r) {
    return json{{"id", r.id},
                {"domain", std::string(domain_key(r.domain))},
                {"pddl", r.pddl},
                {"nl", r.nl},
                {"plan_pddl", render_plan(r.plan)},
                {"plan_nl", plan_to_nl(r.domain, r.plan) + "done.\n"},
                {"meta",
                 {{"difficulty", r.meta.difficulty},
                  {"plan_length", r.meta.plan_length},
                  {"optimal", r.meta.optimal},
                  {"seed", r.meta.seed}}},
                {"split", r.split}};
}

InstanceRecord record_from_json(const json& j) {
    InstanceRecord r;
    r.id = j.at("id").get<std::string>();
    const auto domain = domain_from_name(j.at("domain").get<std::string>());
    if (!domain) throw std::invalid_argument("record " + r.id + ": unknown domain");
    r.domain = *domain;
    r.pddl = j.at("pddl").get<std::string>();
    r.problem = parse_problem(r.pddl);
    r.nl = j.value("nl", std::string());
    r.plan = parse_plan(j.at("plan_pddl").get<std::string>());
    const json& meta = j.at("meta");
    r.meta.difficulty = meta.value("difficulty", 0);
    r.meta.plan_length = meta.value("plan_length", r.plan.size());
    r.meta.optimal = meta.value("optimal", true);
    r.meta.seed = meta.value("seed", std::uint64_t{0});
    r.split = j.value("split", std::string(kUnassigned));
    return r;
}

std::vector<InstanceRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<InstanceRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(record_from_json(json::parse(line)));
    }
    return out;
}

void write_records(const std::string& path, const std::vector<InstanceRecord>& records) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        for (const auto& r : records) out << to_json(r).dump() << '\n';
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot finalize " + path);
}

json to_json(const GenReport& r) {
    auto hist = [](const std::map<int, std::size_t>& m) {
        json h = json::object();
        for (const auto& [k, v] : m) h[std::to_string(k)] = v;
        return h;
    };
    json lengths = json::object();
    for (const auto& [k, v] : r.mean_plan_length) lengths[std::to_string(k)] = v;
    return json{{"attempts", r.attempts},
                {"trivial", r.trivial},
                {"duplicates", r.duplicates},
                {"unsolved", r.unsolved},
                {"satisficing", r.satisficing},
                {"emitted", r.emitted},
                {"sampled_difficulty", hist(r.sampled_difficulty)},
                {"emitted_difficulty", hist(r.emitted_difficulty)},
                {"mean_plan_length", lengths},
                {"diagnostics", r.diagnostics}};
}

// ---------------------------------------------------------------------------
// Generation driver

namespace {

struct Candidate {
    Problem problem;
    int difficulty = 0;
    std::uint64_t seed = 0;
};

enum class Status { pending, trivial, duplicate };

struct Solved {
    PlanOutcome outcome = PlanOutcome::unsolvable;
    Plan plan;
    bool optimal = true;
};

Solved solve_with_fallback(const Domain& domain, const Problem& problem, const PlannerConfig& config) {
    if (config.mode == PlannerMode::satisficing) {
        const PlanResult r = solve(domain, problem, config);
        return {r.outcome, r.plan.value_or(Plan{}), false};
    }
    PlannerConfig optimal = config;
    optimal.mode = PlannerMode::optimal;
    PlanResult r = solve(domain, problem, optimal);
    if (r.outcome == PlanOutcome::plan) return {r.outcome, *r.plan, true};
    if (r.outcome == PlanOutcome::unsolvable) return {r.outcome, {}, false};
    PlannerConfig fallback = config;
    fallback.mode = PlannerMode::satisficing;
    fallback.heuristic.reset();
    r = solve(domain, problem, fallback);
    if (r.outcome == PlanOutcome::plan) return {r.outcome, *r.plan, false};
    return {r.outcome, {}, false};
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, count); ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

GenResult generate(DomainId domain_id, const GenCommon& common,
                   const std::function<Candidate(Rng&, std::uint64_t seed)>& sample) {
    const Domain& domain = builtin_domain(domain_id);
    GenResult result;
    GenReport& report = result.report;
    std::unordered_set<std::string> seen;
    std::map<int, std::size_t> length_sum;

    const bool targeted = common.target_unique.has_value();
    const std::size_t target = common.target_unique.value_or(0);
    const std::size_t limit = targeted ? std::max<std::size_t>(common.n, 1000 * std::max<std::size_t>(target, 1)) : common.n;
    constexpr std::size_t kBatch = 256;

    std::size_t attempt = 0;
    bool done = targeted && target == 0;
    while (!done && attempt < limit) {
        const std::size_t batch = std::min(kBatch, limit - attempt);
        std::vector<Candidate> cands(batch);
        std::vector<Status> status(batch, Status::pending);
        std::vector<std::string> keys(batch);
        for (std::size_t i = 0; i < batch; ++i) {
            const std::uint64_t seed = Rng::derive(common.seed, attempt + i);
            Rng rng(seed);
            cands[i] = sample(rng, seed);
            cands[i].seed = seed;
            keys[i] = task_key(domain_id, cands[i].problem);
        }
        // Dedup in attempt order before paying for search.
        std::unordered_set<std::string> batch_seen;
        std::vector<std::size_t> to_solve;
        for (std::size_t i = 0; i < batch; ++i) {
            const State init = initial_state(cands[i].problem);
            if (holds(init, cands[i].problem.goal)) {
                status[i] = Status::trivial;
            } else if (seen.count(keys[i]) || !batch_seen.insert(keys[i]).second) {
                status[i] = Status::duplicate;
            } else {
                to_solve.push_back(i);
            }
        }
        std::vector<Solved> solved(batch);
        parallel_for(to_solve.size(), common.threads, [&](std::size_t k) {
            const std::size_t i = to_solve[k];
            solved[i] = solve_with_fallback(domain, cands[i].problem, common.planner);
        });

        for (std::size_t i = 0; i < batch && !done; ++i) {
            const Candidate& c = cands[i];
            ++report.attempts;
            ++report.sampled_difficulty[c.difficulty];
            if (status[i] == Status::trivial) {
                ++report.trivial;
                continue;
            }
            if (status[i] == Status::duplicate) {
                ++report.duplicates;
                continue;
            }
            seen.insert(keys[i]);
            const Solved& s = solved[i];
            if (s.outcome != PlanOutcome::plan) {
                ++report.unsolved;
                report.diagnostics.push_back("attempt " + std::to_string(attempt + i) + " (" + c.problem.name +
                                             "): " + to_string(s.outcome));
                continue;
            }
            if (!s.optimal) ++report.satisficing;
            InstanceRecord r;
            r.id = std::string(domain_key(domain_id)) + "-" + std::to_string(common.seed) + "-" +
                   std::to_string(attempt + i);
            r.domain = domain_id;
            r.problem = c.problem;
            r.pddl = render_problem(c.problem);
            r.nl = problem_to_nl(c.problem);
            r.plan = s.plan;
            r.meta = {c.difficulty, s.plan.size(), s.optimal, c.seed};
            ++report.emitted;
            ++report.emitted_difficulty[c.difficulty];
            length_sum[c.difficulty] += s.plan.size();
            result.records.push_back(std::move(r));
            if (targeted && report.emitted >= target) done = true;
        }
        attempt += batch;
        if (!targeted) done = attempt >= common.n;
    }
    for (const auto& [d, count] : report.emitted_difficulty)
        report.mean_plan_length[d] = static_cast<double>(length_sum[d]) / static_cast<double>(count);
    if (targeted && report.emitted < target)
        report.diagnostics.push_back("attempt limit reached with " + std::to_string(report.emitted) + " of " +
                                     std::to_string(target) + " unique records");
    return result;
}

std::string place(int i) { return "p" + std::to_string(i); }

}  // namespace

GenResult create_dataset_bw(const BwGenConfig& config) {
    if (config.num_blocks < 3 || config.min_blocks < 1 || config.min_blocks > config.num_blocks)
        throw std::invalid_argument("blocksworld generator: need 1 <= min_blocks <= num_blocks and num_blocks >= 3");
    return generate(DomainId::blocksworld, config.common, [&](Rng& rng, std::uint64_t) {
        const int b = rng.uniform_int(config.min_blocks, config.num_blocks);
        StackConfig init = canonical(create_stacks(b, rng));
        StackConfig goal = canonical(create_stacks(b, rng));
        return Candidate{create_problem_bw(init, goal), b, 0};
    });
}

Problem random_logistics_problem(const LogisticsGenConfig& cfg, int packages, Rng& rng) {
    Problem p;
    p.name = "logistics-c" + std::to_string(cfg.cities) + "-s" + std::to_string(cfg.locations) + "-p" +
             std::to_string(packages) + "-a" + std::to_string(cfg.airplanes);
    p.domain_name = std::string(domain_name(DomainId::logistics));
    auto loc = [](int c, int s) { return "l" + std::to_string(c) + "-" + std::to_string(s); };
    std::vector<std::string> airports;
    std::vector<std::string> locations;
    for (int c = 0; c < cfg.cities; ++c) {
        airports.push_back(loc(c, 0));
        for (int s = 0; s < cfg.locations; ++s) locations.push_back(loc(c, s));
    }
    for (int a = 0; a < cfg.airplanes; ++a) p.objects.push_back("a" + std::to_string(a));
    for (int c = 0; c < cfg.cities; ++c) p.objects.push_back("c" + std::to_string(c));
    for (int c = 0; c < cfg.cities; ++c) p.objects.push_back("t" + std::to_string(c));
    p.objects.insert(p.objects.end(), locations.begin(), locations.end());
    for (int k = 0; k < packages; ++k) p.objects.push_back("p" + std::to_string(k));

    for (int a = 0; a < cfg.airplanes; ++a) p.init.push_back({"airplane", {"a" + std::to_string(a)}});
    for (int c = 0; c < cfg.cities; ++c) p.init.push_back({"city", {"c" + std::to_string(c)}});
    for (int c = 0; c < cfg.cities; ++c) p.init.push_back({"truck", {"t" + std::to_string(c)}});
    for (int c = 0; c < cfg.cities; ++c)
        for (int s = 0; s < cfg.locations; ++s) {
            p.init.push_back({"location", {loc(c, s)}});
            p.init.push_back({"in-city", {loc(c, s), "c" + std::to_string(c)}});
        }
    for (const auto& a : airports) p.init.push_back({"airport", {a}});
    for (int k = 0; k < packages; ++k) p.init.push_back({"obj", {"p" + std::to_string(k)}});
    for (int c = 0; c < cfg.cities; ++c)
        p.init.push_back({"at", {"t" + std::to_string(c), loc(c, rng.uniform_int(0, cfg.locations - 1))}});
    std::vector<std::string> start(static_cast<std::size_t>(packages));
    for (int k = 0; k < packages; ++k) {
        start[static_cast<std::size_t>(k)] = rng.pick(locations);
        p.init.push_back({"at", {"p" + std::to_string(k), start[static_cast<std::size_t>(k)]}});
    }
    for (int a = 0; a < cfg.airplanes; ++a) p.init.push_back({"at", {"a" + std::to_string(a), rng.pick(airports)}});
    for (int k = 0; k < packages; ++k) {
        std::string target;
        do {
            target = rng.pick(locations);
        } while (target == start[static_cast<std::size_t>(k)]);
        p.goal.push_back({"at", {"p" + std::to_string(k), target}});
    }
    return p;
}

GenResult create_dataset_logistics(const LogisticsGenConfig& config) {
    if (config.cities < 1 || config.locations < 2 || config.min_packages < 1 ||
        config.max_packages < config.min_packages || config.airplanes < 1)
        throw std::invalid_argument("logistics generator: need cities>=1, locations>=2, packages>=1, airplanes>=1");
    return generate(DomainId::logistics, config.common, [&](Rng& rng, std::uint64_t) {
        const int packages = rng.uniform_int(config.min_packages, config.max_packages);
        return Candidate{random_logistics_problem(config, packages, rng), packages, 0};
    });
}

GridLayout grid_layout(int rooms, int width, int height) {
    GridLayout g;
    const int cells = width * height;
    std::vector<int> room_base;
    std::vector<int> corridor;
    int next = 0;
    for (int r = 0; r < rooms; ++r) {
        room_base.push_back(next);
        std::vector<int> ids(static_cast<std::size_t>(cells));
        for (int i = 0; i < cells; ++i) ids[static_cast<std::size_t>(i)] = next + i;
        g.room_cells.push_back(ids);
        next += cells;
        if (r + 1 < rooms) {
            corridor.push_back(next);
            g.locked.push_back(next);
            ++next;
        }
    }
    g.num_places = next;
    // Corridor k leaves room k from its bottom row and enters room k+1 in the
    // top row, alternating between the first and last column.
    auto door_col = [&](int k) { return k % 2 == 0 ? 0 : width - 1; };
    for (int r = 0; r < rooms; ++r) {
        const int base = room_base[static_cast<std::size_t>(r)];
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const int id = base + y * width + x;
                if (x > 0) g.conn.emplace_back(id, id - 1);
                if (y > 0) {
                    g.conn.emplace_back(id, id - width);
                } else if (r > 0 && x == door_col(r - 1)) {
                    g.conn.emplace_back(id, corridor[static_cast<std::size_t>(r - 1)]);
                }
                if (x + 1 < width) g.conn.emplace_back(id, id + 1);
                if (y + 1 < height) {
                    g.conn.emplace_back(id, id + width);
                } else if (r + 1 < rooms && x == door_col(r)) {
                    g.conn.emplace_back(id, corridor[static_cast<std::size_t>(r)]);
                }
            }
        }
        if (r + 1 < rooms) {
            const int c = corridor[static_cast<std::size_t>(r)];
            const int exit = base + (height - 1) * width + door_col(r);
            const int entry = base + cells + 1 + door_col(r);
            g.conn.emplace_back(c, exit);
            g.conn.emplace_back(c, entry);
        }
    }
    return g;
}

Problem random_grid_problem(const GridGenConfig& cfg, Rng& rng) {
    const GridLayout layout = grid_layout(cfg.rooms, cfg.width, cfg.height);
    Problem p;
    p.name = "grid_" + std::to_string(cfg.rooms) + "Vroom" + std::to_string(cfg.width);
    p.domain_name = std::string(domain_name(DomainId::grid));

    const int robot_room = rng.uniform_int(0, cfg.rooms - 1);
    int goal_room = rng.uniform_int(0, cfg.rooms - 2);
    if (goal_room >= robot_room) ++goal_room;
    const int robot = rng.pick(layout.room_cells[static_cast<std::size_t>(robot_room)]);
    const int goal = rng.pick(layout.room_cells[static_cast<std::size_t>(goal_room)]);

    std::vector<int> lock_shape;
    for (std::size_t i = 0; i < layout.locked.size(); ++i) lock_shape.push_back(rng.uniform_int(0, cfg.shapes - 1));
    // Shapes of the locks between robot and goal; a key for each starts in the robot's room.
    std::vector<int> needed;
    for (int k = std::min(robot_room, goal_room); k < std::max(robot_room, goal_room); ++k) {
        const int s = lock_shape[static_cast<std::size_t>(k)];
        if (std::find(needed.begin(), needed.end(), s) == needed.end()) needed.push_back(s);
    }
    const int keys = std::max<int>(cfg.keys, static_cast<int>(needed.size()));
    std::vector<int> key_shape;
    std::vector<int> key_at;
    std::vector<int> open_cells;
    for (const auto& room : layout.room_cells) open_cells.insert(open_cells.end(), room.begin(), room.end());
    for (int k = 0; k < keys; ++k) {
        if (k < static_cast<int>(needed.size())) {
            key_shape.push_back(needed[static_cast<std::size_t>(k)]);
            key_at.push_back(rng.pick(layout.room_cells[static_cast<std::size_t>(robot_room)]));
        } else {
            key_shape.push_back(rng.uniform_int(0, cfg.shapes - 1));
            key_at.push_back(rng.pick(open_cells));
        }
    }

    for (int i = 0; i < layout.num_places; ++i) p.objects.push_back(place(i));
    for (int s = 0; s < cfg.shapes; ++s) p.objects.push_back("shape" + std::to_string(s));
    for (int k = 0; k < keys; ++k) p.objects.push_back("key" + std::to_string(k));

    for (int i = 0; i < layout.num_places; ++i) p.init.push_back({"place", {place(i)}});
    for (int s = 0; s < cfg.shapes; ++s) p.init.push_back({"shape", {"shape" + std::to_string(s)}});
    for (int k = 0; k < keys; ++k) p.init.push_back({"key", {"key" + std::to_string(k)}});
    for (int c : open_cells) p.init.push_back({"open", {place(c)}});
    for (int c : layout.locked) p.init.push_back({"locked", {place(c)}});
    for (const auto& [a, b] : layout.conn) p.init.push_back({"conn", {place(a), place(b)}});
    for (std::size_t i = 0; i < layout.locked.size(); ++i)
        p.init.push_back({"lock-shape", {place(layout.locked[i]), "shape" + std::to_string(lock_shape[i])}});
    for (int k = 0; k < keys; ++k)
        p.init.push_back({"key-shape", {"key" + std::to_string(k), "shape" + std::to_string(key_shape[static_cast<std::size_t>(k)])}});
    for (int k = 0; k < keys; ++k)
        p.init.push_back({"at", {"key" + std::to_string(k), place(key_at[static_cast<std::size_t>(k)])}});
    p.init.push_back({"at-robot", {place(robot)}});
    p.init.push_back({"arm-empty", {}});
    p.goal.push_back({"at-robot", {place(goal)}});
    return p;
}

GenResult create_dataset_minigrid(const GridGenConfig& config) {
    if (config.rooms < 2 || config.keys < 1 || config.shapes < 1 || config.width < 1 || config.height < 1)
        throw std::invalid_argument("grid generator: need rooms>=2, keys>=1, shapes>=1 and a non-empty room");
    return generate(DomainId::grid, config.common, [&](Rng& rng, std::uint64_t) {
        return Candidate{random_grid_problem(config, rng), config.rooms, 0};
    });
}

void split_dataset(std::vector<InstanceRecord>& records, const std::vector<SplitSpec>& splits, std::uint64_t seed) {
    std::size_t total = 0;
    for (const auto& s : splits) total += s.count;
    if (total > records.size())
        throw std::invalid_argument("split_dataset: requested " + std::to_string(total) + " records but only " +
                                    std::to_string(records.size()) + " available");
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    std::size_t pos = 0;
    for (const auto& s : splits)
        for (std::size_t k = 0; k < s.count; ++k) records[order[pos++]].split = s.name;
    for (; pos < order.size(); ++pos) records[order[pos]].split = kUnassigned;
}

std::map<std::string, std::size_t> split_counts(const std::vector<InstanceRecord>& records) {
    std::map<std::string, std::size_t> counts;
    for (const auto& r : records) ++counts[r.split];
    return counts;
}

}  // namespace planbench
