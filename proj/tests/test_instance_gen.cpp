#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "planbench/instance_gen.hpp"
#include "planbench/validator.hpp"

using namespace planbench;

namespace {

std::string dump(const std::vector<InstanceRecord>& records) {
    std::string out;
    for (const auto& r : records) out += to_json(r).dump() + "\n";
    return out;
}

void check_sound(const GenResult& g, DomainId domain) {
    std::set<std::string> keys;
    for (const auto& r : g.records) {
        CHECK(keys.insert(task_key(domain, r.problem)).second);
        CHECK_FALSE(holds(initial_state(r.problem), r.problem.goal));
        CHECK(validate(builtin_domain(domain), r.problem, r.plan).valid);
        CHECK(r.meta.plan_length == r.plan.size());
        CHECK(r.pddl == render_problem(r.problem));
    }
}

}  // namespace

TEST_CASE("random stacks cover every three-block configuration") {
    const auto expected = oracle::block_configurations(3);
    REQUIRE(expected.size() == 13);
    std::set<StackConfig> seen;
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        StackConfig s = canonical(create_stacks(3, rng));
        std::sort(s.begin(), s.end());
        seen.insert(s);
    }
    CHECK(seen == std::set<StackConfig>(expected.begin(), expected.end()));
}

TEST_CASE("stack problems encode the configurations") {
    const Problem p = create_problem_bw({{"b2", "b1"}, {"b3"}}, {{"b1", "b3", "b2"}});
    CHECK(p.name == "BW-rand-3");
    CHECK(p.objects == std::vector<std::string>{"b1", "b2", "b3"});
    CHECK(p.init.front() == GroundAtom{"handempty", {}});
    const State s = initial_state(p);
    CHECK(s.contains({"ontable", {"b2"}}));
    CHECK(s.contains({"on", {"b1", "b2"}}));
    CHECK(s.contains({"clear", {"b1"}}));
    CHECK(s.contains({"clear", {"b3"}}));
    CHECK(p.goal == std::vector<GroundAtom>{{"on", {"b3", "b1"}}, {"on", {"b2", "b3"}}});
    CHECK_THROWS_AS(create_problem_bw({{"b1"}}, {{"b2"}}), std::invalid_argument);
    CHECK_THROWS_AS(create_problem_bw({{"b1", "b1"}}, {{"b1", "b1"}}), std::invalid_argument);
}

TEST_CASE("natural ordering of object names") {
    CHECK(natural_less("b2", "b10"));
    CHECK_FALSE(natural_less("b10", "b2"));
    CHECK(natural_less("a", "b"));
}

TEST_CASE("blocks datasets are sound, deterministic and thread-independent") {
    BwGenConfig cfg;
    cfg.num_blocks = 5;
    cfg.common.n = 120;
    cfg.common.seed = 42;
    const GenResult a = create_dataset_bw(cfg);
    check_sound(a, DomainId::blocksworld);
    CHECK(a.report.emitted == a.records.size());
    CHECK(a.report.attempts == 120);
    CHECK(a.report.emitted + a.report.trivial + a.report.duplicates + a.report.unsolved == a.report.attempts);
    cfg.common.threads = 3;
    const GenResult b = create_dataset_bw(cfg);
    CHECK(dump(a.records) == dump(b.records));
    cfg.common.seed = 43;
    CHECK(dump(create_dataset_bw(cfg).records) != dump(a.records));
}

TEST_CASE("target_unique keeps sampling until enough records exist") {
    BwGenConfig cfg;
    cfg.num_blocks = 4;
    cfg.common.n = 10;
    cfg.common.target_unique = 60;
    const GenResult g = create_dataset_bw(cfg);
    CHECK(g.records.size() == 60);
    check_sound(g, DomainId::blocksworld);
}

TEST_CASE("logistics and grid datasets are sound") {
    LogisticsGenConfig lc;
    lc.common.n = 30;
    const GenResult l = create_dataset_logistics(lc);
    CHECK_FALSE(l.records.empty());
    check_sound(l, DomainId::logistics);
    for (const auto& r : l.records) CHECK(r.meta.difficulty >= 1);

    GridGenConfig gc;
    gc.common.n = 30;
    const GenResult g = create_dataset_minigrid(gc);
    CHECK_FALSE(g.records.empty());
    check_sound(g, DomainId::grid);
}

TEST_CASE("generated logistics problems follow the published naming") {
    LogisticsGenConfig c;
    c.cities = 4;
    c.airplanes = 4;
    Rng rng(1);
    const Problem p = random_logistics_problem(c, 3, rng);
    CHECK(p.name == "logistics-c4-s2-p3-a4");
    CHECK(p.objects.front() == "a0");
    CHECK(p.objects.back() == "p2");
    for (const auto& g : p.goal) CHECK_FALSE(initial_state(p).contains(g));
}

TEST_CASE("two-room grid layout matches the published floor plan") {
    const auto grid = fixtures::split_pddl_prompt(fixtures::golden("grid_1shot.txt"));
    const Problem published = parse_problem(grid.shot_problem);
    std::vector<std::pair<int, int>> conn;
    for (const auto& a : published.init)
        if (a.predicate == "conn") conn.emplace_back(std::stoi(a.args[0].substr(1)), std::stoi(a.args[1].substr(1)));
    const GridLayout layout = grid_layout(2, 2, 2);
    CHECK(layout.num_places == 9);
    CHECK(layout.conn == conn);
    CHECK(layout.locked == std::vector<int>{4});

    GridGenConfig c;
    Rng rng(3);
    const Problem p = random_grid_problem(c, rng);
    CHECK(p.name == "grid_2Vroom2");
}

TEST_CASE("records survive a JSON round trip") {
    BwGenConfig cfg;
    cfg.num_blocks = 4;
    cfg.common.n = 5;
    for (const auto& r : create_dataset_bw(cfg).records) {
        const InstanceRecord back = record_from_json(to_json(r));
        CHECK(to_json(back) == to_json(r));
        CHECK(back.problem == r.problem);
        CHECK(back.plan == r.plan);
    }
}

TEST_CASE("splits assign exact counts") {
    BwGenConfig cfg;
    cfg.num_blocks = 5;
    cfg.common.n = 80;
    auto records = create_dataset_bw(cfg).records;
    const std::size_t total = records.size();
    split_dataset(records, {{"train", 30}, {"test", 10}}, 9);
    auto counts = split_counts(records);
    CHECK(counts["train"] == 30);
    CHECK(counts["test"] == 10);
    CHECK(counts[kUnassigned] == total - 40);
    auto again = create_dataset_bw(cfg).records;
    split_dataset(again, {{"train", 30}, {"test", 10}}, 9);
    CHECK(dump(again) == dump(records));
    CHECK_THROWS_AS(split_dataset(records, {{"train", total + 1}}, 0), std::invalid_argument);
}
