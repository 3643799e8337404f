#include <atomic>
#include <filesystem>

#include "doctest.h"
#include "fixtures.hpp"
#include "planbench/domains.hpp"
#include "planbench/eval.hpp"
#include "planbench/validator.hpp"

using namespace planbench;

namespace {

std::vector<EvalItem> bw_items(std::size_t n, int max_blocks, std::uint64_t seed, const std::string& split) {
    BwGenConfig cfg;
    cfg.num_blocks = max_blocks;
    cfg.common.n = n;
    cfg.common.seed = seed;
    std::vector<EvalItem> out;
    for (auto& r : create_dataset_bw(cfg).records) {
        r.split = split;
        out.emplace_back(std::move(r));
    }
    return out;
}

std::string temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("planbench-test-" + name);
    std::filesystem::remove_all(dir);
    return dir.string();
}

class FlakyEndpoint : public Endpoint {
public:
    std::string id() const override { return "flaky"; }
    Completion complete(const std::string& p, const GenerationParams& g, const RequestContext& c) override {
        ++calls;
        if (item_id(*c.item) == down) throw TransportError("connection refused");
        return perfect.complete(p, g, c);
    }
    std::string down;
    std::atomic<int> calls{0};
    PerfectEndpoint perfect;
};

}  // namespace

TEST_CASE("one-shot blocks prompt reproduces the published prompt") {
    const std::string golden = fixtures::golden("blocksworld_1shot.txt");
    const auto parts = fixtures::split_pddl_prompt(golden);
    auto shot = fixtures::pddl_record("bw-4", DomainId::blocksworld, parts.shot_problem, parts.shot_answer);
    shot.pddl = render_problem(shot.problem);
    auto test = fixtures::pddl_record("bw-6", DomainId::blocksworld, parts.test_problem, "");
    test.pddl = render_problem(test.problem);
    const EvalItem s(shot), t(test);
    const EvalItem* shots[] = {&s};
    CHECK(answer_text(s, Representation::pddl) == parts.shot_answer);
    CHECK(build_prompt(t, shots, Representation::pddl) == golden);
}

TEST_CASE("zero-shot prompts hold only the test problem") {
    const auto parts = fixtures::split_pddl_prompt(fixtures::golden("blocksworld_1shot.txt"));
    const EvalItem t(fixtures::pddl_record("bw-6", DomainId::blocksworld, parts.test_problem, ""));
    CHECK(build_prompt(t, {}, Representation::pddl) ==
          std::string(fixtures::kHeader) + parts.test_problem + "\n" + fixtures::kCue);
    const std::string nl = build_prompt(t, {}, Representation::nl);
    CHECK(nl.find("The initial state:") != std::string::npos);
    CHECK(nl.find("(define") == std::string::npos);
}

TEST_CASE("prompt preconditions are enforced") {
    const auto parts = fixtures::split_pddl_prompt(fixtures::golden("blocksworld_1shot.txt"));
    const EvalItem t(fixtures::pddl_record("bw-6", DomainId::blocksworld, parts.test_problem, ""));
    const EvalItem* self[] = {&t};
    CHECK_THROWS_AS(build_prompt(t, self, Representation::pddl), std::invalid_argument);
    const EvalItem trip(fixtures::nat_trip("trip-a", fixtures::trip_shot()));
    const EvalItem* other[] = {&trip};
    CHECK_THROWS_AS(build_prompt(t, other, Representation::pddl), std::invalid_argument);
    CHECK_THROWS_AS(build_prompt(trip, {}, Representation::pddl), std::invalid_argument);
}

TEST_CASE("answers are extracted from noisy output") {
    const auto a = extract_answer("(pick-up c)\n(stack c b)\ndone.\nextra chatter", Benchmark::bw, Representation::pddl);
    REQUIRE(a.plan);
    CHECK(a.plan->size() == 2);
    const auto fenced = extract_answer("```\n**(pick-up c)**\n```\ndone.", Benchmark::bw, Representation::pddl);
    REQUIRE(fenced.plan);
    CHECK(fenced.plan->size() == 1);
    const auto nl = extract_answer(std::string(fixtures::kSussmanNlPlan) + " done.", Benchmark::bw, Representation::nl);
    REQUIRE(nl.plan);
    CHECK(*nl.plan == parse_plan(fixtures::kSussmanPlan));
    CHECK_FALSE(extract_answer("I cannot solve this.", Benchmark::bw, Representation::nl).plan);
}

TEST_CASE("scoring uses the verifiers") {
    const EvalItem t(fixtures::pddl_record("sussman", DomainId::blocksworld, fixtures::kSussmanProblem,
                                           fixtures::kSussmanPlan));
    CHECK(score_output(t, Representation::pddl, fixtures::kSussmanPlan).valid);
    CHECK_FALSE(score_output(t, Representation::pddl, "(unstack A B)\ndone.").valid);
    CHECK(score_output(t, Representation::nl, fixtures::kSussmanNlPlan).valid);
    const EvalItem cal(fixtures::nat_calendar("cal", fixtures::calendar_shot()));
    CHECK(score_output(cal, Representation::nl, "Here is the proposed time: Monday, 16:00 - 16:30 \ndone.").valid);
    CHECK_FALSE(score_output(cal, Representation::nl, "Monday, 9:00 - 9:30").valid);
}

TEST_CASE("shot sampling is seeded per item and excludes the test item") {
    const auto pool = bw_items(40, 5, 1, "train");
    const EvalItem& test = pool[3];
    const auto a = sample_shots(pool, test, 5, 7);
    const auto b = sample_shots(pool, test, 5, 7);
    REQUIRE(a.size() == 5);
    CHECK(a == b);
    std::set<std::string> ids;
    for (const auto* s : a) {
        CHECK(item_id(*s) != item_id(test));
        ids.insert(item_id(*s));
    }
    CHECK(ids.size() == 5);
    CHECK(sample_shots(pool, test, 5, 8) != a);
    CHECK_THROWS_AS(sample_shots(pool, test, pool.size(), 7), std::invalid_argument);
}

TEST_CASE("mock endpoints bracket accuracy") {
    const auto pool = bw_items(30, 4, 2, "train");
    const auto eval = bw_items(40, 5, 3, "test");
    EvalConfig cfg;
    cfg.shots = 2;
    PerfectEndpoint perfect;
    EmptyEndpoint empty;
    for (Representation rep : {Representation::pddl, Representation::nl}) {
        cfg.representation = rep;
        CHECK(run_eval(cfg, pool, eval, perfect).accuracy == 1.0);
        CHECK(run_eval(cfg, pool, eval, empty).accuracy == 0.0);
    }
}

TEST_CASE("echo-shot accuracy equals a brute-force sweep") {
    const auto pool = bw_items(30, 4, 4, "train");
    const auto eval = bw_items(60, 4, 5, "test");
    EvalConfig cfg;
    cfg.shots = 1;
    cfg.seed = 11;
    EchoShotEndpoint echo;
    const EvalRun run = run_eval(cfg, pool, eval, echo);
    std::size_t solved = 0;
    for (const auto& item : eval) {
        const auto& shot = std::get<InstanceRecord>(*sample_shots(pool, item, 1, 11).front());
        const auto& rec = std::get<InstanceRecord>(item);
        solved += validate(builtin_domain(rec.domain), rec.problem, shot.plan).valid;
    }
    CHECK(run.correct == solved);
    CHECK(run.accuracy == doctest::Approx(static_cast<double>(solved) / static_cast<double>(eval.size())));
}

TEST_CASE("accuracy does not depend on concurrency") {
    const auto pool = bw_items(20, 4, 6, "train");
    const auto eval = bw_items(30, 5, 7, "test");
    EvalConfig cfg;
    cfg.shots = 1;
    EchoShotEndpoint echo;
    cfg.concurrency = 1;
    const EvalRun a = run_eval(cfg, pool, eval, echo);
    cfg.concurrency = 6;
    const EvalRun b = run_eval(cfg, pool, eval, echo);
    CHECK(a.accuracy == b.accuracy);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].id == b.records[i].id);
        CHECK(a.records[i].valid == b.records[i].valid);
        CHECK(a.records[i].prompt_hash == b.records[i].prompt_hash);
    }
}

TEST_CASE("shot pool and evaluation set must be disjoint") {
    const auto items = bw_items(20, 4, 8, "train");
    PerfectEndpoint perfect;
    CHECK_THROWS_AS(run_eval(EvalConfig{}, items, items, perfect), std::invalid_argument);
}

TEST_CASE("transport failures are excluded from accuracy") {
    const auto pool = bw_items(10, 4, 9, "train");
    const auto eval = bw_items(10, 4, 10, "test");
    FlakyEndpoint flaky;
    flaky.down = item_id(eval[0]);
    EvalConfig cfg;
    cfg.retries = 2;
    cfg.backoff_ms = 1;
    const EvalRun run = run_eval(cfg, pool, eval, flaky);
    CHECK(run.transport_failed == 1);
    CHECK(run.scored == eval.size() - 1);
    CHECK(run.accuracy == 1.0);
    CHECK(run.records[0].transport_failed);
    CHECK(flaky.calls == static_cast<int>(eval.size()) + 2);
}

TEST_CASE("persisted runs re-score to the same accuracy") {
    const auto pool = bw_items(20, 4, 12, "train");
    const auto eval = bw_items(30, 5, 13, "test");
    EvalConfig cfg;
    cfg.shots = 1;
    EchoShotEndpoint echo;
    const EvalRun run = run_eval(cfg, pool, eval, echo);
    const std::string dir = temp_dir("rescore");
    persist_run(run, dir);
    CHECK(std::filesystem::exists(dir + "/results.jsonl"));
    const auto m = nlohmann::json::parse(fixtures::read_file(dir + "/manifest.json"));
    CHECK(m["config_hash"] == config_hash(cfg));
    const EvalRun again = rescore(dir, eval);
    CHECK(again.accuracy == run.accuracy);
    CHECK(again.correct == run.correct);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config hashing and serialisation") {
    EvalConfig a;
    EvalConfig b = eval_config_from_json(to_json(a));
    CHECK(config_hash(a) == config_hash(b));
    b.shots = 4;
    CHECK(config_hash(a) != config_hash(b));
    b = a;
    b.concurrency = 16;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(a.generation.stop == std::vector<std::string>{"done."});
}

TEST_CASE("OOD tables keep the source-by-target layout") {
    const NamedSet small_pool{"BW(3-4)", bw_items(15, 4, 14, "train")};
    const NamedSet large_pool{"BW(5-6)", bw_items(15, 6, 15, "train")};
    const NamedSet small_eval{"BW(3-4)", bw_items(15, 4, 16, "test")};
    const NamedSet large_eval{"BW(5-6)", bw_items(15, 6, 17, "test")};
    EvalConfig cfg;
    cfg.shots = 1;
    PerfectEndpoint perfect;
    const OodTable t = ood_matrix(cfg, {small_pool, large_pool}, {small_eval, large_eval}, perfect);
    CHECK(t.rows == std::vector<std::string>{"BW(3-4)", "BW(5-6)"});
    CHECK(t.cols == t.rows);
    for (const auto& row : t.accuracy)
        for (double a : row) CHECK(a == 1.0);
    CHECK(t.to_csv() == "source,BW(3-4),BW(5-6)\nBW(3-4),1.0000,1.0000\nBW(5-6),1.0000,1.0000\n");
    CHECK(t.to_text().find("BW(5-6)") != std::string::npos);
    // Cells are independent of the order sets are listed in.
    const OodTable swapped = ood_matrix(cfg, {large_pool, small_pool}, {large_eval, small_eval}, perfect);
    CHECK(swapped.accuracy[0][1] == t.accuracy[1][0]);
}

TEST_CASE("fine-tuning export") {
    BwGenConfig cfg;
    cfg.num_blocks = 5;
    cfg.common.n = 20;
    auto records = create_dataset_bw(cfg).records;
    const auto examples = export_sft(records, Representation::pddl);
    REQUIRE(examples.size() == records.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        CHECK(examples[i].target.ends_with("done.\n"));
        CHECK(examples[i].input.ends_with(fixtures::kCue));
        CHECK(validate_text(builtin_domain(DomainId::blocksworld), records[i].problem, examples[i].target).valid);
    }
    CHECK(export_sft({}, Representation::pddl).empty());
    records[0].meta.optimal = false;
    CHECK_THROWS_AS(export_sft(records, Representation::pddl), std::invalid_argument);
    CHECK(export_sft(records, Representation::nl, true).size() == records.size());
}

TEST_CASE("endpoint specs") {
    CHECK(make_endpoint("mock:perfect")->id() == "mock:perfect");
    CHECK(make_endpoint("mock:empty")->id() == "mock:empty");
    CHECK(make_endpoint("mock:echo-shot")->id() == "mock:echo-shot");
    CHECK(make_endpoint("http://127.0.0.1:9/v1/generate")->id() == "http://127.0.0.1:9/v1/generate");
    CHECK_THROWS(make_endpoint("mock:unknown"));
}

TEST_CASE("an unreachable HTTP endpoint raises a transport error") {
    HttpEndpoint http({"http://127.0.0.1:9/generate", "PLANBENCH_API_TOKEN", 1});
    CHECK_THROWS_AS(http.complete("hi", GenerationParams{}, RequestContext{}), TransportError);
}
