#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "planbench/domains.hpp"
#include "planbench/eval.hpp"
#include "planbench/instance_gen.hpp"
#include "planbench/nl_bridge.hpp"
#include "planbench/planner.hpp"
#include "planbench/search.hpp"
#include "planbench/validator.hpp"

using namespace planbench;
using nlohmann::json;

namespace {

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

DomainId parse_domain_id(const std::string& name) {
    auto id = domain_from_name(name);
    if (!id) throw std::invalid_argument("unknown domain '" + name + "' (bw, logistics, minigrid)");
    return *id;
}

// A file path, or the key of an embedded domain.
Domain load_domain(const std::string& spec) {
    if (!std::filesystem::exists(spec))
        if (auto id = domain_from_name(spec)) return builtin_domain(*id);
    return parse_domain(read_input(spec));
}

Representation parse_rep(const std::string& name) {
    auto r = representation_from_name(name);
    if (!r) throw std::invalid_argument("unknown representation '" + name + "' (pddl, nl)");
    return *r;
}

std::vector<SplitSpec> parse_splits(const std::vector<std::string>& specs) {
    std::vector<SplitSpec> out;
    for (const auto& s : specs) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("split must be name=count: " + s);
        out.push_back({s.substr(0, eq), std::stoul(s.substr(eq + 1))});
    }
    return out;
}

// name=path[:split]
NamedSet load_named_set(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected name=path[:split]: " + spec);
    std::string path = spec.substr(eq + 1);
    std::string split;
    if (const auto colon = path.rfind(':'); colon != std::string::npos && !std::filesystem::exists(path)) {
        split = path.substr(colon + 1);
        path = path.substr(0, colon);
    }
    return {spec.substr(0, eq), select_split(read_items(path), split)};
}

json load_config(const std::string& path) { return path.empty() ? json::object() : json::parse(read_input(path)); }

// ---------------------------------------------------------------- generate

struct GenerateArgs {
    std::string config, domain = "bw", out = "-", manifest;
    std::size_t n = 100;
    std::uint64_t seed = 0, split_seed = 0;
    std::size_t target = 0;
    unsigned threads = 1;
    int max_blocks = 7, min_blocks = 3;
    int cities = 2, locations = 2, min_packages = 1, max_packages = 3, airplanes = 1;
    int rooms = 2, width = 2, height = 2, keys = 1, shapes = 1;
    std::string mode = "optimal";
    std::uint64_t node_budget = 20'000'000;
    int time_ms = 10'000;
    std::vector<std::string> splits;
};

int run_generate(GenerateArgs a, CLI::App& cmd) {
    const json cfg = load_config(a.config);
    auto pick = [&](const char* key, auto& field) {
        if (cfg.contains(key) && cmd.count(std::string("--") + key) == 0) field = cfg[key].get<std::decay_t<decltype(field)>>();
    };
    pick("domain", a.domain);
    pick("n", a.n);
    pick("seed", a.seed);
    pick("split-seed", a.split_seed);
    pick("target-unique", a.target);
    pick("threads", a.threads);
    pick("max-blocks", a.max_blocks);
    pick("min-blocks", a.min_blocks);
    pick("cities", a.cities);
    pick("locations", a.locations);
    pick("min-packages", a.min_packages);
    pick("max-packages", a.max_packages);
    pick("airplanes", a.airplanes);
    pick("rooms", a.rooms);
    pick("width", a.width);
    pick("height", a.height);
    pick("keys", a.keys);
    pick("shapes", a.shapes);
    pick("split", a.splits);

    GenCommon common;
    common.n = a.n;
    common.seed = a.seed;
    if (a.target) common.target_unique = a.target;
    common.threads = a.threads;
    common.planner.node_budget = a.node_budget;
    common.planner.time_budget = std::chrono::milliseconds(a.time_ms);
    if (a.mode == "satisficing") common.planner.mode = PlannerMode::satisficing;

    GenResult result;
    switch (parse_domain_id(a.domain)) {
        case DomainId::blocksworld: result = create_dataset_bw({a.max_blocks, a.min_blocks, common}); break;
        case DomainId::logistics:
            result = create_dataset_logistics(
                {a.cities, a.locations, a.min_packages, a.max_packages, a.airplanes, common});
            break;
        case DomainId::grid:
            result = create_dataset_minigrid({a.rooms, a.width, a.height, a.keys, a.shapes, common});
            break;
    }
    const auto specs = parse_splits(a.splits);
    if (!specs.empty()) split_dataset(result.records, specs, a.split_seed);

    if (a.out == "-") {
        for (const auto& r : result.records) std::cout << to_json(r).dump() << "\n";
    } else {
        write_records(a.out, result.records);
    }
    json m{{"domain", a.domain},
           {"seed", a.seed},
           {"split_seed", a.split_seed},
           {"report", to_json(result.report)},
           {"splits", split_counts(result.records)}};
    const std::string manifest_path = !a.manifest.empty() ? a.manifest : (a.out == "-" ? "" : a.out + ".manifest.json");
    if (!manifest_path.empty()) write_output(manifest_path, m.dump(2) + "\n");
    std::cerr << m.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------- plan / validate / translate

int run_plan(const std::string& domain_path, const std::string& problem_path, const std::string& mode,
             std::uint64_t budget, int time_ms, const std::string& heuristic) {
    const Domain domain = load_domain(domain_path);
    const Problem problem = parse_problem(read_input(problem_path));
    PlannerConfig config;
    config.mode = mode == "satisficing" ? PlannerMode::satisficing : PlannerMode::optimal;
    config.node_budget = budget;
    config.time_budget = std::chrono::milliseconds(time_ms);
    if (!heuristic.empty()) {
        config.heuristic = heuristic_from_name(heuristic);
        if (!config.heuristic) throw std::invalid_argument("unknown heuristic " + heuristic);
    }
    const PlanResult r = solve(domain, problem, config);
    if (r.outcome != PlanOutcome::plan) {
        std::cerr << to_string(r.outcome) << " after " << r.stats.expanded << " expansions\n";
        return 1;
    }
    std::cout << render_plan(*r.plan);
    std::cerr << "length " << r.plan->size() << ", expanded " << r.stats.expanded << ", " << r.stats.seconds << " s\n";
    return 0;
}

int run_validate(const std::string& domain_path, const std::string& problem_path, const std::string& plan_path) {
    const Domain domain = load_domain(domain_path);
    const Problem problem = parse_problem(read_input(problem_path));
    const Verdict v = validate_text(domain, problem, read_input(plan_path));
    std::cout << describe(v) << "\n";
    return v.valid ? 0 : 1;
}

int run_translate(bool to_nl, bool to_pddl, const std::string& domain_name, const std::string& input,
                  const std::string& output, bool strict) {
    if (to_nl == to_pddl) throw std::invalid_argument("choose exactly one of --to-nl / --to-pddl");
    const std::string text = read_input(input);
    if (to_nl) {
        if (text.find("(define") != std::string::npos) {
            write_output(output, problem_to_nl(parse_problem(text)));
        } else {
            write_output(output, plan_to_nl(parse_domain_id(domain_name), parse_plan(text)) + "done.\n");
        }
        return 0;
    }
    const NlPlanResult r =
        nl_plan_to_pddl(text, parse_domain_id(domain_name), strict ? MatchMode::strict : MatchMode::tolerant);
    for (const auto& e : r.errors) std::cerr << "sentence " << e.sentence << ": " << e.message << ": " << e.text << "\n";
    write_output(output, render_plan(r.plan));
    return r.ok() ? 0 : 1;
}

// ---------------------------------------------------------------- prompt

int run_prompt(const std::string& items_path, const std::string& test_id, std::size_t shots, const std::string& rep,
               std::uint64_t seed, const std::string& pool_split) {
    const auto items = read_items(items_path);
    const EvalItem* test = nullptr;
    for (const auto& it : items)
        if (item_id(it) == test_id) test = &it;
    if (!test) throw std::invalid_argument("no item with id " + test_id);
    std::vector<EvalItem> pool;
    for (const auto& it : select_split(items, pool_split))
        if (item_id(it) != test_id) pool.push_back(it);
    const auto chosen = sample_shots(pool, *test, shots, seed);
    std::cout << build_prompt(*test, chosen, parse_rep(rep));
    return 0;
}

// ---------------------------------------------------------------- natplan

int run_natplan_gen(const std::string& kind, std::size_t n, std::uint64_t seed, const std::string& out, int cities,
                    int days, int attendees, int duration, const std::string& profile) {
    std::vector<NatRecord> records;
    if (kind == "trip") {
        records = gen_trip_dataset({cities, days}, n, seed);
    } else if (kind == "calendar") {
        records = gen_calendar_dataset(
            {attendees, duration, profile == "busy" ? BusyProfile::busy : BusyProfile::light}, n, seed);
    } else {
        throw std::invalid_argument("kind must be trip or calendar");
    }
    if (out == "-")
        for (const auto& r : records) std::cout << to_json(r).dump() << "\n";
    else
        write_nat_records(out, records);
    return 0;
}

int run_natplan_solve(const std::string& in) {
    for (const auto& r : read_nat_records(in)) {
        json j{{"id", r.id}};
        if (r.trip) {
            json sols = json::array();
            for (const auto& it : solve_trip(*r.trip)) sols.push_back(render_itinerary(*r.trip, it));
            j["solutions"] = sols;
        } else if (r.calendar) {
            json sols = json::array();
            for (const auto& s : solve_calendar(*r.calendar)) sols.push_back(render_slot(s));
            j["solutions"] = sols;
        }
        std::cout << j.dump() << "\n";
    }
    return 0;
}

int run_natplan_verify(const std::string& in, const std::string& answers) {
    std::map<std::string, std::string> by_id;
    std::istringstream lines(read_input(answers));
    for (std::string line; std::getline(lines, line);) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        by_id[j.at("id").get<std::string>()] = j.contains("output") ? j["output"].get<std::string>() : j.value("raw_output", "");
    }
    std::size_t total = 0, correct = 0;
    for (const auto& r : read_nat_records(in)) {
        auto it = by_id.find(r.id);
        if (it == by_id.end()) continue;
        ++total;
        const bool ok = r.verify(it->second);
        correct += ok;
        std::cout << r.id << " " << (ok ? "valid" : "invalid") << "\n";
    }
    std::cout << "accuracy " << (total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0) << " ("
              << correct << "/" << total << ")\n";
    return total && correct == total ? 0 : 1;
}

// ---------------------------------------------------------------- search

int run_search(const std::string& items_path, const std::string& id, const std::string& algo, const std::string& policy_spec,
               const std::string& config_path, SearchConfig config, const std::string& trace) {
    if (!config_path.empty()) config = search_config_from_json(load_config(config_path));
    const auto items = read_items(items_path);
    const EvalItem* item = nullptr;
    for (const auto& it : items)
        if (item_id(it) == id) item = &it;
    if (!item) throw std::invalid_argument("no item with id " + id);

    std::unique_ptr<TaskAdapter> task;
    std::unique_ptr<Policy> policy;
    std::unique_ptr<Endpoint> endpoint;
    if (const auto* rec = std::get_if<InstanceRecord>(item)) {
        const Domain& domain = builtin_domain(rec->domain);
        task = std::make_unique<PddlTask>(domain, rec->problem);
        if (policy_spec == "oracle") policy = oracle_policy(domain, rec->problem);
    } else {
        const auto& nat = std::get<NatRecord>(*item);
        if (nat.calendar)
            task = std::make_unique<CalendarTaskAdapter>(*nat.calendar);
        else
            task = std::make_unique<TripTaskAdapter>(*nat.trip);
        if (policy_spec == "oracle") throw std::invalid_argument("the oracle policy needs a PDDL task");
    }
    if (!policy) {
        endpoint = make_endpoint(policy_spec);
        policy = std::make_unique<ModelPolicy>(*endpoint, task->task_text(), config);
    }
    const SearchResult r = algo == "tot" ? tot_search(*task, *policy, config) : mcts_search(*task, *policy, config);
    for (const auto& a : r.actions) std::cout << a << "\n";
    std::cerr << (r.solved() ? "solved" : r.partial ? "no terminal reached" : "terminal rejected by verifier")
              << ", reward " << r.reward << ", nodes " << r.stats.nodes << ", policy calls " << r.stats.policy_calls << "\n";
    if (!trace.empty()) write_output(trace, to_json(r).dump(2) + "\n");
    return r.solved() ? 0 : 1;
}

// ---------------------------------------------------------------- eval / ood / export-sft

int run_eval_cmd(const std::string& config_path, const std::string& items_path, const std::string& out,
                 const std::string& rescore_dir, std::optional<std::string> endpoint_override) {
    const auto items = read_items(items_path);
    if (!rescore_dir.empty()) {
        const EvalRun run = rescore(rescore_dir, items);
        std::cout << "rescored accuracy " << run.accuracy << " (" << run.correct << "/" << run.scored << ")\n";
        return 0;
    }
    const json cfg = load_config(config_path);
    // A matrix file holds a list of configurations.
    std::vector<EvalConfig> configs;
    if (cfg.is_array())
        for (const auto& c : cfg) configs.push_back(eval_config_from_json(c));
    else
        configs.push_back(eval_config_from_json(cfg));
    for (std::size_t i = 0; i < configs.size(); ++i) {
        EvalConfig& c = configs[i];
        if (endpoint_override) c.endpoint = *endpoint_override;
        std::vector<EvalItem> pool, eval;
        for (const auto& it : items) {
            if (item_benchmark(it) != c.benchmark) continue;
            if (item_split(it) == c.shot_split) pool.push_back(it);
            if (item_split(it) == c.eval_split) eval.push_back(it);
        }
        auto endpoint = make_endpoint(c.endpoint);
        const EvalRun run = run_eval(c, pool, eval, *endpoint);
        const std::string dir = configs.size() == 1 ? out : out + "/" + config_hash(c);
        persist_run(run, dir);
        std::cout << to_string(c.benchmark) << " " << to_string(c.representation) << " shots=" << c.shots
                  << " accuracy " << run.accuracy << " (" << run.correct << "/" << run.scored << ", "
                  << run.transport_failed << " transport failures) -> " << dir << "\n";
    }
    return 0;
}

int run_ood(const std::string& config_path, const std::vector<std::string>& sources,
            const std::vector<std::string>& targets, const std::string& csv) {
    const EvalConfig base = eval_config_from_json(load_config(config_path));
    std::vector<NamedSet> src, tgt;
    for (const auto& s : sources) src.push_back(load_named_set(s));
    for (const auto& t : targets) tgt.push_back(load_named_set(t));
    auto endpoint = make_endpoint(base.endpoint);
    const OodTable table = ood_matrix(base, src, tgt, *endpoint);
    std::cout << table.to_text();
    if (!csv.empty()) write_output(csv, table.to_csv());
    return 0;
}

int run_export_sft(const std::string& items_path, const std::string& rep, const std::string& split, bool allow,
                   const std::string& out) {
    std::vector<InstanceRecord> records;
    for (const auto& r : read_records(items_path))
        if (split.empty() || r.split == split) records.push_back(r);
    std::string text;
    for (const auto& e : export_sft(records, parse_rep(rep), allow)) text += to_json(e).dump() + "\n";
    write_output(out, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planning benchmark toolkit: generation, planning, validation, translation, search and evaluation"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate a PDDL instance dataset (JSONL)");
    generate->add_option("--config", gen.config, "JSON file with option values");
    generate->add_option("--domain", gen.domain, "bw | logistics | minigrid");
    generate->add_option("-n,--n", gen.n, "Sampling attempts");
    generate->add_option("--seed", gen.seed);
    generate->add_option("--target-unique", gen.target, "Keep sampling until this many unique instances exist");
    generate->add_option("--threads", gen.threads);
    generate->add_option("--max-blocks", gen.max_blocks);
    generate->add_option("--min-blocks", gen.min_blocks);
    generate->add_option("--cities", gen.cities);
    generate->add_option("--locations", gen.locations);
    generate->add_option("--min-packages", gen.min_packages);
    generate->add_option("--max-packages", gen.max_packages);
    generate->add_option("--airplanes", gen.airplanes);
    generate->add_option("--rooms", gen.rooms);
    generate->add_option("--width", gen.width);
    generate->add_option("--height", gen.height);
    generate->add_option("--keys", gen.keys);
    generate->add_option("--shapes", gen.shapes);
    generate->add_option("--mode", gen.mode, "optimal (satisficing fallback) | satisficing");
    generate->add_option("--node-budget", gen.node_budget);
    generate->add_option("--time-ms", gen.time_ms, "Per-instance planner time budget");
    generate->add_option("--split", gen.splits, "name=count, repeatable");
    generate->add_option("--split-seed", gen.split_seed);
    generate->add_option("-o,--out", gen.out, "Output JSONL (default stdout)");
    generate->add_option("--manifest", gen.manifest, "Manifest path (default <out>.manifest.json)");

    std::string domain_path, problem_path, plan_path, mode = "optimal", heuristic;
    std::uint64_t budget = 20'000'000;
    int time_ms = 10'000;
    auto* plan = app.add_subcommand("plan", "Plan a PDDL problem");
    plan->add_option("domain", domain_path, "Domain file or embedded key (bw, logistics, minigrid)")->required();
    plan->add_option("problem", problem_path)->required();
    plan->add_option("--mode", mode, "optimal | satisficing");
    plan->add_option("--budget", budget, "Node budget");
    plan->add_option("--time-ms", time_ms);
    plan->add_option("--heuristic", heuristic, "blind | hmax | lmcut | hadd");

    auto* validate_cmd = app.add_subcommand("validate", "Validate a plan");
    validate_cmd->add_option("domain", domain_path)->required();
    validate_cmd->add_option("problem", problem_path)->required();
    validate_cmd->add_option("plan", plan_path)->required();

    bool to_nl = false, to_pddl = false, strict = false;
    std::string tr_domain = "bw", input = "-", output = "-";
    auto* translate = app.add_subcommand("translate", "Translate problems/plans between PDDL and natural language");
    translate->add_flag("--to-nl", to_nl);
    translate->add_flag("--to-pddl", to_pddl);
    translate->add_flag("--strict", strict, "Exact template matching for NL plans");
    translate->add_option("--domain", tr_domain);
    translate->add_option("input", input, "File (default stdin)");
    translate->add_option("-o,--out", output);

    std::string items_path, test_id, rep = "pddl", pool_split = "train";
    std::size_t shots = 0;
    std::uint64_t seed = 0;
    auto* prompt = app.add_subcommand("prompt", "Assemble an N-shot prompt");
    prompt->add_option("--items", items_path)->required();
    prompt->add_option("--id", test_id)->required();
    prompt->add_option("--shots", shots);
    prompt->add_option("--rep", rep, "pddl | nl");
    prompt->add_option("--seed", seed);
    prompt->add_option("--pool-split", pool_split, "Shot pool split (empty for all)");

    auto* natplan = app.add_subcommand("natplan", "Trip-planning and calendar-scheduling tasks");
    natplan->require_subcommand(1);
    std::string kind = "trip", nat_out = "-", nat_in, answers, profile = "light";
    std::size_t nat_n = 10;
    int cities = 6, days = 13, attendees = 4, duration = 30;
    auto* nat_gen = natplan->add_subcommand("gen", "Generate tasks with unique answers");
    nat_gen->add_option("--kind", kind, "trip | calendar");
    nat_gen->add_option("-n,--n", nat_n);
    nat_gen->add_option("--seed", seed);
    nat_gen->add_option("--cities", cities);
    nat_gen->add_option("--days", days);
    nat_gen->add_option("--attendees", attendees);
    nat_gen->add_option("--duration", duration);
    nat_gen->add_option("--profile", profile, "light | busy");
    nat_gen->add_option("-o,--out", nat_out);
    auto* nat_solve = natplan->add_subcommand("solve", "List all answers for each task");
    nat_solve->add_option("input", nat_in)->required();
    auto* nat_verify = natplan->add_subcommand("verify", "Verify answers ({id, output} JSONL)");
    nat_verify->add_option("input", nat_in)->required();
    nat_verify->add_option("answers", answers)->required();

    std::string algo = "mcts", policy_spec = "oracle", search_config, trace;
    SearchConfig sc;
    auto* search = app.add_subcommand("search", "MCTS or tree-of-thought search on one task");
    search->add_option("--items", items_path)->required();
    search->add_option("--id", test_id)->required();
    search->add_option("--algo", algo, "mcts | tot");
    search->add_option("--policy", policy_spec, "oracle or an endpoint spec");
    search->add_option("--config", search_config, "JSON search configuration");
    search->add_option("--depth", sc.max_depth);
    search->add_option("--branching", sc.branching);
    search->add_option("--simulations", sc.simulations);
    search->add_option("--temperature", sc.temperature);
    search->add_flag("--predict-states", sc.predict_states);
    search->add_option("--trace", trace, "Write the search tree as JSON");

    std::string eval_config, eval_out = "runs/latest", rescore_dir, endpoint;
    auto* eval = app.add_subcommand("eval", "Run an evaluation (or re-score a persisted run)");
    eval->add_option("--config", eval_config, "JSON EvalConfig or a list of them");
    eval->add_option("--items", items_path)->required();
    eval->add_option("-o,--out", eval_out);
    eval->add_option("--rescore", rescore_dir, "Re-score the run stored in this directory");
    auto* endpoint_opt = eval->add_option("--endpoint", endpoint, "Override the configured endpoint");

    std::vector<std::string> sources, targets;
    std::string csv;
    auto* ood = app.add_subcommand("ood", "Shot-pool x evaluation-set accuracy matrix");
    ood->add_option("--config", eval_config, "Base JSON EvalConfig");
    ood->add_option("--source", sources, "name=path[:split]")->required();
    ood->add_option("--target", targets, "name=path[:split]")->required();
    ood->add_option("--csv", csv);

    bool allow = false;
    std::string sft_split, sft_out = "-";
    auto* sft = app.add_subcommand("export-sft", "Export (prompt, plan) pairs for fine-tuning");
    sft->add_option("--items", items_path)->required();
    sft->add_option("--rep", rep);
    sft->add_option("--split", sft_split);
    sft->add_flag("--allow-satisficing", allow);
    sft->add_option("-o,--out", sft_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) return run_generate(gen, *generate);
        if (*plan) return run_plan(domain_path, problem_path, mode, budget, time_ms, heuristic);
        if (*validate_cmd) return run_validate(domain_path, problem_path, plan_path);
        if (*translate) return run_translate(to_nl, to_pddl, tr_domain, input, output, strict);
        if (*prompt) return run_prompt(items_path, test_id, shots, rep, seed, pool_split);
        if (*nat_gen) return run_natplan_gen(kind, nat_n, seed, nat_out, cities, days, attendees, duration, profile);
        if (*nat_solve) return run_natplan_solve(nat_in);
        if (*nat_verify) return run_natplan_verify(nat_in, answers);
        if (*search) return run_search(items_path, test_id, algo, policy_spec, search_config, sc, trace);
        if (*eval)
            return run_eval_cmd(eval_config, items_path, eval_out, rescore_dir,
                                endpoint_opt->count() ? std::optional<std::string>(endpoint) : std::nullopt);
        if (*ood) return run_ood(eval_config, sources, targets, csv);
        if (*sft) return run_export_sft(items_path, rep, sft_split, allow, sft_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
