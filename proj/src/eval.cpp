#include "planbench/eval.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace planbench {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot finalize " + path);
}

void finish(EvalRun& run) {
    run.scored = run.correct = run.transport_failed = 0;
    for (const auto& r : run.records) {
        if (r.transport_failed) {
            ++run.transport_failed;
            continue;
        }
        ++run.scored;
        if (r.valid) ++run.correct;
    }
    run.accuracy = run.scored ? static_cast<double>(run.correct) / static_cast<double>(run.scored) : 0.0;
}

}  // namespace

std::string fnv1a_hex(std::string_view text) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << fnv1a(text);
    return out.str();
}

json to_json(const EvalConfig& c) {
    return json{{"benchmark", to_string(c.benchmark)},
                {"representation", to_string(c.representation)},
                {"shots", c.shots},
                {"shot_split", c.shot_split},
                {"eval_split", c.eval_split},
                {"endpoint", c.endpoint},
                {"seed", c.seed},
                {"concurrency", c.concurrency},
                {"retries", c.retries},
                {"backoff_ms", c.backoff_ms},
                {"generation",
                 {{"temperature", c.generation.temperature},
                  {"max_tokens", c.generation.max_tokens},
                  {"stop", c.generation.stop}}}};
}

EvalConfig eval_config_from_json(const json& j) {
    EvalConfig c;
    if (j.contains("benchmark")) {
        auto b = benchmark_from_name(j["benchmark"].get<std::string>());
        if (!b) throw std::invalid_argument("unknown benchmark " + j["benchmark"].dump());
        c.benchmark = *b;
    }
    if (j.contains("representation")) {
        auto r = representation_from_name(j["representation"].get<std::string>());
        if (!r) throw std::invalid_argument("unknown representation " + j["representation"].dump());
        c.representation = *r;
    }
    c.shots = j.value("shots", c.shots);
    c.shot_split = j.value("shot_split", c.shot_split);
    c.eval_split = j.value("eval_split", c.eval_split);
    c.endpoint = j.value("endpoint", c.endpoint);
    c.seed = j.value("seed", c.seed);
    c.concurrency = j.value("concurrency", c.concurrency);
    c.retries = j.value("retries", c.retries);
    c.backoff_ms = j.value("backoff_ms", c.backoff_ms);
    if (j.contains("generation")) {
        const json& g = j["generation"];
        c.generation.temperature = g.value("temperature", c.generation.temperature);
        c.generation.max_tokens = g.value("max_tokens", c.generation.max_tokens);
        c.generation.stop = g.value("stop", c.generation.stop);
    }
    return c;
}

std::string config_hash(const EvalConfig& config) {
    json j = to_json(config);
    j.erase("concurrency");  // does not affect results
    return fnv1a_hex(j.dump());
}

json to_json(const ResultRecord& r) {
    return json{{"id", r.id},
                {"prompt_hash", r.prompt_hash},
                {"raw_output", r.raw_output},
                {"extracted", r.extracted},
                {"valid", r.valid},
                {"detail", r.detail},
                {"latency_ms", r.latency_ms},
                {"transport_failed", r.transport_failed},
                {"shot_ids", r.shot_ids}};
}

ResultRecord result_from_json(const json& j) {
    ResultRecord r;
    r.id = j.at("id").get<std::string>();
    r.prompt_hash = j.value("prompt_hash", std::string());
    r.raw_output = j.value("raw_output", std::string());
    r.extracted = j.value("extracted", std::string());
    r.valid = j.value("valid", false);
    r.detail = j.value("detail", std::string());
    r.latency_ms = j.value("latency_ms", 0.0);
    r.transport_failed = j.value("transport_failed", false);
    r.shot_ids = j.value("shot_ids", std::vector<std::string>{});
    return r;
}

std::vector<const EvalItem*> sample_shots(const std::vector<EvalItem>& pool, const EvalItem& test, std::size_t n,
                                          std::uint64_t seed) {
    std::vector<const EvalItem*> candidates;
    for (const auto& item : pool)
        if (item_id(item) != item_id(test)) candidates.push_back(&item);
    if (n > candidates.size())
        throw std::invalid_argument("requested " + std::to_string(n) + " shots from a pool of " +
                                    std::to_string(candidates.size()));
    Rng rng = Rng::stream(seed, fnv1a(item_id(test)));
    // Partial Fisher-Yates: the first n positions are the sample.
    for (std::size_t i = 0; i < n; ++i) std::swap(candidates[i], candidates[i + rng.index(candidates.size() - i)]);
    candidates.resize(n);
    return candidates;
}

std::vector<EvalItem> select_split(const std::vector<EvalItem>& items, const std::string& split) {
    std::vector<EvalItem> out;
    for (const auto& item : items)
        if (split.empty() || item_split(item) == split) out.push_back(item);
    return out;
}

EvalRun run_eval(const EvalConfig& config, const std::vector<EvalItem>& pool, const std::vector<EvalItem>& eval,
                 Endpoint& endpoint) {
    std::set<std::string> pool_ids;
    for (const auto& p : pool) pool_ids.insert(item_id(p));
    for (const auto& e : eval) {
        if (pool_ids.count(item_id(e))) throw std::invalid_argument("item " + item_id(e) + " is in both shot pool and eval set");
        if (item_benchmark(e) != config.benchmark)
            throw std::invalid_argument("item " + item_id(e) + " is not a " + to_string(config.benchmark) + " item");
    }

    EvalRun run;
    run.config = config;
    run.endpoint_id = endpoint.id();
    run.records.resize(eval.size());

    auto work = [&](std::size_t i) {
        const EvalItem& item = eval[i];
        ResultRecord& rec = run.records[i];
        rec.id = item_id(item);
        const auto shots = sample_shots(pool, item, config.shots, config.seed);
        for (const auto* s : shots) rec.shot_ids.push_back(item_id(*s));
        const std::string prompt = build_prompt(item, shots, config.representation);
        rec.prompt_hash = fnv1a_hex(prompt);
        RequestContext context{&item, shots, config.representation};
        const auto started = std::chrono::steady_clock::now();
        int backoff = config.backoff_ms;
        for (int attempt = 0;; ++attempt) {
            try {
                rec.raw_output = endpoint.complete(prompt, config.generation, context).text;
                break;
            } catch (const TransportError& e) {
                if (attempt >= config.retries) {
                    rec.transport_failed = true;
                    rec.detail = e.what();
                    break;
                }
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
                backoff *= 2;
            }
        }
        rec.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        if (rec.transport_failed) return;
        const Score s = score_output(item, config.representation, rec.raw_output);
        rec.valid = s.valid;
        rec.detail = s.detail;
        rec.extracted = s.extracted;
    };

    const std::size_t workers = std::min<std::size_t>(std::max(1u, config.concurrency), eval.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < eval.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool_threads;
        for (std::size_t t = 0; t < workers; ++t)
            pool_threads.emplace_back([&] {
                for (std::size_t i = next++; i < eval.size(); i = next++) work(i);
            });
        for (auto& th : pool_threads) th.join();
    }
    finish(run);
    if (run.transport_failed)
        std::fprintf(stderr, "warning: %zu of %zu requests failed after retries and are excluded from accuracy\n",
                     run.transport_failed, run.records.size());
    return run;
}

json manifest(const EvalRun& run) {
    return json{{"config", to_json(run.config)},
                {"config_hash", config_hash(run.config)},
                {"endpoint_id", run.endpoint_id},
                {"items", run.records.size()},
                {"scored", run.scored},
                {"correct", run.correct},
                {"transport_failed", run.transport_failed},
                {"accuracy", run.accuracy}};
}

void persist_run(const EvalRun& run, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::string lines;
    for (const auto& r : run.records) lines += to_json(r).dump() + "\n";
    write_atomic(dir + "/results.jsonl", lines);
    write_atomic(dir + "/manifest.json", manifest(run).dump(2) + "\n");
}

EvalRun rescore(const std::string& dir, const std::vector<EvalItem>& eval) {
    std::ifstream mf(dir + "/manifest.json");
    if (!mf) throw std::runtime_error("no manifest in " + dir);
    const json m = json::parse(mf);
    EvalRun run;
    run.config = eval_config_from_json(m.at("config"));
    run.endpoint_id = m.value("endpoint_id", std::string());

    std::unordered_map<std::string, const EvalItem*> by_id;
    for (const auto& item : eval) by_id[item_id(item)] = &item;
    std::ifstream in(dir + "/results.jsonl");
    if (!in) throw std::runtime_error("no results in " + dir);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ResultRecord r = result_from_json(json::parse(line));
        if (!r.transport_failed) {
            auto it = by_id.find(r.id);
            if (it == by_id.end()) throw std::runtime_error("result for unknown item " + r.id);
            const Score s = score_output(*it->second, run.config.representation, r.raw_output);
            r.valid = s.valid;
            r.detail = s.detail;
            r.extracted = s.extracted;
        }
        run.records.push_back(std::move(r));
    }
    finish(run);
    return run;
}

std::string OodTable::to_text() const {
    std::size_t first = std::string("shots \\ eval").size();
    for (const auto& r : rows) first = std::max(first, r.size());
    std::vector<std::size_t> widths;
    for (const auto& c : cols) widths.push_back(std::max<std::size_t>(c.size(), 5));
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(first)) << "shots \\ eval";
    for (std::size_t j = 0; j < cols.size(); ++j) out << "  " << std::right << std::setw(static_cast<int>(widths[j])) << cols[j];
    out << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << std::left << std::setw(static_cast<int>(first)) << rows[i];
        for (std::size_t j = 0; j < cols.size(); ++j)
            out << "  " << std::right << std::setw(static_cast<int>(widths[j])) << std::fixed << std::setprecision(3)
                << accuracy[i][j];
        out << "\n";
    }
    return out.str();
}

std::string OodTable::to_csv() const {
    std::ostringstream out;
    out << "source";
    for (const auto& c : cols) out << "," << c;
    out << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << rows[i];
        for (std::size_t j = 0; j < cols.size(); ++j) out << "," << std::fixed << std::setprecision(4) << accuracy[i][j];
        out << "\n";
    }
    return out.str();
}

OodTable ood_matrix(const EvalConfig& base, const std::vector<NamedSet>& sources, const std::vector<NamedSet>& targets,
                    Endpoint& endpoint) {
    OodTable t;
    for (const auto& s : sources) t.rows.push_back(s.name);
    for (const auto& c : targets) t.cols.push_back(c.name);
    for (const auto& s : sources) {
        std::vector<double> row;
        for (const auto& c : targets) row.push_back(run_eval(base, s.items, c.items, endpoint).accuracy);
        t.accuracy.push_back(row);
    }
    return t;
}

std::vector<SftExample> export_sft(const std::vector<InstanceRecord>& records, Representation rep,
                                   bool allow_satisficing) {
    std::vector<SftExample> out;
    for (const auto& r : records) {
        if (!r.meta.optimal && !allow_satisficing)
            throw std::invalid_argument("record " + r.id + " has a non-optimal plan");
        const EvalItem item(r);
        out.push_back({r.id, build_prompt(item, {}, rep), answer_text(item, rep)});
    }
    return out;
}

json to_json(const SftExample& e) { return json{{"id", e.id}, {"input", e.input}, {"target", e.target}}; }

}  // namespace planbench
