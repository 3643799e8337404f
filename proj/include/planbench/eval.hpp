#pragma once

// Evaluation runs: shot sampling, bounded-concurrency endpoint calls,
// verification, persistence, re-scoring, OOD tables and SFT export.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "planbench/endpoints.hpp"

namespace planbench {

struct EvalConfig {
    Benchmark benchmark = Benchmark::bw;
    Representation representation = Representation::pddl;
    std::size_t shots = 0;
    std::string shot_split = "train";  // split tag used as the shot pool
    std::string eval_split = "test";
    std::string endpoint = "mock:perfect";
    std::uint64_t seed = 0;
    unsigned concurrency = 4;
    int retries = 3;
    int backoff_ms = 200;  // doubled after every failed attempt
    GenerationParams generation{};
};

nlohmann::json to_json(const EvalConfig& config);
EvalConfig eval_config_from_json(const nlohmann::json& j);
// FNV-1a over the canonical JSON of the config.
std::string config_hash(const EvalConfig& config);

struct ResultRecord {
    std::string id;
    std::string prompt_hash;
    std::string raw_output;
    std::string extracted;
    bool valid = false;
    std::string detail;
    double latency_ms = 0.0;
    bool transport_failed = false;
    std::vector<std::string> shot_ids;
};

nlohmann::json to_json(const ResultRecord& r);
ResultRecord result_from_json(const nlohmann::json& j);

struct EvalRun {
    EvalConfig config;
    std::string endpoint_id;
    std::vector<ResultRecord> records;  // eval-set order
    std::size_t scored = 0;             // excludes transport failures
    std::size_t correct = 0;
    std::size_t transport_failed = 0;
    double accuracy = 0.0;              // correct / scored, 0 when nothing scored
};

std::string fnv1a_hex(std::string_view text);

// Shots for one test item: uniform without replacement from `pool`, seeded by
// (seed, item id). Throws when N exceeds the pool.
std::vector<const EvalItem*> sample_shots(const std::vector<EvalItem>& pool, const EvalItem& test, std::size_t n,
                                          std::uint64_t seed);

// Items whose split tag equals `split`; an empty tag selects everything.
std::vector<EvalItem> select_split(const std::vector<EvalItem>& items, const std::string& split);

// Throws std::invalid_argument when pool and eval share an item id.
EvalRun run_eval(const EvalConfig& config, const std::vector<EvalItem>& pool, const std::vector<EvalItem>& eval,
                 Endpoint& endpoint);

// Writes <dir>/results.jsonl and <dir>/manifest.json.
void persist_run(const EvalRun& run, const std::string& dir);
nlohmann::json manifest(const EvalRun& run);

// Re-verifies persisted raw outputs against the eval items.
EvalRun rescore(const std::string& dir, const std::vector<EvalItem>& eval);

struct NamedSet {
    std::string name;
    std::vector<EvalItem> items;
};

struct OodTable {
    std::vector<std::string> rows;  // shot-pool sources
    std::vector<std::string> cols;  // evaluation targets
    std::vector<std::vector<double>> accuracy;
    std::string to_text() const;
    std::string to_csv() const;
};

OodTable ood_matrix(const EvalConfig& base, const std::vector<NamedSet>& sources, const std::vector<NamedSet>& targets,
                    Endpoint& endpoint);

struct SftExample {
    std::string id;
    std::string input;   // 0-shot prompt
    std::string target;  // reference answer ending in "done."
};

// Throws std::invalid_argument for a non-optimal record unless allowed.
std::vector<SftExample> export_sft(const std::vector<InstanceRecord>& records, Representation rep,
                                   bool allow_satisficing = false);
nlohmann::json to_json(const SftExample& e);

}  // namespace planbench
