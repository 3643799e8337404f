#pragma once

// Benchmark items, N-shot prompt assembly and answer extraction/scoring.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "planbench/instance_gen.hpp"
#include "planbench/natplan.hpp"
#include "planbench/validator.hpp"

namespace planbench {

enum class Benchmark { bw, logistics, minigrid, trip, calendar };
enum class Representation { pddl, nl };

std::string to_string(Benchmark b);
std::string to_string(Representation r);
std::optional<Benchmark> benchmark_from_name(std::string_view name);
std::optional<Representation> representation_from_name(std::string_view name);
bool is_pddl_benchmark(Benchmark b);
DomainId benchmark_domain(Benchmark b);  // PDDL benchmarks only

// One evaluation item: a PDDL benchmark record or a natural-language task.
using EvalItem = std::variant<InstanceRecord, NatRecord>;

const std::string& item_id(const EvalItem& item);
const std::string& item_split(const EvalItem& item);
Benchmark item_benchmark(const EvalItem& item);

// Loads either record kind from JSONL (detected per line by the "kind" field).
std::vector<EvalItem> read_items(const std::string& path);

// Problem statement as shown to the model.
std::string problem_text(const EvalItem& item, Representation rep);
// Reference answer including the trailing "done." line.
std::string answer_text(const EvalItem& item, Representation rep);

// Shots first (problem, cue, answer), then the test problem and its cue.
// Throws std::invalid_argument when the test item is among the shots or the
// representation does not apply.
std::string build_prompt(const EvalItem& test, std::span<const EvalItem* const> shots, Representation rep);

struct ExtractedAnswer {
    std::string text;           // raw output cut at the first "done." line, markup stripped
    std::optional<Plan> plan;   // PDDL benchmarks, when parsing succeeded
    std::vector<std::string> errors;
};

ExtractedAnswer extract_answer(std::string_view raw, Benchmark benchmark, Representation rep);

struct Score {
    bool valid = false;
    std::string detail;
    std::string extracted;
};

// Verifies a raw model output against the item (validator or natplan checker).
Score score_output(const EvalItem& item, Representation rep, std::string_view raw);

}  // namespace planbench
