#pragma once

// Random problem generation for the three PDDL domains, solved by the
// in-repo planner and packaged as benchmark records.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "planbench/domains.hpp"
#include "planbench/planner.hpp"
#include "planbench/rng.hpp"

namespace planbench {

using Stack = std::vector<std::string>;   // bottom to top
using StackConfig = std::vector<Stack>;

// Random partition of b1..bb into stacks: a uniform permutation cut into
// consecutive runs whose heights are drawn uniformly from what remains.
StackConfig create_stacks(int blocks, Rng& rng);

// Sorts stacks by their bottom block so equal configurations compare equal.
StackConfig canonical(StackConfig config);

// Init: handempty, then per stack ontable/on/clear; goal: the on atoms of `goal`.
// Throws std::invalid_argument when the block sets differ.
Problem create_problem_bw(const StackConfig& init, const StackConfig& goal, const std::string& name = "");

// Orders object names like "b2" before "b10".
bool natural_less(const std::string& a, const std::string& b);

struct RecordMeta {
    int difficulty = 0;  // blocks / packages / rooms
    std::size_t plan_length = 0;
    bool optimal = true;
    std::uint64_t seed = 0;
};

inline constexpr const char* kUnassigned = "unassigned";

struct InstanceRecord {
    std::string id;
    DomainId domain = DomainId::blocksworld;
    Problem problem;
    std::string pddl;  // render_problem(problem), or the imported source text
    std::string nl;
    Plan plan;
    RecordMeta meta;
    std::string split = kUnassigned;
};

nlohmann::json to_json(const InstanceRecord& record);
// Parses pddl/plan_pddl back into structured form.
InstanceRecord record_from_json(const nlohmann::json& j);

std::vector<InstanceRecord> read_records(const std::string& path);
void write_records(const std::string& path, const std::vector<InstanceRecord>& records);

struct GenReport {
    std::size_t attempts = 0;
    std::size_t trivial = 0;     // goal already true in init
    std::size_t duplicates = 0;
    std::size_t unsolved = 0;    // budget exhausted in both planner modes, or unsolvable
    std::size_t satisficing = 0;  // optimal search ran out of budget, fallback plan used
    std::size_t emitted = 0;
    std::map<int, std::size_t> sampled_difficulty;  // before dedup
    std::map<int, std::size_t> emitted_difficulty;
    std::map<int, double> mean_plan_length;
    std::vector<std::string> diagnostics;
};

nlohmann::json to_json(const GenReport& report);

struct GenResult {
    std::vector<InstanceRecord> records;
    GenReport report;
};

// Options shared by every generator.
struct GenCommon {
    std::size_t n = 100;       // attempts
    std::uint64_t seed = 0;
    // When set, keep sampling past `n` until this many unique records exist
    // (bounded by 1000 x target attempts).
    std::optional<std::size_t> target_unique;
    PlannerConfig planner{};   // optimal mode; satisficing fallback on budget
    unsigned threads = 1;      // output does not depend on this
};

struct BwGenConfig {
    int num_blocks = 7;  // maximum
    int min_blocks = 3;
    GenCommon common;
};

struct LogisticsGenConfig {
    int cities = 2;
    int locations = 2;  // per city; l{c}-0 is the airport
    int min_packages = 1;
    int max_packages = 3;
    int airplanes = 1;
    GenCommon common;
};

struct GridGenConfig {
    int rooms = 2;
    int width = 2;
    int height = 2;
    int keys = 1;
    int shapes = 1;
    GenCommon common;
};

GenResult create_dataset_bw(const BwGenConfig& config);
GenResult create_dataset_logistics(const LogisticsGenConfig& config);
GenResult create_dataset_minigrid(const GridGenConfig& config);

// Single-instance builders used by the dataset generators.
Problem random_logistics_problem(const LogisticsGenConfig& config, int packages, Rng& rng);
Problem random_grid_problem(const GridGenConfig& config, Rng& rng);
// Grid layout without keys/robot/goal randomisation (for inspection and tests).
struct GridLayout {
    int num_places = 0;
    std::vector<int> locked;                          // corridor cells
    std::vector<std::pair<int, int>> conn;            // in emission order
    std::vector<std::vector<int>> room_cells;
};
GridLayout grid_layout(int rooms, int width, int height);

struct SplitSpec {
    std::string name;
    std::size_t count = 0;
};

// Randomly assigns the named splits; records beyond the requested counts are
// tagged "unassigned". Throws std::invalid_argument when oversubscribed.
void split_dataset(std::vector<InstanceRecord>& records, const std::vector<SplitSpec>& splits, std::uint64_t seed);

std::map<std::string, std::size_t> split_counts(const std::vector<InstanceRecord>& records);

// Unique key of a record's task: domain, init set and goal set.
std::string task_key(DomainId domain, const Problem& problem);

}  // namespace planbench
