#include "planbench/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include "planbench/nl_bridge.hpp"

namespace planbench {

std::string to_string(Benchmark b) {
    switch (b) {
        case Benchmark::bw: return "bw";
        case Benchmark::logistics: return "logistics";
        case Benchmark::minigrid: return "minigrid";
        case Benchmark::trip: return "trip";
        case Benchmark::calendar: return "calendar";
    }
    return "?";
}

std::string to_string(Representation r) { return r == Representation::pddl ? "pddl" : "nl"; }

std::optional<Benchmark> benchmark_from_name(std::string_view name) {
    for (Benchmark b : {Benchmark::bw, Benchmark::logistics, Benchmark::minigrid, Benchmark::trip, Benchmark::calendar})
        if (name == to_string(b)) return b;
    if (auto d = domain_from_name(name)) {
        switch (*d) {
            case DomainId::blocksworld: return Benchmark::bw;
            case DomainId::logistics: return Benchmark::logistics;
            case DomainId::grid: return Benchmark::minigrid;
        }
    }
    return std::nullopt;
}

std::optional<Representation> representation_from_name(std::string_view name) {
    if (name == "pddl") return Representation::pddl;
    if (name == "nl") return Representation::nl;
    return std::nullopt;
}

bool is_pddl_benchmark(Benchmark b) { return b != Benchmark::trip && b != Benchmark::calendar; }

DomainId benchmark_domain(Benchmark b) {
    switch (b) {
        case Benchmark::bw: return DomainId::blocksworld;
        case Benchmark::logistics: return DomainId::logistics;
        case Benchmark::minigrid: return DomainId::grid;
        default: throw std::invalid_argument(to_string(b) + " is not a PDDL benchmark");
    }
}

const std::string& item_id(const EvalItem& item) {
    return std::visit([](const auto& r) -> const std::string& { return r.id; }, item);
}

const std::string& item_split(const EvalItem& item) {
    return std::visit([](const auto& r) -> const std::string& { return r.split; }, item);
}

Benchmark item_benchmark(const EvalItem& item) {
    if (const auto* r = std::get_if<InstanceRecord>(&item)) return *benchmark_from_name(domain_key(r->domain));
    return std::get<NatRecord>(item).kind == NatKind::trip ? Benchmark::trip : Benchmark::calendar;
}

std::vector<EvalItem> read_items(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<EvalItem> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto j = nlohmann::json::parse(line);
        if (j.contains("kind"))
            out.emplace_back(nat_record_from_json(j));
        else
            out.emplace_back(record_from_json(j));
    }
    return out;
}

namespace {

constexpr std::string_view kHeader = "Please solve the problem:\n";
constexpr std::string_view kPlanCue = "Your plan as plain text without formatting:\n";

// Blank lines between problem and answer, and after an answer.
struct Layout {
    int before_answer;
    int after_answer;
};

Layout layout(Benchmark b) {
    switch (b) {
        case Benchmark::bw: return {1, 1};
        case Benchmark::logistics: return {2, 2};
        case Benchmark::minigrid: return {1, 1};
        case Benchmark::trip: return {2, 1};
        case Benchmark::calendar: return {3, 1};
    }
    return {1, 1};
}

std::string blank_lines(int n) { return std::string(static_cast<std::size_t>(n), '\n'); }

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Cuts at the first line starting with "done" and drops markdown fences.
std::string truncate_output(std::string_view raw) {
    std::string out;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t nl = raw.find('\n', pos);
        std::string_view line = raw.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        std::size_t first = line.find_first_not_of(" \t\r*");
        std::string_view body = first == std::string_view::npos ? std::string_view() : line.substr(first);
        if (lower(std::string(body.substr(0, 4))) == "done") break;
        const std::size_t done_at = lower(std::string(line)).find(" done.");
        if (done_at != std::string::npos) {
            out += std::string(line.substr(0, done_at)) + "\n";
            break;
        }
        if (body.substr(0, 3) != "```") out += std::string(line) + "\n";
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

}  // namespace

std::string problem_text(const EvalItem& item, Representation rep) {
    if (const auto* r = std::get_if<InstanceRecord>(&item)) {
        if (rep == Representation::pddl) return r->pddl;
        return r->nl.empty() ? problem_to_nl(r->problem) : r->nl;
    }
    return std::get<NatRecord>(item).prompt();
}

std::string answer_text(const EvalItem& item, Representation rep) {
    if (const auto* r = std::get_if<InstanceRecord>(&item)) {
        if (rep == Representation::pddl) return render_plan(r->plan);
        return plan_to_nl(r->domain, r->plan) + "done.\n";
    }
    return std::get<NatRecord>(item).golden();
}

std::string build_prompt(const EvalItem& test, std::span<const EvalItem* const> shots, Representation rep) {
    const Benchmark bench = item_benchmark(test);
    const bool pddl_like = is_pddl_benchmark(bench);
    if (!pddl_like && rep == Representation::pddl)
        throw std::invalid_argument(to_string(bench) + " items have no PDDL representation");
    const Layout lay = layout(bench);
    std::string out;
    for (const EvalItem* shot : shots) {
        if (item_id(*shot) == item_id(test))
            throw std::invalid_argument("test item " + item_id(test) + " appears among its own shots");
        if (item_benchmark(*shot) != bench) throw std::invalid_argument("shot " + item_id(*shot) + " is from another benchmark");
        out += kHeader;
        out += problem_text(*shot, rep);
        out += blank_lines(lay.before_answer);
        if (pddl_like) out += kPlanCue;
        out += answer_text(*shot, rep);
        out += blank_lines(lay.after_answer);
    }
    out += kHeader;
    out += problem_text(test, rep);
    if (pddl_like) {
        out += blank_lines(lay.before_answer);
        out += kPlanCue;
    }
    return out;
}

ExtractedAnswer extract_answer(std::string_view raw, Benchmark benchmark, Representation rep) {
    ExtractedAnswer out;
    out.text = truncate_output(raw);
    if (!is_pddl_benchmark(benchmark)) return out;
    if (rep == Representation::pddl) {
        std::string cleaned;
        for (char c : out.text)
            if (c != '`' && c != '*') cleaned += c;
        try {
            out.plan = parse_plan(cleaned);
        } catch (const PlanSyntaxError& e) {
            out.errors.push_back(e.what());
        }
        return out;
    }
    NlPlanResult r = nl_plan_to_pddl(out.text, benchmark_domain(benchmark), MatchMode::tolerant);
    for (const auto& d : r.errors) out.errors.push_back("sentence " + std::to_string(d.sentence) + " '" + d.text + "': " + d.message);
    if (r.errors.empty()) out.plan = std::move(r.plan);
    return out;
}

Score score_output(const EvalItem& item, Representation rep, std::string_view raw) {
    Score s;
    const Benchmark bench = item_benchmark(item);
    ExtractedAnswer a = extract_answer(raw, bench, rep);
    s.extracted = a.text;
    if (const auto* r = std::get_if<InstanceRecord>(&item)) {
        if (!a.plan) {
            s.detail = a.errors.empty() ? "no plan" : a.errors.front();
            return s;
        }
        s.extracted = render_plan(*a.plan);
        const Verdict v = validate(builtin_domain(r->domain), r->problem, *a.plan);
        s.valid = v.valid;
        s.detail = describe(v);
        return s;
    }
    const NatRecord& n = std::get<NatRecord>(item);
    s.valid = n.verify(a.text);
    s.detail = s.valid ? "answer accepted" : "answer rejected";
    return s;
}

}  // namespace planbench
