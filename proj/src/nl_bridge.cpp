#include "planbench/nl_bridge.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>

namespace planbench {

namespace {

struct Template {
    std::string_view name;
    std::size_t arity;
    std::string_view text;  // "{i}" marks the i-th argument
};

// clang-format off
constexpr std::array kBlocksworldAtoms{
    Template{"on", 2, "{0} is on {1}."},
    Template{"handempty", 0, "The hand is empty."},
    Template{"ontable", 1, "{0} is on the table."},
    Template{"clear", 1, "{0} is clear."},
    Template{"holding", 1, "The hand is holding {0}."},
};
constexpr std::array kBlocksworldActions{
    Template{"unstack", 2, "Unstack {0} from {1}."},
    Template{"put-down", 1, "Put down {0}."},
    Template{"pick-up", 1, "Pick up {0}."},
    Template{"stack", 2, "Stack {0} on {1}."},
};
// Accepted on input only (phrasings seen in example NL plans).
constexpr std::array kBlocksworldAliases{
    Template{"put-down", 1, "Putdown {0} on the table."},
    Template{"pick-up", 1, "Pickup {0} from the table."},
};

constexpr std::array kLogisticsAtoms{
    Template{"airplane", 1, "{0} is an AIRPLANE."},
    Template{"city", 1, "{0} is a CITY."},
    Template{"truck", 1, "{0} is a TRUCK."},
    Template{"location", 1, "{0} is a LOCATION."},
    Template{"airport", 1, "{0} is an AIRPORT."},
    Template{"obj", 1, "{0} is an OBJ."},
    Template{"at", 2, "{0} is at {1}."},
    Template{"in", 2, "{0} is in {1}."},
    Template{"in-city", 2, "{0} is in the city {1}."},
};
constexpr std::array kLogisticsActions{
    Template{"drive-truck", 4, "Drive truck {0} from {1} to {2} in {3}."},
    Template{"load-truck", 3, "Load {0} into truck {1} at {2}."},
    Template{"unload-truck", 3, "Unload {0} from truck {1} in {2}."},
    Template{"fly-airplane", 3, "Fly airplane {0} from {1} to {2}."},
    Template{"load-airplane", 3, "Load {0} into airplane {1} at {2}."},
    Template{"unload-airplane", 3, "Unload {0} from airplane {1} at {2}."},
};

constexpr std::array kGridAtoms{
    Template{"conn", 2, "{0} and {1} are connected."},
    Template{"lock-shape", 2, "The lock {0} is {1} shaped."},
    Template{"key-shape", 2, "The key {0} is {1} shaped."},
    Template{"arm-empty", 0, "The arm is empty."},
    Template{"open", 1, "{0} is OPEN."},
    Template{"locked", 1, "{0} is LOCKED."},
    Template{"at-robot", 1, "Robot is at {0}."},
    Template{"at", 2, "{0} is at {1}."},
    Template{"place", 1, "{0} is a place."},
    Template{"shape", 1, "{0} is a shape."},
    Template{"key", 1, "{0} is a key."},
    Template{"holding", 1, "The arm is holding {0}."},
};
constexpr std::array kGridActions{
    Template{"move", 2, "Move from {0} to {1}."},
    Template{"pickup", 2, "Pickup {0} at {1}."},
    Template{"unlock", 4, "Unlock {0} at {1} using {2}, which has {3}."},
    Template{"pickup-and-loose", 3, "At {0}, pick up {1} and lose {2}."},
};
// clang-format on

std::span<const Template> atom_templates(DomainId d) {
    switch (d) {
        case DomainId::blocksworld: return kBlocksworldAtoms;
        case DomainId::logistics: return kLogisticsAtoms;
        case DomainId::grid: return kGridAtoms;
    }
    return {};
}

std::span<const Template> action_templates(DomainId d) {
    switch (d) {
        case DomainId::blocksworld: return kBlocksworldActions;
        case DomainId::logistics: return kLogisticsActions;
        case DomainId::grid: return kGridActions;
    }
    return {};
}

const Template* find(std::span<const Template> table, const std::string& name, std::size_t arity) {
    for (const auto& t : table)
        if (t.name == name && t.arity == arity) return &t;
    return nullptr;
}

std::string fill(std::string_view text, const std::vector<std::string>& args) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '{' && i + 2 < text.size() && text[i + 2] == '}') {
            out += args[static_cast<std::size_t>(text[i + 1] - '0')];
            i += 2;
        } else {
            out += text[i];
        }
    }
    return out;
}

struct Pattern {
    std::string action;
    std::vector<std::size_t> slots;  // capture group k fills argument slots[k]
    std::size_t arity;
    std::regex re;
};

std::string escape(char c) {
    static const std::string_view kSpecial = R"(\^$.|?*+()[]{})";
    return kSpecial.find(c) == std::string_view::npos ? std::string(1, c) : std::string("\\") + c;
}

Pattern compile(const Template& t, MatchMode mode) {
    Pattern p{std::string(t.name), {}, t.arity, {}};
    const bool tolerant = mode == MatchMode::tolerant;
    std::string re = tolerant ? R"(^\s*)" : "^";
    std::string_view text = t.text;
    if (!text.empty() && text.back() == '.') text.remove_suffix(1);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '{' && i + 2 < text.size() && text[i + 2] == '}') {
            p.slots.push_back(static_cast<std::size_t>(text[i + 1] - '0'));
            re += R"(([A-Za-z0-9_\-]+))";
            i += 2;
        } else if (tolerant && text[i] == ' ') {
            re += R"(\s+)";
        } else if (tolerant && text[i] == ',') {
            re += R"(\s*,)";
        } else {
            re += escape(text[i]);
        }
    }
    re += tolerant ? R"(\s*\.?\s*$)" : R"(\.$)";
    auto flags = std::regex::ECMAScript | std::regex::optimize;
    if (tolerant) flags |= std::regex::icase;
    p.re = std::regex(re, flags);
    return p;
}

const std::vector<Pattern>& patterns(DomainId d, MatchMode mode) {
    static const auto kTables = [] {
        std::array<std::array<std::vector<Pattern>, 2>, 3> tables;
        for (DomainId id : kAllDomains) {
            for (MatchMode m : {MatchMode::strict, MatchMode::tolerant}) {
                auto& out = tables[static_cast<std::size_t>(id)][static_cast<std::size_t>(m)];
                for (const auto& t : action_templates(id)) out.push_back(compile(t, m));
                if (id == DomainId::blocksworld && m == MatchMode::tolerant)
                    for (const auto& t : kBlocksworldAliases) out.push_back(compile(t, m));
            }
        }
        return tables;
    }();
    return kTables[static_cast<std::size_t>(d)][static_cast<std::size_t>(mode)];
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool is_done(std::string_view sentence) {
    std::string s = trim(sentence);
    while (!s.empty() && (s.back() == '.' || s.back() == '!')) s.pop_back();
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s == "done";
}

// Removes markdown emphasis/code marks and a leading list marker.
std::string clean_line(std::string_view line) {
    std::string out;
    for (char c : line)
        if (c != '*' && c != '`' && c != '\r') out += c;
    static const std::regex kMarker(R"(^\s*(?:[-+]|\d+[.)])\s+)");
    return std::regex_replace(out, kMarker, "", std::regex_constants::format_first_only);
}

// A sentence ends at a period followed by whitespace or the end of line.
std::vector<std::string> split_sentences(std::string_view text, MatchMode mode) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::string line(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
        if (mode == MatchMode::tolerant) line = clean_line(line);
        std::size_t s = 0;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '.' && (i + 1 == line.size() || std::isspace(static_cast<unsigned char>(line[i + 1])))) {
                std::string sentence = trim(std::string_view(line).substr(s, i + 1 - s));
                if (!sentence.empty()) out.push_back(sentence);
                s = i + 1;
            }
        }
        std::string rest = trim(std::string_view(line).substr(std::min(s, line.size())));
        if (!rest.empty()) out.push_back(rest);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return out;
}

}  // namespace

std::string atom_to_nl(DomainId domain, const GroundAtom& atom) {
    const Template* t = find(atom_templates(domain), atom.predicate, atom.args.size());
    if (!t) throw VocabularyError("no sentence template for atom " + to_string(atom));
    return fill(t->text, atom.args);
}

std::string action_to_nl(DomainId domain, const GroundAction& action) {
    const Template* t = find(action_templates(domain), action.name, action.args.size());
    if (!t) throw VocabularyError("no sentence template for action " + to_string(action));
    return fill(t->text, action.args);
}

std::string problem_to_nl(const Problem& problem) {
    const auto domain = domain_from_name(problem.domain_name);
    if (!domain) throw VocabularyError("no sentence templates for domain " + problem.domain_name);
    std::string out = "The initial state:\n";
    std::string line;
    std::string subject;
    for (const auto& atom : problem.init) {
        const std::string sentence = atom_to_nl(*domain, atom);
        const bool joins = !line.empty() && !atom.args.empty() && atom.args[0] == subject;
        if (joins) {
            line += " " + sentence;
        } else {
            if (!line.empty()) out += line + "\n";
            line = sentence;
        }
        subject = atom.args.empty() ? std::string() : atom.args[0];
    }
    if (!line.empty()) out += line + "\n";
    out += "The goal is:";
    for (const auto& atom : problem.goal) out += " " + atom_to_nl(*domain, atom);
    return out + "\n";
}

std::string plan_to_nl(DomainId domain, const Plan& plan) {
    std::string out;
    for (const auto& s : plan.steps) out += action_to_nl(domain, s) + "\n";
    return out;
}

NlPlanResult nl_plan_to_pddl(std::string_view text, DomainId domain, MatchMode mode) {
    NlPlanResult result;
    const auto& pats = patterns(domain, mode);
    const auto sentences = split_sentences(text, mode);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const std::string& sentence = sentences[i];
        if (is_done(sentence)) break;
        std::smatch m;
        bool matched = false;
        for (const auto& p : pats) {
            if (!std::regex_match(sentence, m, p.re)) continue;
            GroundAction step{p.action, std::vector<std::string>(p.arity)};
            for (std::size_t k = 0; k < p.slots.size(); ++k) step.args[p.slots[k]] = m[k + 1].str();
            result.plan.steps.push_back(std::move(step));
            matched = true;
            break;
        }
        if (!matched) result.errors.push_back({i, sentence, "no action template matched"});
    }
    return result;
}

}  // namespace planbench
