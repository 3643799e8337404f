// PDDL text rendering. Problem layouts follow the formatting of the
// benchmark generators for each embedded domain.

#include "planbench/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

namespace planbench {

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

// Predicates the logistics generator writes in upper case.
bool logistics_upper(const std::string& predicate) {
    static const char* const kUpper[] = {"airplane", "city", "truck", "location", "airport", "obj"};
    return std::any_of(std::begin(kUpper), std::end(kUpper), [&](const char* p) { return predicate == p; });
}

using Casing = std::function<std::string(const std::string&)>;

Casing casing_for(const std::string& domain_name) {
    if (domain_name == "logistics-strips")
        return [](const std::string& p) { return logistics_upper(p) ? upper(p) : p; };
    return [](const std::string& p) { return p; };
}

std::string atom_text(const GroundAtom& atom, const Casing& casing) {
    std::string out = "(" + casing(atom.predicate);
    for (const auto& a : atom.args) out += " " + a;
    return out + ")";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// Groups consecutive items with equal keys onto one line.
template <typename T, typename KeyFn, typename TextFn>
std::vector<std::string> grouped_lines(const std::vector<T>& items, KeyFn key, TextFn text,
                                       const std::string& sep) {
    std::vector<std::string> lines;
    std::vector<std::string> current;
    std::string current_key;
    for (const auto& item : items) {
        std::string k = key(item);
        if (!current.empty() && k != current_key) {
            lines.push_back(join(current, sep));
            current.clear();
        }
        current_key = k;
        current.push_back(text(item));
    }
    if (!current.empty()) lines.push_back(join(current, sep));
    return lines;
}

// Type predicate (unary, from init) declaring each object, if any.
std::map<std::string, std::string> object_types(const Problem& p, const std::vector<std::string>& type_preds) {
    std::map<std::string, std::string> types;
    for (const auto& atom : p.init) {
        if (atom.args.size() != 1) continue;
        if (std::find(type_preds.begin(), type_preds.end(), atom.predicate) == type_preds.end()) continue;
        types.emplace(atom.args[0], atom.predicate);
    }
    return types;
}

std::string render_plain(const Problem& p) {
    const Casing casing = casing_for(p.domain_name);
    std::string out = "(define (problem " + p.name + ")\n";
    out += "(:domain " + p.domain_name + ")\n";
    out += p.objects.empty() ? "(:objects)\n" : "(:objects " + join(p.objects, " ") + ")\n";
    out += "(:init\n";
    for (const auto& a : p.init) out += atom_text(a, casing) + "\n";
    out += ")\n(:goal (and\n";
    for (const auto& a : p.goal) out += atom_text(a, casing) + "\n";
    out += "))\n)\n";
    return out;
}

std::string render_logistics(const Problem& p) {
    const Casing casing = casing_for(p.domain_name);
    const auto types = object_types(p, {"airplane", "city", "truck", "location", "obj"});
    auto type_of = [&](const std::string& obj) {
        auto it = types.find(obj);
        return it == types.end() ? std::string() : it->second;
    };

    std::string out = "(define (problem " + p.name + ")\n";
    out += "(:domain " + p.domain_name + ")\n";
    out += "(:objects \n";
    for (const auto& line : grouped_lines(p.objects, type_of, [](const std::string& o) { return o; }, " "))
        out += line + "\n";
    out += ")\n(:init\n";

    // A location line also carries its in-city atom; "at" atoms are grouped
    // by the kind of object being placed.
    std::vector<std::string> lines;
    std::string last_key;
    std::string last_location;
    for (const auto& atom : p.init) {
        const std::string text = atom_text(atom, casing);
        const std::string first = atom.args.empty() ? std::string() : atom.args[0];
        if (atom.predicate == "in-city" && !lines.empty() && !last_location.empty() && first == last_location) {
            lines.back() += text;
            last_key.clear();
            last_location.clear();
            continue;
        }
        std::string key = atom.predicate;
        if (atom.predicate == "at") key += ":" + type_of(first);
        if (!lines.empty() && key == last_key && key != "location")
            lines.back() += " " + text;
        else
            lines.push_back(text);
        last_key = key;
        last_location = atom.predicate == "location" ? first : std::string();
    }
    for (const auto& line : lines) out += "  " + line + "\n";
    out += ")\n(:goal\n  (and\n";
    for (const auto& a : p.goal) out += "    " + atom_text(a, casing) + "\n";
    out += "  )\n)\n)\n";
    return out;
}

const char* grid_section(const std::string& predicate) {
    if (predicate == "place" || predicate == "shape" || predicate == "key") return "Object types";
    if (predicate == "open" || predicate == "locked") return "Open/locked cells";
    if (predicate == "conn") return "Connected cells";
    if (predicate == "lock-shape" || predicate == "key-shape") return "Lock and key shapes";
    if (predicate == "at") return "Key placement";
    return "Robot placement";
}

bool grid_shares_line(const std::string& predicate) {
    return predicate == "place" || predicate == "shape" || predicate == "key" || predicate == "open" ||
           predicate == "locked";
}

std::string render_grid(const Problem& p) {
    const Casing casing = casing_for(p.domain_name);
    const auto types = object_types(p, {"place", "shape", "key"});
    auto type_of = [&](const std::string& obj) {
        auto it = types.find(obj);
        return it == types.end() ? std::string() : it->second;
    };

    std::string out = "(define (problem " + p.name + ")\n";
    out += "  (:domain " + p.domain_name + ")\n";
    out += "  (:objects\n";
    for (const auto& line : grouped_lines(p.objects, type_of, [](const std::string& o) { return o; }, " "))
        out += "    " + line + "\n";
    out += "  )\n  (:init\n";

    const char* section = nullptr;
    std::string line;
    std::string line_pred;
    auto flush = [&] {
        if (!line.empty()) out += "    " + line + "\n";
        line.clear();
    };
    for (const auto& atom : p.init) {
        const char* s = grid_section(atom.predicate);
        if (section == nullptr || std::string(section) != s) {
            flush();
            out += std::string("    ; ") + s + "\n";
            section = s;
        }
        const std::string text = atom_text(atom, casing);
        if (!line.empty() && grid_shares_line(atom.predicate) && atom.predicate == line_pred) {
            line += " " + text;
        } else {
            flush();
            line = text;
        }
        line_pred = atom.predicate;
    }
    flush();
    out += "  )\n";
    if (p.goal.size() == 1) {
        out += "  (:goal " + atom_text(p.goal[0], casing) + ")\n";
    } else {
        std::vector<std::string> parts;
        for (const auto& a : p.goal) parts.push_back(atom_text(a, casing));
        out += "  (:goal (and" + (parts.empty() ? std::string() : " " + join(parts, " ")) + "))\n";
    }
    out += ")\n";
    return out;
}

std::string lifted_text(const LiftedAtom& atom, const Casing& casing) {
    std::string out = "(" + casing(atom.predicate);
    for (const auto& t : atom.terms) out += " " + t;
    return out + ")";
}

}  // namespace

std::string render_problem(const Problem& problem) {
    if (problem.domain_name == "logistics-strips") return render_logistics(problem);
    if (problem.domain_name == "grid") return render_grid(problem);
    return render_plain(problem);
}

std::string render_domain(const Domain& domain) {
    const Casing casing = casing_for(domain.name);
    std::string out = "(define (domain " + domain.name + ")\n";
    out += "  (:requirements :strips)\n";
    out += "  (:predicates";
    for (const auto& p : domain.predicates) {
        out += "\n    (" + casing(p.name);
        for (std::size_t i = 0; i < p.arity; ++i) out += " ?x" + std::to_string(i + 1);
        out += ")";
    }
    out += ")\n";
    for (const auto& a : domain.actions) {
        out += "\n  (:action " + a.name + "\n";
        out += "    :parameters (" + join(a.params, " ") + ")\n";
        std::vector<std::string> pre;
        for (const auto& x : a.preconditions) pre.push_back(lifted_text(x, casing));
        out += "    :precondition (and " + join(pre, " ") + ")\n";
        std::vector<std::string> eff;
        for (const auto& x : a.add_effects) eff.push_back(lifted_text(x, casing));
        for (const auto& x : a.delete_effects) eff.push_back("(not " + lifted_text(x, casing) + ")");
        out += "    :effect (and " + join(eff, " ") + "))\n";
    }
    out += ")\n";
    return out;
}

}  // namespace planbench
