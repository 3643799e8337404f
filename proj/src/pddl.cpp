#include "planbench/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace planbench {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_variable(std::string_view term) { return !term.empty() && term.front() == '?'; }

// Minimal s-expression reader with source positions.
struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    SExpr read_document() {
        skip_space();
        if (at_end()) throw ParseError("empty input", line_, col_);
        SExpr expr = read();
        skip_space();
        if (!at_end()) throw ParseError("trailing input after top-level form", line_, col_);
        return expr;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (!at_end()) {
            char c = text_[pos_];
            if (c == ';') {
                while (!at_end() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        SExpr expr;
        expr.line = line_;
        expr.column = col_;
        char c = text_[pos_];
        if (c == ')') throw ParseError("unexpected ')'", line_, col_);
        if (c == '(') {
            expr.is_list = true;
            advance();
            for (;;) {
                skip_space();
                if (at_end()) throw ParseError("unterminated list opened here", expr.line, expr.column);
                if (text_[pos_] == ')') {
                    advance();
                    break;
                }
                expr.items.push_back(read());
            }
            return expr;
        }
        std::size_t start = pos_;
        while (!at_end()) {
            char d = text_[pos_];
            if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
            advance();
        }
        expr.atom = std::string(text_.substr(start, pos_ - start));
        return expr;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

[[noreturn]] void fail(const SExpr& at, const std::string& what) {
    throw ParseError(what, at.line, at.column);
}

[[noreturn]] void unsupported(const SExpr& at, const std::string& what) {
    throw UnsupportedConstruct(what, at.line, at.column);
}

const std::string& expect_symbol(const SExpr& e, const char* what) {
    if (e.is_list) fail(e, std::string("expected ") + what);
    return e.atom;
}

bool is_keyword(const SExpr& e, std::string_view kw) {
    return !e.is_list && lower(e.atom) == kw;
}

const std::unordered_set<std::string>& unsupported_connectives() {
    static const std::unordered_set<std::string> kSet{"not", "or", "imply", "exists", "forall",
                                                      "when", "=", "increase", "decrease"};
    return kSet;
}

// Parses "(pred arg ...)" with the predicate lowercased and args verbatim.
GroundAtom read_atom(const SExpr& e) {
    if (!e.is_list || e.items.empty()) fail(e, "expected an atom");
    const std::string head = lower(expect_symbol(e.items.front(), "predicate name"));
    if (unsupported_connectives().count(head)) unsupported(e, "'" + head + "' is outside the STRIPS subset");
    if (head == "and") fail(e, "nested 'and' is not an atom");
    GroundAtom atom;
    atom.predicate = head;
    for (std::size_t i = 1; i < e.items.size(); ++i) atom.args.push_back(expect_symbol(e.items[i], "term"));
    return atom;
}

std::vector<SExpr> conjuncts(const SExpr& e) {
    if (!e.is_list) fail(e, "expected a formula");
    if (!e.items.empty() && is_keyword(e.items.front(), "and"))
        return {e.items.begin() + 1, e.items.end()};
    if (e.items.empty()) return {};
    return {e};
}

const SExpr& expect_define(const SExpr& root) {
    if (!root.is_list || root.items.empty() || !is_keyword(root.items.front(), "define"))
        fail(root, "expected (define ...)");
    return root;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : PddlError(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

PlanSyntaxError::PlanSyntaxError(const std::string& what, std::size_t line)
    : PddlError(what + " at line " + std::to_string(line)), line_(line) {}

const ActionSchema* Domain::find_action(std::string_view name) const {
    for (const auto& a : actions)
        if (a.name == name) return &a;
    return nullptr;
}

const Predicate* Domain::find_predicate(std::string_view name) const {
    for (const auto& p : predicates)
        if (p.name == name) return &p;
    return nullptr;
}

std::string to_string(const GroundAtom& atom) {
    std::string out = "(" + atom.predicate;
    for (const auto& a : atom.args) out += " " + a;
    return out + ")";
}

std::string to_string(const GroundAction& action) {
    std::string out = "(" + action.name;
    for (const auto& a : action.args) out += " " + a;
    return out + ")";
}

std::string to_string(const State& state) {
    std::string out;
    for (const auto& atom : state) {
        if (!out.empty()) out += ' ';
        out += to_string(atom);
    }
    return out;
}

Problem parse_problem(std::string_view text) {
    Reader reader(text);
    const SExpr root = reader.read_document();
    expect_define(root);
    if (root.items.size() < 2) fail(root, "missing (problem <name>)");

    Problem problem;
    const SExpr& header = root.items[1];
    if (!header.is_list || header.items.size() != 2 || !is_keyword(header.items[0], "problem"))
        fail(header, "expected (problem <name>)");
    problem.name = expect_symbol(header.items[1], "problem name");

    std::unordered_map<std::string, const SExpr*> atom_sites;
    std::set<GroundAtom> seen;
    bool have_goal = false;
    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const SExpr& section = root.items[i];
        if (!section.is_list || section.items.empty()) fail(section, "expected a section");
        const std::string key = lower(expect_symbol(section.items.front(), "section keyword"));
        if (key == ":domain") {
            if (section.items.size() != 2) fail(section, "expected (:domain <name>)");
            problem.domain_name = expect_symbol(section.items[1], "domain name");
        } else if (key == ":objects") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                const std::string& obj = expect_symbol(section.items[j], "object name");
                if (obj == "-") unsupported(section.items[j], "typed objects are not supported");
                if (std::find(problem.objects.begin(), problem.objects.end(), obj) != problem.objects.end())
                    fail(section.items[j], "duplicate object '" + obj + "'");
                problem.objects.push_back(obj);
            }
        } else if (key == ":init") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                GroundAtom atom = read_atom(section.items[j]);
                if (seen.insert(atom).second) {
                    atom_sites[to_string(atom)] = &section.items[j];
                    problem.init.push_back(std::move(atom));
                }
            }
        } else if (key == ":goal") {
            if (section.items.size() != 2) fail(section, "expected exactly one goal formula");
            for (const SExpr& c : conjuncts(section.items[1])) {
                GroundAtom atom = read_atom(c);
                if (std::find(problem.goal.begin(), problem.goal.end(), atom) == problem.goal.end()) {
                    atom_sites[to_string(atom)] = &c;
                    problem.goal.push_back(std::move(atom));
                }
            }
            have_goal = true;
        } else if (key == ":requirements" || key == ":metric" || key == ":constraints") {
            unsupported(section, "section '" + key + "' is not supported");
        } else {
            fail(section, "unknown section '" + key + "'");
        }
    }
    if (!have_goal) fail(root, "missing (:goal ...)");

    const std::unordered_set<std::string> declared(problem.objects.begin(), problem.objects.end());
    auto check = [&](const GroundAtom& atom) {
        for (const auto& arg : atom.args)
            if (!declared.count(arg)) fail(*atom_sites[to_string(atom)], "undeclared object '" + arg + "'");
    };
    for (const auto& a : problem.init) check(a);
    for (const auto& a : problem.goal) check(a);
    return problem;
}

Domain parse_domain(std::string_view text) {
    Reader reader(text);
    const SExpr root = reader.read_document();
    expect_define(root);
    if (root.items.size() < 2) fail(root, "missing (domain <name>)");
    const SExpr& header = root.items[1];
    if (!header.is_list || header.items.size() != 2 || !is_keyword(header.items[0], "domain"))
        fail(header, "expected (domain <name>)");

    Domain domain;
    domain.name = expect_symbol(header.items[1], "domain name");

    auto lifted = [](const SExpr& e) {
        GroundAtom a = read_atom(e);
        return LiftedAtom{a.predicate, a.args};
    };

    for (std::size_t i = 2; i < root.items.size(); ++i) {
        const SExpr& section = root.items[i];
        if (!section.is_list || section.items.empty()) fail(section, "expected a section");
        const std::string key = lower(expect_symbol(section.items.front(), "section keyword"));
        if (key == ":requirements") {
            for (std::size_t j = 1; j < section.items.size(); ++j)
                if (lower(expect_symbol(section.items[j], "requirement")) != ":strips")
                    unsupported(section.items[j], "only the :strips requirement is supported");
        } else if (key == ":predicates") {
            for (std::size_t j = 1; j < section.items.size(); ++j) {
                const SExpr& p = section.items[j];
                if (!p.is_list || p.items.empty()) fail(p, "expected a predicate declaration");
                Predicate pred{lower(expect_symbol(p.items[0], "predicate name")), p.items.size() - 1};
                for (std::size_t k = 1; k < p.items.size(); ++k)
                    if (expect_symbol(p.items[k], "parameter") == "-")
                        unsupported(p.items[k], "typed parameters are not supported");
                domain.predicates.push_back(pred);
            }
        } else if (key == ":action") {
            if (section.items.size() < 2) fail(section, "missing action name");
            ActionSchema action;
            action.name = lower(expect_symbol(section.items[1], "action name"));
            for (std::size_t j = 2; j < section.items.size(); j += 2) {
                if (j + 1 >= section.items.size()) fail(section.items[j], "dangling action field");
                const std::string field = lower(expect_symbol(section.items[j], "action field"));
                const SExpr& value = section.items[j + 1];
                if (field == ":parameters") {
                    if (!value.is_list) fail(value, "expected a parameter list");
                    for (const auto& p : value.items) {
                        const std::string& name = expect_symbol(p, "parameter");
                        if (name == "-") unsupported(p, "typed parameters are not supported");
                        if (!is_variable(name)) fail(p, "parameters must start with '?'");
                        action.params.push_back(name);
                    }
                } else if (field == ":precondition") {
                    for (const SExpr& c : conjuncts(value)) action.preconditions.push_back(lifted(c));
                } else if (field == ":effect") {
                    for (const SExpr& c : conjuncts(value)) {
                        if (c.is_list && !c.items.empty() && is_keyword(c.items[0], "not")) {
                            if (c.items.size() != 2) fail(c, "malformed negative effect");
                            action.delete_effects.push_back(lifted(c.items[1]));
                        } else {
                            action.add_effects.push_back(lifted(c));
                        }
                    }
                } else {
                    unsupported(section.items[j], "action field '" + field + "' is not supported");
                }
            }
            domain.actions.push_back(std::move(action));
        } else if (key == ":types" || key == ":constants" || key == ":functions") {
            unsupported(section, "section '" + key + "' is not supported");
        } else {
            fail(section, "unknown section '" + key + "'");
        }
    }
    check_domain(domain);
    return domain;
}

void check_domain(const Domain& domain) {
    std::map<std::string, std::size_t> arity;
    for (const auto& p : domain.predicates) {
        if (p.name.empty()) throw DomainError("empty predicate name");
        if (!arity.emplace(p.name, p.arity).second) throw DomainError("duplicate predicate '" + p.name + "'");
    }
    std::set<std::string> names;
    for (const auto& a : domain.actions) {
        if (!names.insert(a.name).second) throw DomainError("duplicate action '" + a.name + "'");
        const std::set<std::string> params(a.params.begin(), a.params.end());
        if (params.size() != a.params.size()) throw DomainError("duplicate parameter in '" + a.name + "'");
        auto check = [&](const LiftedAtom& atom) {
            auto it = arity.find(atom.predicate);
            if (it == arity.end())
                throw DomainError("action '" + a.name + "' uses undeclared predicate '" + atom.predicate + "'");
            if (it->second != atom.terms.size())
                throw DomainError("arity mismatch for '" + atom.predicate + "' in '" + a.name + "'");
            for (const auto& t : atom.terms)
                if (is_variable(t) && !params.count(t))
                    throw DomainError("unbound variable " + t + " in '" + a.name + "'");
        };
        for (const auto& x : a.preconditions) check(x);
        for (const auto& x : a.add_effects) check(x);
        for (const auto& x : a.delete_effects) check(x);
        for (const auto& x : a.add_effects)
            if (std::find(a.delete_effects.begin(), a.delete_effects.end(), x) != a.delete_effects.end())
                throw DomainError("atom both added and deleted in '" + a.name + "'");
    }
}

void check_problem(const Problem& problem) {
    const std::unordered_set<std::string> declared(problem.objects.begin(), problem.objects.end());
    auto check = [&](const GroundAtom& atom) {
        for (const auto& arg : atom.args)
            if (!declared.count(arg))
                throw PddlError("atom " + to_string(atom) + " uses undeclared object '" + arg + "'");
    };
    for (const auto& a : problem.init) check(a);
    for (const auto& a : problem.goal) check(a);
}

Plan parse_plan(std::string_view text) {
    Plan plan;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) {
            if (eol == text.size()) break;
            continue;
        }
        line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
        const std::string low = lower(line);
        if (low == "done." || low == "done") break;

        std::size_t i = 0;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            if (line[i] != '(') throw PlanSyntaxError("malformed step '" + std::string(line) + "'", line_no);
            const std::size_t close = line.find(')', i);
            if (close == std::string_view::npos)
                throw PlanSyntaxError("unterminated step '" + std::string(line) + "'", line_no);
            std::string_view body = line.substr(i + 1, close - i - 1);
            GroundAction step;
            std::size_t j = 0;
            while (j < body.size()) {
                while (j < body.size() && std::isspace(static_cast<unsigned char>(body[j]))) ++j;
                std::size_t k = j;
                while (k < body.size() && !std::isspace(static_cast<unsigned char>(body[k]))) ++k;
                if (k > j) {
                    std::string_view tok = body.substr(j, k - j);
                    if (tok.find('(') != std::string_view::npos)
                        throw PlanSyntaxError("nested parenthesis in step", line_no);
                    if (step.name.empty())
                        step.name = lower(tok);
                    else
                        step.args.emplace_back(tok);
                }
                j = k;
            }
            if (step.name.empty()) throw PlanSyntaxError("empty step", line_no);
            plan.steps.push_back(std::move(step));
            i = close + 1;
        }
        if (eol == text.size()) break;
    }
    return plan;
}

std::string render_plan(const Plan& plan, bool terminate) {
    std::string out;
    for (const auto& s : plan.steps) out += to_string(s) + "\n";
    if (terminate) out += "done.\n";
    return out;
}

State initial_state(const Problem& problem) { return State(problem.init.begin(), problem.init.end()); }

GroundedAction instantiate(const Domain& domain, const GroundAction& action) {
    const ActionSchema* schema = domain.find_action(action.name);
    if (!schema) throw ActionError("unknown action '" + action.name + "'");
    if (schema->params.size() != action.args.size())
        throw ActionError("action '" + action.name + "' expects " + std::to_string(schema->params.size()) +
                          " arguments, got " + std::to_string(action.args.size()));

    auto bind = [&](const LiftedAtom& lifted) {
        GroundAtom atom{lifted.predicate, {}};
        atom.args.reserve(lifted.terms.size());
        for (const auto& t : lifted.terms) {
            if (!is_variable(t)) {
                atom.args.push_back(t);
                continue;
            }
            auto it = std::find(schema->params.begin(), schema->params.end(), t);
            atom.args.push_back(action.args[static_cast<std::size_t>(it - schema->params.begin())]);
        }
        return atom;
    };

    GroundedAction g;
    for (const auto& a : schema->preconditions) g.preconditions.push_back(bind(a));
    for (const auto& a : schema->add_effects) g.add_effects.push_back(bind(a));
    for (const auto& a : schema->delete_effects) g.delete_effects.push_back(bind(a));
    return g;
}

StepResult step(const Domain& domain, const State& state, const GroundAction& action) {
    const GroundedAction g = instantiate(domain, action);
    for (std::size_t i = 0; i < g.preconditions.size(); ++i)
        if (!state.contains(g.preconditions[i])) return Inapplicable{i, g.preconditions[i]};
    State next = state;
    for (const auto& d : g.delete_effects) next.erase(d);
    for (const auto& a : g.add_effects) next.insert(a);
    return next;
}

bool holds(const State& state, std::span<const GroundAtom> goal) {
    return std::all_of(goal.begin(), goal.end(), [&](const GroundAtom& a) { return state.contains(a); });
}

}  // namespace planbench
