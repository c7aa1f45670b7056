#include "pgsat/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pgsat/errors.hpp"

namespace pgsat {

namespace {

struct SExpr {
    bool is_list = false;
    std::string token;
    std::vector<SExpr> items;
    int line = 0;
    int column = 0;

    bool is(std::string_view s) const { return !is_list && token == s; }
    const std::string& head() const;
};

[[noreturn]] void fail(const SExpr& e, const std::string& what) { throw ParseError(what, e.line, e.column); }

const std::string& SExpr::head() const {
    if (!is_list || items.empty() || items[0].is_list)
        fail(*this, "expected a list starting with a symbol");
    return items[0].token;
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    SExpr read_document() {
        skip();
        if (pos_ >= text_.size()) throw ParseError("empty input", line_, col_);
        SExpr e = read();
        skip();
        if (pos_ < text_.size()) throw ParseError("trailing input after top-level expression", line_, col_);
        return e;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
        SExpr e;
        e.line = line_;
        e.column = col_;
        char c = text_[pos_];
        if (c == ')') throw ParseError("unexpected ')'", line_, col_);
        if (c == '(') {
            e.is_list = true;
            advance();
            for (;;) {
                skip();
                if (pos_ >= text_.size()) throw ParseError("unbalanced '('", e.line, e.column);
                if (text_[pos_] == ')') {
                    advance();
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        while (pos_ < text_.size()) {
            c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';') break;
            e.token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            advance();
        }
        return e;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// "a b - t c" style lists. Returns (name, type) with empty type for untyped.
std::vector<std::pair<std::string, std::string>> typed_list(const std::vector<SExpr>& items, std::size_t from) {
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<std::string> pending;
    for (std::size_t i = from; i < items.size(); ++i) {
        const SExpr& it = items[i];
        if (it.is_list) fail(it, "unexpected list in typed list");
        if (it.token == "-") {
            if (i + 1 >= items.size()) fail(it, "missing type after '-'");
            const SExpr& ty = items[++i];
            if (ty.is_list) {
                if (!ty.items.empty() && ty.items[0].is("either")) throw UnsupportedError("either types");
                fail(ty, "expected a type name");
            }
            if (pending.empty()) fail(it, "type without names");
            for (auto& n : pending) out.emplace_back(std::move(n), ty.token);
            pending.clear();
        } else {
            pending.push_back(it.token);
        }
    }
    for (auto& n : pending) out.emplace_back(std::move(n), std::string{});
    return out;
}

const std::set<std::string, std::less<>> kSupportedRequirements = {":strips", ":typing", ":equality"};

void check_requirements(const SExpr& section) {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
        const SExpr& r = section.items[i];
        if (r.is_list) fail(r, "malformed requirement");
        if (!kSupportedRequirements.contains(r.token)) throw UnsupportedError(r.token);
    }
}

struct RawAtom {
    const SExpr* where = nullptr;
    std::string pred;
    std::vector<std::string> args;
};

struct RawAction {
    const SExpr* where = nullptr;
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<RawAtom> pre, add, del;
};

struct RawDomain {
    std::string name;
    std::vector<std::pair<std::string, std::string>> types;
    std::vector<std::pair<std::string, std::string>> constants;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> predicates;
    std::vector<RawAction> actions;
};

RawAtom read_atom(const SExpr& e) {
    if (!e.is_list || e.items.empty()) fail(e, "expected an atom");
    const std::string& h = e.head();
    if (h == "=") throw UnsupportedError("equality preconditions");
    RawAtom a;
    a.where = &e;
    a.pred = h;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        if (e.items[i].is_list) fail(e.items[i], "nested term in atom");
        a.args.push_back(e.items[i].token);
    }
    return a;
}

void read_precondition(const SExpr& e, std::vector<RawAtom>& out) {
    if (!e.is_list) fail(e, "expected a precondition formula");
    if (e.items.empty()) return;
    const std::string& h = e.head();
    if (h == "and") {
        for (std::size_t i = 1; i < e.items.size(); ++i) read_precondition(e.items[i], out);
    } else if (h == "not") {
        throw UnsupportedError(":negative-preconditions");
    } else if (h == "or" || h == "imply" || h == "exists" || h == "forall") {
        throw UnsupportedError(":disjunctive-preconditions (" + h + ")");
    } else {
        out.push_back(read_atom(e));
    }
}

void read_effect(const SExpr& e, RawAction& act) {
    if (!e.is_list) fail(e, "expected an effect");
    if (e.items.empty()) return;
    const std::string& h = e.head();
    if (h == "and") {
        for (std::size_t i = 1; i < e.items.size(); ++i) read_effect(e.items[i], act);
    } else if (h == "not") {
        if (e.items.size() != 2) fail(e, "malformed negative effect");
        act.del.push_back(read_atom(e.items[1]));
    } else if (h == "when") {
        throw UnsupportedError(":conditional-effects");
    } else if (h == "forall") {
        throw UnsupportedError("universal effects");
    } else if (h == "increase" || h == "decrease" || h == "assign") {
        throw UnsupportedError(":action-costs");
    } else {
        act.add.push_back(read_atom(e));
    }
}

RawDomain read_domain(const SExpr& root) {
    if (root.head() != "define") fail(root, "expected (define ...)");
    RawDomain d;
    for (std::size_t i = 1; i < root.items.size(); ++i) {
        const SExpr& s = root.items[i];
        const std::string& h = s.head();
        if (h == "domain") {
            if (s.items.size() != 2) fail(s, "malformed domain name");
            d.name = s.items[1].token;
        } else if (h == ":requirements") {
            check_requirements(s);
        } else if (h == ":types") {
            d.types = typed_list(s.items, 1);
        } else if (h == ":constants") {
            d.constants = typed_list(s.items, 1);
        } else if (h == ":predicates") {
            for (std::size_t j = 1; j < s.items.size(); ++j) {
                const SExpr& p = s.items[j];
                d.predicates.emplace_back(p.head(), typed_list(p.items, 1));
            }
        } else if (h == ":action") {
            if (s.items.size() < 2 || s.items[1].is_list) fail(s, "action without name");
            RawAction a;
            a.where = &s;
            a.name = s.items[1].token;
            for (std::size_t j = 2; j < s.items.size(); ++j) {
                const SExpr& key = s.items[j];
                if (key.is_list || j + 1 >= s.items.size()) fail(key, "expected :parameters, :precondition or :effect");
                const SExpr& val = s.items[++j];
                if (key.token == ":parameters") {
                    if (!val.is_list) fail(val, "expected a parameter list");
                    a.params = typed_list(val.items, 0);
                } else if (key.token == ":precondition") {
                    read_precondition(val, a.pre);
                } else if (key.token == ":effect") {
                    read_effect(val, a);
                } else {
                    fail(key, "unknown action keyword " + key.token);
                }
            }
            d.actions.push_back(std::move(a));
        } else if (h == ":functions") {
            throw UnsupportedError(":action-costs");
        } else if (h == ":derived") {
            throw UnsupportedError(":derived-predicates");
        } else if (h == ":durative-action") {
            throw UnsupportedError(":durative-actions");
        } else {
            fail(s, "unknown domain section " + h);
        }
    }
    return d;
}

struct RawProblem {
    std::string name;
    std::vector<std::pair<std::string, std::string>> objects;
    std::vector<RawAtom> init;
    std::vector<RawAtom> goal;
};

RawProblem read_problem(const SExpr& root) {
    if (root.head() != "define") fail(root, "expected (define ...)");
    RawProblem p;
    for (std::size_t i = 1; i < root.items.size(); ++i) {
        const SExpr& s = root.items[i];
        const std::string& h = s.head();
        if (h == "problem") {
            if (s.items.size() != 2) fail(s, "malformed problem name");
            p.name = s.items[1].token;
        } else if (h == ":domain") {
        } else if (h == ":requirements") {
            check_requirements(s);
        } else if (h == ":objects") {
            p.objects = typed_list(s.items, 1);
        } else if (h == ":init") {
            for (std::size_t j = 1; j < s.items.size(); ++j) {
                const SExpr& f = s.items[j];
                if (f.is_list && !f.items.empty() && f.items[0].is("=")) throw UnsupportedError(":action-costs");
                if (f.is_list && !f.items.empty() && f.items[0].is("not")) continue;  // closed world
                p.init.push_back(read_atom(f));
            }
        } else if (h == ":goal") {
            if (s.items.size() != 2) fail(s, "malformed goal");
            read_precondition(s.items[1], p.goal);
        } else if (h == ":metric") {
            throw UnsupportedError(":action-costs");
        } else {
            fail(s, "unknown problem section " + h);
        }
    }
    return p;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::optional<TypeId> TypeTable::find(std::string_view name) const {
    for (int i = 0; i < size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

bool TypeTable::is_ancestor(TypeId ancestor, TypeId t) const {
    for (TypeId cur = t; cur >= 0; cur = parent[cur])
        if (cur == ancestor) return true;
    return false;
}

std::vector<TypeId> TypeTable::children(TypeId t) const {
    std::vector<TypeId> out;
    for (int i = 0; i < size(); ++i)
        if (parent[i] == t) out.push_back(i);
    return out;
}

std::optional<ObjectId> Problem::find_object(std::string_view name) const {
    for (int i = 0; i < num_objects(); ++i)
        if (objects[i].name == name) return i;
    return std::nullopt;
}

std::optional<PredId> Problem::find_predicate(std::string_view name) const {
    for (int i = 0; i < static_cast<int>(predicates.size()); ++i)
        if (predicates[i].name == name) return i;
    return std::nullopt;
}

std::optional<ActionId> Problem::find_action(std::string_view name) const {
    for (int i = 0; i < static_cast<int>(actions.size()); ++i)
        if (actions[i].name == name) return i;
    return std::nullopt;
}

bool Problem::in_init(const GroundAtom& f) const { return std::binary_search(init.begin(), init.end(), f); }

FlatTypes flatten_types(const RawTypes& raw) {
    FlatTypes out;
    TypeTable& tt = out.types;
    tt.names.push_back("object");
    tt.parent.push_back(-1);
    std::map<std::string, TypeId, std::less<>> ids{{"object", 0}};
    auto intern = [&](const std::string& name) {
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        TypeId id = tt.size();
        tt.names.push_back(name);
        tt.parent.push_back(0);
        ids.emplace(name, id);
        return id;
    };
    std::vector<bool> declared_parent(1, true);
    for (const auto& [name, parent] : raw.types) {
        TypeId t = intern(name);
        TypeId p = intern(parent.empty() ? "object" : parent);
        declared_parent.resize(tt.size(), false);
        if (t == 0) {
            if (p != 0) throw ModelError("type hierarchy is not a tree: object has a parent");
            continue;
        }
        if (declared_parent[t] && tt.parent[t] != p)
            throw ModelError("type hierarchy is not a tree: " + name + " has two parents");
        if (t == p) throw ModelError("type hierarchy is not a tree: " + name + " is its own parent");
        tt.parent[t] = p;
        declared_parent[t] = true;
    }
    for (TypeId t = 0; t < tt.size(); ++t) {
        TypeId cur = t;
        for (int steps = 0; cur > 0; ++steps) {
            if (steps > tt.size()) throw ModelError("type hierarchy is not a tree: cycle through " + tt.names[t]);
            cur = tt.parent[cur];
        }
    }

    std::vector<std::vector<std::pair<std::string, bool>>> own(tt.size());
    std::map<std::string, TypeId, std::less<>> seen;
    for (std::size_t i = 0; i < raw.objects.size(); ++i) {
        const auto& [name, type] = raw.objects[i];
        auto it = ids.find(type.empty() ? "object" : type);
        if (it == ids.end()) throw ModelError("object " + name + " has undeclared type " + type);
        auto [pos, fresh] = seen.emplace(name, it->second);
        if (!fresh) {
            if (pos->second != it->second) throw ModelError("object " + name + " declared with two types");
            continue;
        }
        own[it->second].emplace_back(name, i < raw.constant.size() && raw.constant[i]);
    }

    tt.members.assign(tt.size(), Range{});
    std::vector<std::vector<TypeId>> kids(tt.size());
    for (TypeId t = 1; t < tt.size(); ++t) kids[tt.parent[t]].push_back(t);
    std::function<void(TypeId)> visit = [&](TypeId t) {
        int lo = static_cast<int>(out.objects.size());
        for (auto& [name, constant] : own[t]) out.objects.push_back({name, t, constant});
        for (TypeId c : kids[t]) visit(c);
        tt.members[t] = {lo, static_cast<int>(out.objects.size())};
    };
    visit(0);
    return out;
}

namespace {

Problem build(const RawDomain& d, const RawProblem& p) {
    Problem prob;
    prob.domain_name = d.name;
    prob.problem_name = p.name;

    RawTypes raw;
    raw.types = d.types;
    for (const auto& c : d.constants) {
        raw.objects.push_back(c);
        raw.constant.push_back(true);
    }
    for (const auto& o : p.objects) {
        raw.objects.push_back(o);
        raw.constant.push_back(false);
    }
    FlatTypes flat = flatten_types(raw);
    prob.types = std::move(flat.types);
    prob.objects = std::move(flat.objects);

    auto type_of = [&](const std::string& name, const SExpr* where) {
        auto t = prob.types.find(name.empty() ? "object" : name);
        if (!t) fail(*where, "unknown type " + name);
        return *t;
    };

    for (const auto& [name, params] : d.predicates) {
        PredicateSchema ps;
        ps.name = name;
        if (prob.find_predicate(name)) throw ModelError("predicate " + name + " declared twice");
        for (const auto& [v, t] : params) {
            auto ty = prob.types.find(t.empty() ? "object" : t);
            if (!ty) throw ModelError("predicate " + name + " uses unknown type " + t);
            ps.params.push_back({v, *ty});
        }
        prob.predicates.push_back(std::move(ps));
    }

    auto ground = [&](const RawAtom& a) {
        auto pred = prob.find_predicate(a.pred);
        if (!pred) fail(*a.where, "unknown predicate " + a.pred);
        const PredicateSchema& ps = prob.predicates[*pred];
        if (static_cast<int>(a.args.size()) != ps.arity()) fail(*a.where, "wrong arity for " + a.pred);
        GroundAtom g{*pred, {}};
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            auto o = prob.find_object(a.args[i]);
            if (!o) fail(*a.where, "unknown object " + a.args[i]);
            if (!prob.types.contains(ps.params[i].type, *o))
                fail(*a.where, "object " + a.args[i] + " does not match the type of " + a.pred);
            g.args.push_back(*o);
        }
        return g;
    };

    for (const RawAction& ra : d.actions) {
        ActionSchema as;
        as.name = ra.name;
        for (const auto& [v, t] : ra.params) as.params.push_back({v, type_of(t, ra.where)});
        auto lift = [&](const RawAtom& a) {
            auto pred = prob.find_predicate(a.pred);
            if (!pred) fail(*a.where, "unknown predicate " + a.pred);
            const PredicateSchema& ps = prob.predicates[*pred];
            if (static_cast<int>(a.args.size()) != ps.arity()) fail(*a.where, "wrong arity for " + a.pred);
            Atom atom{*pred, {}};
            for (std::size_t i = 0; i < a.args.size(); ++i) {
                const std::string& arg = a.args[i];
                if (!arg.empty() && arg[0] == '?') {
                    auto it = std::find_if(as.params.begin(), as.params.end(),
                                           [&](const Param& pa) { return pa.name == arg; });
                    if (it == as.params.end()) fail(*a.where, "undeclared parameter " + arg + " in " + ra.name);
                    atom.args.push_back(Term::param(static_cast<int>(it - as.params.begin())));
                } else {
                    auto o = prob.find_object(arg);
                    if (!o || !prob.objects[*o].constant) fail(*a.where, "unknown constant " + arg);
                    if (!prob.types.contains(ps.params[i].type, *o))
                        fail(*a.where, "constant " + arg + " does not match the type of " + a.pred);
                    atom.args.push_back(Term::object(*o));
                }
            }
            return atom;
        };
        for (const auto& a : ra.pre) as.pre.push_back(lift(a));
        for (const auto& a : ra.add) as.add.push_back(lift(a));
        for (const auto& a : ra.del) {
            Atom d = lift(a);
            // delete-then-add keeps the fact
            if (std::find(as.add.begin(), as.add.end(), d) == as.add.end()) as.del.push_back(std::move(d));
        }
        if (prob.find_action(as.name)) throw ModelError("action " + as.name + " declared twice");
        prob.actions.push_back(std::move(as));
    }

    for (auto& ps : prob.predicates) ps.is_static = true;
    for (const auto& a : prob.actions) {
        for (const auto& e : a.add) prob.predicates[e.pred].is_static = false;
        for (const auto& e : a.del) prob.predicates[e.pred].is_static = false;
    }

    for (const auto& a : p.init) prob.init.push_back(ground(a));
    for (const auto& a : p.goal) prob.goal.push_back(ground(a));
    std::sort(prob.init.begin(), prob.init.end());
    prob.init.erase(std::unique(prob.init.begin(), prob.init.end()), prob.init.end());
    std::sort(prob.goal.begin(), prob.goal.end());
    prob.goal.erase(std::unique(prob.goal.begin(), prob.goal.end()), prob.goal.end());
    return prob;
}

}  // namespace

Problem parse(std::string_view domain_text, std::string_view problem_text) {
    SExpr dom = Reader(domain_text).read_document();
    SExpr prob = Reader(problem_text).read_document();
    RawDomain d = read_domain(dom);
    RawProblem p = read_problem(prob);
    return build(d, p);
}

Problem parse_files(const std::filesystem::path& domain, const std::filesystem::path& problem) {
    return parse(read_file(domain), read_file(problem));
}

std::vector<Achiever> achievers(const Problem& problem, PredId pred, Polarity polarity) {
    std::vector<Achiever> out;
    for (ActionId a = 0; a < static_cast<ActionId>(problem.actions.size()); ++a) {
        const auto& effs = polarity == Polarity::positive ? problem.actions[a].add : problem.actions[a].del;
        for (int e = 0; e < static_cast<int>(effs.size()); ++e)
            if (effs[e].pred == pred) out.push_back({a, e});
    }
    return out;
}

std::vector<GroundAtom> ground_facts(const Problem& problem, PredId pred) {
    const PredicateSchema& ps = problem.predicates[pred];
    std::vector<GroundAtom> out;
    std::vector<Range> dom;
    for (const auto& p : ps.params) {
        dom.push_back(problem.types.members[p.type]);
        if (dom.back().empty()) return out;
    }
    GroundAtom cur{pred, {}};
    for (const auto& r : dom) cur.args.push_back(r.lo);
    for (;;) {
        out.push_back(cur);
        int i = ps.arity() - 1;
        for (; i >= 0; --i) {
            if (++cur.args[i] < dom[i].hi) break;
            cur.args[i] = dom[i].lo;
        }
        if (i < 0) break;
    }
    return out;
}

FactSpace::FactSpace(const Problem& problem) {
    offset_.push_back(0);
    for (const auto& ps : problem.predicates) {
        std::vector<Range> dom;
        long long n = 1;
        for (const auto& p : ps.params) {
            dom.push_back(problem.types.members[p.type]);
            n *= dom.back().size();
        }
        if (n > (1 << 28)) throw ModelError("too many ground facts for predicate " + ps.name);
        total_ += static_cast<int>(n);
        offset_.push_back(total_);
        domains_.push_back(std::move(dom));
    }
}

std::optional<FactId> FactSpace::id(PredId pred, std::span<const ObjectId> args) const {
    const auto& dom = domains_[pred];
    if (args.size() != dom.size()) return std::nullopt;
    int idx = 0;
    for (std::size_t i = 0; i < dom.size(); ++i) {
        if (!dom[i].contains(args[i])) return std::nullopt;
        idx = idx * dom[i].size() + (args[i] - dom[i].lo);
    }
    return offset_[pred] + idx;
}

PredId FactSpace::predicate(FactId f) const {
    auto it = std::upper_bound(offset_.begin(), offset_.end(), f);
    return static_cast<PredId>(it - offset_.begin()) - 1;
}

GroundAtom FactSpace::atom(FactId f) const {
    PredId p = predicate(f);
    int idx = f - offset_[p];
    const auto& dom = domains_[p];
    GroundAtom g{p, std::vector<ObjectId>(dom.size())};
    for (int i = static_cast<int>(dom.size()) - 1; i >= 0; --i) {
        g.args[i] = dom[i].lo + idx % dom[i].size();
        idx /= dom[i].size();
    }
    return g;
}

std::string format(const Problem& problem, const GroundAtom& f) {
    std::string s = "(" + problem.predicates[f.pred].name;
    for (ObjectId o : f.args) s += " " + problem.objects[o].name;
    return s + ")";
}

std::string format(const Problem& problem, const GroundAction& a) {
    std::string s = "(" + problem.actions[a.schema].name;
    for (ObjectId o : a.binding) s += " " + problem.objects[o].name;
    return s + ")";
}

std::string format(const Problem& problem, const ActionSchema& a, const Atom& atom) {
    std::string s = "(" + problem.predicates[atom.pred].name;
    for (const Term& t : atom.args)
        s += " " + (t.is_param() ? a.params[t.index].name : problem.objects[t.index].name);
    return s + ")";
}

namespace {

void typed_names(std::ostringstream& out, const Problem& problem, const std::vector<Param>& params) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out << ' ';
        out << params[i].name << " - " << problem.types.names[params[i].type];
    }
}

void conjunction(std::ostringstream& out, const Problem& problem, const ActionSchema& a,
                 const std::vector<Atom>& atoms, const std::vector<Atom>* negated) {
    out << "(and";
    for (const auto& at : atoms) out << ' ' << format(problem, a, at);
    if (negated)
        for (const auto& at : *negated) out << " (not " << format(problem, a, at) << ')';
    out << ')';
}

}  // namespace

std::string to_domain_pddl(const Problem& problem) {
    std::ostringstream out;
    out << "(define (domain " << problem.domain_name << ")\n";
    out << "  (:requirements :strips :typing)\n";
    out << "  (:types";
    for (TypeId t = 1; t < problem.types.size(); ++t)
        out << ' ' << problem.types.names[t] << " - " << problem.types.names[problem.types.parent[t]];
    out << ")\n";
    bool any_const = std::any_of(problem.objects.begin(), problem.objects.end(), [](const Object& o) { return o.constant; });
    if (any_const) {
        out << "  (:constants";
        for (const auto& o : problem.objects)
            if (o.constant) out << ' ' << o.name << " - " << problem.types.names[o.type];
        out << ")\n";
    }
    out << "  (:predicates";
    for (const auto& p : problem.predicates) {
        out << " (" << p.name;
        if (!p.params.empty()) out << ' ';
        typed_names(out, problem, p.params);
        out << ')';
    }
    out << ")\n";
    for (const auto& a : problem.actions) {
        out << "  (:action " << a.name << "\n    :parameters (";
        typed_names(out, problem, a.params);
        out << ")\n    :precondition ";
        conjunction(out, problem, a, a.pre, nullptr);
        out << "\n    :effect ";
        conjunction(out, problem, a, a.add, &a.del);
        out << ")\n";
    }
    out << ")\n";
    return out.str();
}

std::string to_problem_pddl(const Problem& problem) {
    std::ostringstream out;
    out << "(define (problem " << problem.problem_name << ")\n";
    out << "  (:domain " << problem.domain_name << ")\n";
    out << "  (:objects";
    for (const auto& o : problem.objects)
        if (!o.constant) out << ' ' << o.name << " - " << problem.types.names[o.type];
    out << ")\n  (:init";
    for (const auto& f : problem.init) out << ' ' << format(problem, f);
    out << ")\n  (:goal (and";
    for (const auto& f : problem.goal) out << ' ' << format(problem, f);
    out << ")))\n";
    return out.str();
}

std::vector<bool> action_level_statics(const Problem& problem) {
    std::vector<bool> out(problem.predicates.size());
    for (PredId p = 0; p < static_cast<PredId>(problem.predicates.size()); ++p)
        out[p] = problem.predicates[p].is_static;
    for (const auto& a : problem.actions) {
        for (const auto& pre : a.pre) {
            if (!problem.predicates[pre.pred].is_static) continue;
            std::set<int> vars;
            for (const Term& t : pre.args)
                if (t.is_param()) vars.insert(t.index);
            if (vars.size() >= 3) out[pre.pred] = false;
        }
    }
    return out;
}

bool binding_respects_types(const Problem& problem, const GroundAction& a) {
    const ActionSchema& s = problem.actions[a.schema];
    if (a.binding.size() != s.params.size()) return false;
    for (std::size_t i = 0; i < s.params.size(); ++i)
        if (!problem.types.contains(s.params[i].type, a.binding[i])) return false;
    return true;
}

}  // namespace pgsat
