#include "pgsat/mutex_groups.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace pgsat {

namespace {

constexpr int kMaxSubsetArity = 8;
constexpr std::size_t kMaxSpecializations = 64;
constexpr int kMaxMergeFixed = 5;
constexpr int kMaxGroupAtoms = 3;
constexpr std::size_t kMaxCandidates = 20000;

std::vector<int> key_of(const LmgCandidate& c) {
    std::vector<int> key{c.num_fixed, static_cast<int>(c.vars.size())};
    for (const auto& v : c.vars) key.push_back(v.type);
    for (const auto& a : c.atoms) {
        key.push_back(-1 - a.pred);
        key.insert(key.end(), a.vars.begin(), a.vars.end());
    }
    return key;
}

// Atoms sorted by predicate, variables renumbered by first appearance
// (fixed ones first). Names travel with their variables.
LmgCandidate canonical(const LmgCandidate& c) {
    LmgCandidate out;
    out.num_fixed = c.num_fixed;
    out.exactly_one = c.exactly_one;
    std::vector<GroupAtom> atoms = c.atoms;
    std::sort(atoms.begin(), atoms.end(), [](const GroupAtom& a, const GroupAtom& b) { return a.pred < b.pred; });
    std::vector<int> remap(c.vars.size(), -1);
    int next_fixed = 0;
    int next_counted = c.num_fixed;
    for (const auto& a : atoms)
        for (int v : a.vars)
            if (remap[v] < 0) remap[v] = c.is_fixed(v) ? next_fixed++ : next_counted++;
    for (std::size_t v = 0; v < c.vars.size(); ++v)
        if (remap[v] < 0) remap[v] = c.is_fixed(static_cast<int>(v)) ? next_fixed++ : next_counted++;
    out.vars.resize(c.vars.size());
    for (std::size_t v = 0; v < c.vars.size(); ++v) out.vars[remap[v]] = c.vars[v];
    for (auto& a : atoms)
        for (int& v : a.vars) v = remap[v];
    out.atoms = std::move(atoms);
    return out;
}

std::vector<TypeId> nonempty_subtypes(const TypeTable& types, TypeId t) {
    std::vector<TypeId> out;
    for (TypeId s = 0; s < types.size(); ++s)
        if (types.is_ancestor(t, s) && !types.members[s].empty()) out.push_back(s);
    return out;
}

TypeId term_type(const ActionSchema& a, const Term& t) { return a.params[t.index].type; }

bool term_intersects(const Problem& p, const ActionSchema& a, const Term& t, TypeId type) {
    if (t.is_object()) return p.types.contains(type, t.index);
    return p.types.intersects(term_type(a, t), type);
}

bool term_within(const Problem& p, const ActionSchema& a, const Term& t, TypeId type) {
    if (t.is_object()) return p.types.contains(type, t.index);
    return p.types.covers(type, term_type(a, t));
}

// Binding of the fixed variables induced by matching an action atom against a
// group atom, or nullopt if they can never denote the same fact.
std::optional<std::vector<Term>> unify(const Problem& p, const ActionSchema& a, const Atom& atom,
                                       const LmgCandidate& c, const GroupAtom& g) {
    if (atom.pred != g.pred) return std::nullopt;
    std::vector<Term> beta(c.num_fixed);
    for (std::size_t j = 0; j < g.vars.size(); ++j) {
        int v = g.vars[j];
        if (!term_intersects(p, a, atom.args[j], c.vars[v].type)) return std::nullopt;
        if (c.is_fixed(v)) beta[v] = atom.args[j];
    }
    return beta;
}

bool counted_within(const Problem& p, const ActionSchema& a, const Atom& atom, const LmgCandidate& c,
                    const GroupAtom& g) {
    for (std::size_t j = 0; j < g.vars.size(); ++j) {
        int v = g.vars[j];
        if (!c.is_fixed(v) && !term_within(p, a, atom.args[j], c.vars[v].type)) return false;
    }
    return true;
}

bool can_coincide(const Problem& p, const ActionSchema& a, const LmgCandidate& c, const std::vector<Term>& b1,
                  const std::vector<Term>& b2) {
    for (int k = 0; k < c.num_fixed; ++k) {
        const Term& t1 = b1[k];
        const Term& t2 = b2[k];
        const Range w = p.types.members[c.vars[k].type];
        if (t1 == t2) continue;
        if (t1.is_object() && t2.is_object()) return false;
        Range r1 = t1.is_object() ? Range{t1.index, t1.index + 1} : p.types.members[term_type(a, t1)];
        Range r2 = t2.is_object() ? Range{t2.index, t2.index + 1} : p.types.members[term_type(a, t2)];
        if (r1.intersect(r2).intersect(w).empty()) return false;
    }
    return true;
}

const GroupAtom* atom_for(const LmgCandidate& c, PredId pred) {
    for (const auto& g : c.atoms)
        if (g.pred == pred) return &g;
    return nullptr;
}

bool well_formed(const LmgCandidate& c) {
    std::set<PredId> preds;
    for (const auto& g : c.atoms) {
        if (!preds.insert(g.pred).second) return false;
        std::vector<char> seen(c.vars.size(), 0);
        for (int v : g.vars) {
            if (seen[v]) return false;
            seen[v] = 1;
        }
        for (int k = 0; k < c.num_fixed; ++k)
            if (!seen[k]) return false;
    }
    return !c.atoms.empty();
}

bool init_at_most_one(const LmgCandidate& c, const Problem& p) {
    std::map<std::vector<ObjectId>, int> count;
    for (const auto& f : p.init) {
        const GroupAtom* g = atom_for(c, f.pred);
        if (!g) continue;
        std::vector<ObjectId> binding(c.num_fixed);
        bool in_group = true;
        for (std::size_t j = 0; j < g->vars.size() && in_group; ++j) {
            int v = g->vars[j];
            in_group = p.types.contains(c.vars[v].type, f.args[j]);
            if (c.is_fixed(v)) binding[v] = f.args[j];
        }
        if (in_group && ++count[binding] > 1) return false;
    }
    return true;
}

}  // namespace

int Plmg::literal_of(PredId pred) const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i].pred == pred) return static_cast<int>(i);
    return -1;
}

std::vector<LmgCandidate> generate_candidates(const Problem& problem) {
    std::vector<LmgCandidate> singles;
    std::set<std::vector<int>> seen;
    auto keep = [&](std::vector<LmgCandidate>& into, LmgCandidate c) {
        c = canonical(c);
        if (seen.insert(key_of(c)).second) into.push_back(std::move(c));
    };

    for (PredId p = 0; p < static_cast<PredId>(problem.predicates.size()); ++p) {
        const PredicateSchema& ps = problem.predicates[p];
        const int n = ps.arity();
        if (n > kMaxSubsetArity) continue;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<int> fixed_pos, counted_pos;
            for (int j = 0; j < n; ++j) ((mask >> j) & 1u ? counted_pos : fixed_pos).push_back(j);
            std::vector<std::vector<TypeId>> options;
            std::size_t combos = 1;
            for (int j : fixed_pos) {
                options.push_back(nonempty_subtypes(problem.types, ps.params[j].type));
                combos *= std::max<std::size_t>(options.back().size(), 1);
            }
            if (combos > kMaxSpecializations) {
                options.clear();
                for (int j : fixed_pos) options.push_back({ps.params[j].type});
            }
            std::vector<std::size_t> pick(fixed_pos.size(), 0);
            for (;;) {
                LmgCandidate c;
                c.num_fixed = static_cast<int>(fixed_pos.size());
                GroupAtom g{p, std::vector<int>(n)};
                for (std::size_t k = 0; k < fixed_pos.size(); ++k) {
                    TypeId t = options[k].empty() ? ps.params[fixed_pos[k]].type : options[k][pick[k]];
                    c.vars.push_back({ps.params[fixed_pos[k]].name, t});
                    g.vars[fixed_pos[k]] = static_cast<int>(k);
                }
                for (int j : counted_pos) {
                    g.vars[j] = static_cast<int>(c.vars.size());
                    c.vars.push_back({ps.params[j].name, ps.params[j].type});
                }
                c.atoms.push_back(std::move(g));
                keep(singles, std::move(c));
                std::size_t k = 0;
                for (; k < pick.size(); ++k) {
                    if (++pick[k] < std::max<std::size_t>(options[k].size(), 1)) break;
                    pick[k] = 0;
                }
                if (k == pick.size()) break;
            }
        }
    }

    // Grow by one single per round. Partial merges are kept even if they
    // would fail verification, a larger one may still pass.
    auto extend = [&](std::vector<LmgCandidate>& into, const LmgCandidate& a, const LmgCandidate& b) {
        if (a.num_fixed != b.num_fixed || a.num_fixed > kMaxMergeFixed) return;
        for (const GroupAtom& g : a.atoms)
            if (g.pred == b.atoms[0].pred) return;
        std::vector<int> perm(a.num_fixed);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            bool ok = true;
            for (int k = 0; k < b.num_fixed && ok; ++k) ok = b.vars[k].type == a.vars[perm[k]].type;
            if (!ok) continue;
            LmgCandidate m;
            m.num_fixed = a.num_fixed;
            m.vars = a.vars;
            std::vector<int> remap(b.vars.size());
            for (int k = 0; k < b.num_fixed; ++k) remap[k] = perm[k];
            for (std::size_t v = b.num_fixed; v < b.vars.size(); ++v) {
                remap[v] = static_cast<int>(m.vars.size());
                m.vars.push_back(b.vars[v]);
            }
            m.atoms = a.atoms;
            GroupAtom g = b.atoms[0];
            for (int& v : g.vars) v = remap[v];
            m.atoms.push_back(std::move(g));
            keep(into, std::move(m));
        } while (std::next_permutation(perm.begin(), perm.end()));
    };

    std::vector<LmgCandidate> merged;
    std::size_t round_begin = 0;
    for (std::size_t i = 0; i < singles.size(); ++i)
        for (std::size_t j = i + 1; j < singles.size(); ++j) extend(merged, singles[i], singles[j]);
    for (int atoms = 3; atoms <= kMaxGroupAtoms; ++atoms) {
        const std::size_t round_end = merged.size();
        for (std::size_t i = round_begin; i < round_end && merged.size() < kMaxCandidates; ++i) {
            const LmgCandidate a = merged[i];  // merged grows below
            for (std::size_t j = 0; j < singles.size() && merged.size() < kMaxCandidates; ++j)
                extend(merged, a, singles[j]);
        }
        round_begin = round_end;
    }
    singles.insert(singles.end(), std::make_move_iterator(merged.begin()), std::make_move_iterator(merged.end()));
    return singles;
}

bool verify_fam(const LmgCandidate& c, const Problem& p) {
    if (!well_formed(c)) return false;
    if (!init_at_most_one(c, p)) return false;
    for (const ActionSchema& a : p.actions) {
        struct Hit {
            const Atom* effect;
            std::vector<Term> beta;
        };
        std::vector<Hit> adds;
        for (const Atom& e : a.add) {
            const GroupAtom* g = atom_for(c, e.pred);
            if (!g) continue;
            if (auto beta = unify(p, a, e, c, *g)) adds.push_back({&e, std::move(*beta)});
        }
        // Two adds landing in one instance are fine when that binding would
        // need two group facts in the precondition.
        auto pre_in = [&](const std::vector<Term>& beta, PredId skip) -> std::optional<PredId> {
            for (const Atom& q : a.pre) {
                if (q.pred == skip) continue;
                const GroupAtom* g = atom_for(c, q.pred);
                if (!g || !counted_within(p, a, q, c, *g)) continue;
                auto b = unify(p, a, q, c, *g);
                if (b && *b == beta) return q.pred;
            }
            return std::nullopt;
        };
        auto blocked = [&](const Hit& x, const Hit& y) {
            for (const Atom& q : a.pre) {
                const GroupAtom* g = atom_for(c, q.pred);
                if (!g || !counted_within(p, a, q, c, *g)) continue;
                auto b = unify(p, a, q, c, *g);
                if (b && *b == x.beta && pre_in(y.beta, q.pred)) return true;
            }
            return false;
        };
        for (std::size_t i = 0; i < adds.size(); ++i)
            for (std::size_t j = i + 1; j < adds.size(); ++j)
                if (can_coincide(p, a, c, adds[i].beta, adds[j].beta) && !blocked(adds[i], adds[j])) return false;
        for (const Hit& h : adds) {
            bool balanced = false;
            for (const Atom& d : a.del) {
                if (std::find(a.pre.begin(), a.pre.end(), d) == a.pre.end()) continue;
                const GroupAtom* g = atom_for(c, d.pred);
                if (!g) continue;
                auto beta = unify(p, a, d, c, *g);
                if (beta && *beta == h.beta && counted_within(p, a, d, c, *g)) {
                    balanced = true;
                    break;
                }
            }
            if (!balanced) return false;
        }
    }
    return true;
}

bool preserves_exactly_one(const LmgCandidate& c, const Problem& p) {
    for (const ActionSchema& a : p.actions) {
        for (const Atom& d : a.del) {
            const GroupAtom* g = atom_for(c, d.pred);
            if (!g) continue;
            auto beta = unify(p, a, d, c, *g);
            if (!beta) continue;
            bool refilled = false;
            for (const Atom& e : a.add) {
                const GroupAtom* ge = atom_for(c, e.pred);
                if (!ge) continue;
                auto be = unify(p, a, e, c, *ge);
                if (be && *be == *beta && counted_within(p, a, e, c, *ge)) {
                    refilled = true;
                    break;
                }
            }
            if (!refilled) return false;
        }
    }
    return true;
}

namespace {

bool fact_matches(const Problem& p, const Plmg& m, const PlmgAtom& g, const GroundAtom& f) {
    if (g.pred != f.pred) return false;
    for (std::size_t j = 0; j < g.args.size(); ++j) {
        const PlmgTerm& t = g.args[j];
        if (t.counted ? !p.types.contains(m.counted[t.index].type, f.args[j]) : t.index != f.args[j]) return false;
    }
    return true;
}

}  // namespace

bool classify_exactly_one(const Plmg& m, const Problem& p) {
    int in_init = 0;
    for (const auto& f : p.init)
        for (const auto& g : m.atoms)
            if (fact_matches(p, m, g, f)) ++in_init;
    if (in_init != 1) return false;

    for (const ActionSchema& a : p.actions) {
        for (const Atom& d : a.del) {
            int li = m.literal_of(d.pred);
            if (li < 0) continue;
            const PlmgAtom& g = m.atoms[li];
            std::vector<ObjectId> forced(a.params.size(), -1);
            bool unifies = true;
            for (std::size_t j = 0; j < g.args.size() && unifies; ++j) {
                const PlmgTerm& t = g.args[j];
                const Term& dt = d.args[j];
                if (t.counted) {
                    unifies = term_intersects(p, a, dt, m.counted[t.index].type);
                } else if (dt.is_object()) {
                    unifies = dt.index == t.index;
                } else {
                    unifies = p.types.contains(a.params[dt.index].type, t.index) &&
                              (forced[dt.index] < 0 || forced[dt.index] == t.index);
                    forced[dt.index] = t.index;
                }
            }
            if (!unifies) continue;
            bool refilled = false;
            for (const Atom& e : a.add) {
                int le = m.literal_of(e.pred);
                if (le < 0) continue;
                const PlmgAtom& ge = m.atoms[le];
                bool inside = true;
                for (std::size_t j = 0; j < ge.args.size() && inside; ++j) {
                    const PlmgTerm& t = ge.args[j];
                    const Term& et = e.args[j];
                    if (t.counted)
                        inside = term_within(p, a, et, m.counted[t.index].type);
                    else
                        inside = et.is_object() ? et.index == t.index : forced[et.index] == t.index;
                }
                if (inside) {
                    refilled = true;
                    break;
                }
            }
            if (!refilled) return false;
        }
    }
    return true;
}

std::vector<Plmg> instantiate(const LmgCandidate& c, const Problem& p, const FactSpace& facts, int source) {
    std::vector<Plmg> out;
    std::vector<Range> fixed_dom;
    for (int k = 0; k < c.num_fixed; ++k) {
        fixed_dom.push_back(p.types.members[c.vars[k].type]);
        if (fixed_dom.back().empty()) return out;
    }
    std::vector<ObjectId> binding;
    for (const auto& r : fixed_dom) binding.push_back(r.lo);
    for (;;) {
        Plmg m;
        m.id = static_cast<int>(out.size());
        m.source = source;
        m.fixed_binding = binding;
        for (int v = c.num_fixed; v < static_cast<int>(c.vars.size()); ++v) m.counted.push_back(c.vars[v]);
        for (const auto& g : c.atoms) {
            PlmgAtom pa{g.pred, {}};
            for (int v : g.vars)
                pa.args.push_back(c.is_fixed(v) ? PlmgTerm{false, binding[v]} : PlmgTerm{true, v - c.num_fixed});
            m.atoms.push_back(std::move(pa));
        }
        for (const auto& g : m.atoms) {
            std::vector<ObjectId> args(g.args.size());
            std::vector<Range> dom(g.args.size());
            bool empty = false;
            for (std::size_t j = 0; j < g.args.size(); ++j) {
                dom[j] = g.args[j].counted ? p.types.members[m.counted[g.args[j].index].type]
                                           : Range{g.args[j].index, g.args[j].index + 1};
                empty = empty || dom[j].empty();
                args[j] = dom[j].lo;
            }
            if (empty) continue;
            for (;;) {
                if (auto id = facts.id(g.pred, args)) m.ground_facts.push_back(*id);
                int j = static_cast<int>(args.size()) - 1;
                for (; j >= 0; --j) {
                    if (++args[j] < dom[j].hi) break;
                    args[j] = dom[j].lo;
                }
                if (j < 0) break;
            }
        }
        std::sort(m.ground_facts.begin(), m.ground_facts.end());
        m.ground_facts.erase(std::unique(m.ground_facts.begin(), m.ground_facts.end()), m.ground_facts.end());
        m.exactly_one = classify_exactly_one(m, p);
        out.push_back(std::move(m));

        int k = c.num_fixed - 1;
        for (; k >= 0; --k) {
            if (++binding[k] < fixed_dom[k].hi) break;
            binding[k] = fixed_dom[k].lo;
        }
        if (k < 0) break;
    }
    return out;
}

std::vector<char> verify_candidates(const std::vector<LmgCandidate>& candidates, const Problem& problem) {
    std::vector<char> ok(candidates.size(), 0);
    const long n = static_cast<long>(candidates.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) ok[i] = verify_fam(candidates[i], problem) ? 1 : 0;
    return ok;
}

std::vector<char> verify_candidates_serial(const std::vector<LmgCandidate>& candidates, const Problem& problem) {
    std::vector<char> ok(candidates.size(), 0);
    for (std::size_t i = 0; i < candidates.size(); ++i) ok[i] = verify_fam(candidates[i], problem) ? 1 : 0;
    return ok;
}

std::vector<LmgCandidate> infer_lifted_mutex_groups(const Problem& problem) {
    std::vector<LmgCandidate> all = generate_candidates(problem);
    std::vector<char> ok = verify_candidates(all, problem);
    std::vector<LmgCandidate> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (!ok[i]) continue;
        all[i].exactly_one = preserves_exactly_one(all[i], problem);
        out.push_back(std::move(all[i]));
    }
    return out;
}

namespace {

int group_count(const State& s, const std::vector<FactId>& group) {
    int n = 0;
    auto a = s.begin();
    auto b = group.begin();
    while (a != s.end() && b != group.end()) {
        if (*a < *b) {
            ++a;
        } else if (*b < *a) {
            ++b;
        } else {
            ++n;
            ++a;
            ++b;
        }
    }
    return n;
}

struct Reachable {
    std::vector<State> states;
    std::vector<std::pair<int, int>> edges;
    bool complete = false;
};

Reachable collect(const GroundModel& model, std::size_t cap) {
    Reachable r;
    std::map<State, int> index;
    auto id_of = [&](const State& s) {
        auto [it, fresh] = index.emplace(s, static_cast<int>(r.states.size()));
        if (fresh) r.states.push_back(s);
        return it->second;
    };
    auto res = model.explore(cap, [&](const State& from, const GroundOp* op, const State& to) {
        int a = id_of(from);
        int b = id_of(to);
        if (op) r.edges.emplace_back(a, b);
        return true;
    });
    r.complete = res == GroundModel::Exploration::exhausted;
    return r;
}

MutexVerdict check(const Plmg& m, const Reachable& r) {
    MutexVerdict v;
    std::vector<int> count(r.states.size());
    for (std::size_t i = 0; i < r.states.size(); ++i) {
        count[i] = group_count(r.states[i], m.ground_facts);
        if (count[i] > 1) return {MutexVerdict::Kind::violated, r.states[i], "two group facts hold"};
        if (m.exactly_one && count[i] == 0) return {MutexVerdict::Kind::violated, r.states[i], "no group fact holds"};
    }
    if (m.fam)
        for (auto [a, b] : r.edges)
            if (count[a] == 0 && count[b] > 0)
                return {MutexVerdict::Kind::violated, r.states[b], "emptied group became active again"};
    v.kind = r.complete ? MutexVerdict::Kind::holds : MutexVerdict::Kind::inconclusive;
    return v;
}

}  // namespace

MutexVerdict verify_mutex_exhaustive(const Plmg& plmg, const GroundModel& model, std::size_t state_cap) {
    if (state_cap == 0) return {};
    return check(plmg, collect(model, state_cap));
}

std::vector<MutexVerdict> verify_mutex_exhaustive(const std::vector<Plmg>& plmgs, const GroundModel& model,
                                                  std::size_t state_cap) {
    std::vector<MutexVerdict> out(plmgs.size());
    if (state_cap == 0) return out;
    Reachable r = collect(model, state_cap);
    const long n = static_cast<long>(plmgs.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) out[i] = check(plmgs[i], r);
    return out;
}

std::vector<MutexVerdict> verify_mutex_exhaustive_serial(const std::vector<Plmg>& plmgs, const GroundModel& model,
                                                         std::size_t state_cap) {
    std::vector<MutexVerdict> out(plmgs.size());
    if (state_cap == 0) return out;
    Reachable r = collect(model, state_cap);
    for (std::size_t i = 0; i < plmgs.size(); ++i) out[i] = check(plmgs[i], r);
    return out;
}

std::string format(const Problem& p, const LmgCandidate& c) {
    auto var = [&](int v) { return (c.is_fixed(v) ? "" : "*") + c.vars[v].name; };
    std::string s = "<{";
    for (int v = 0; v < c.num_fixed; ++v) s += (v ? ", " : "") + c.vars[v].name + ":" + p.types.names[c.vars[v].type];
    s += "}, {";
    for (int v = c.num_fixed; v < static_cast<int>(c.vars.size()); ++v)
        s += (v > c.num_fixed ? ", " : "") + c.vars[v].name + ":" + p.types.names[c.vars[v].type];
    s += "}, {";
    for (std::size_t i = 0; i < c.atoms.size(); ++i) {
        s += (i ? ", " : "") + p.predicates[c.atoms[i].pred].name + "(";
        for (std::size_t j = 0; j < c.atoms[i].vars.size(); ++j) s += (j ? "," : "") + var(c.atoms[i].vars[j]);
        s += ")";
    }
    return s + "}>";
}

std::string format(const Problem& p, const Plmg& m) {
    std::string s = m.exactly_one ? "EO " : "AMO";
    s += "  [";
    for (std::size_t k = 0; k < m.fixed_binding.size(); ++k) s += (k ? " " : "") + p.objects[m.fixed_binding[k]].name;
    s += "]  {";
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        s += (i ? ", " : "") + p.predicates[m.atoms[i].pred].name + "(";
        for (std::size_t j = 0; j < m.atoms[i].args.size(); ++j) {
            const PlmgTerm& t = m.atoms[i].args[j];
            s += (j ? "," : "") + (t.counted ? m.counted[t.index].name : p.objects[t.index].name);
        }
        s += ")";
    }
    return s + "}  " + std::to_string(m.ground_facts.size());
}

}  // namespace pgsat
