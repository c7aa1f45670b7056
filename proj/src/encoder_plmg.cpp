#include "pgsat/encoder_plmg.hpp"

#include <algorithm>
#include <map>

#include "pgsat/encoder_binary.hpp"
#include "pgsat/errors.hpp"

namespace pgsat {

int PlmgEncodingCtx::none_literal(int m) const {
    const Plmg& g = group(m);
    return g.exactly_one ? -1 : static_cast<int>(g.atoms.size());
}

int PlmgEncodingCtx::num_literals(int m) const {
    const Plmg& g = group(m);
    return static_cast<int>(g.atoms.size()) + (g.exactly_one ? 0 : 1);
}

std::vector<char> grouped_facts(const CoverResult& cover, const FactSpace& facts) {
    std::vector<char> out(facts.size(), 0);
    for (const Plmg& m : cover.selected)
        for (FactId f : m.ground_facts) out[f] = 1;
    return out;
}

int matching_literal(const Problem& problem, const Plmg& m, const GroundAtom& fact) {
    const int i = m.literal_of(fact.pred);
    if (i < 0) return -1;
    const PlmgAtom& a = m.atoms[i];
    for (std::size_t j = 0; j < a.args.size(); ++j) {
        const PlmgTerm& t = a.args[j];
        if (t.counted ? !problem.types.contains(m.counted[t.index].type, fact.args[j]) : t.index != fact.args[j])
            return -1;
    }
    return i;
}

namespace {

std::optional<PlmgMatch> build_match(const Problem& problem, const UnifiedArgs& ua, ActionId a, const Atom& atom,
                                     AtomRole role, int atom_index, int m, const Plmg& g, int literal) {
    PlmgMatch match;
    match.action = a;
    match.atom = atom_index;
    match.role = role;
    match.group = m;
    match.literal = literal;
    const PlmgAtom& lit = g.atoms[literal];
    std::map<int, ObjectId> pinned;  // slot -> object required by the guard
    for (std::size_t j = 0; j < lit.args.size(); ++j) {
        const PlmgTerm& pt = lit.args[j];
        const Term& at = atom.args[j];
        if (!pt.counted) {
            if (at.is_object()) {
                if (at.index != pt.index) return std::nullopt;
                continue;
            }
            if (!param_domain(problem, ua, a, at.index).contains(pt.index)) return std::nullopt;
            const int slot = ua.slot_of(a, at.index);
            auto [it, fresh] = pinned.emplace(slot, pt.index);
            if (!fresh && it->second != pt.index) return std::nullopt;
            if (fresh) match.guard.push_back({false, slot, pt.index});
            continue;
        }
        const Range dom_c = problem.types.members[g.counted[pt.index].type];
        if (at.is_object()) {
            if (!dom_c.contains(at.index)) return std::nullopt;
            match.rhs.push_back({pt.index, -1, at.index});
            continue;
        }
        if (!param_domain(problem, ua, a, at.index).intersects(dom_c)) return std::nullopt;
        const int slot = ua.slot_of(a, at.index);
        GuardLit gl{true, slot, pt.index};
        if (std::find(match.guard.begin(), match.guard.end(), gl) == match.guard.end()) match.guard.push_back(gl);
        match.rhs.push_back({pt.index, slot, -1});
    }
    return match;
}

Clause negated_guard(const CnfFormula& f, const PlmgMatch& mt, int t) {
    Clause c{-f.var(VarKey::action(mt.action, t))};
    for (const GuardLit& g : mt.guard)
        c.push_back(-f.var(g.in_dom ? VarKey::in_dom(mt.group, g.value, g.slot, t)
                                    : VarKey::arg_eq(g.slot, g.value, t)));
    return c;
}

std::vector<int> guard_literals(const CnfFormula& f, const PlmgMatch& mt, int t) {
    Clause c = negated_guard(f, mt, t);
    for (int& l : c) l = -l;
    return c;
}

// Right-hand side of a precondition or effect as a conjunction of literals.
std::vector<int> rhs_literals(const CnfFormula& f, const PlmgEncodingCtx& ctx, const PlmgMatch& mt, int t) {
    const Phase ph = mt.role == AtomRole::pre ? Phase::pre : Phase::post;
    const int layer = mt.role == AtomRole::pre ? t - 1 : t;
    std::vector<int> out{f.var(VarKey::lit(mt.group, mt.literal, layer))};
    for (const RhsTerm& r : mt.rhs) {
        if (r.slot >= 0) {
            out.push_back(f.var(VarKey::cnt_eq_arg(mt.group, r.counted, r.slot, ph, t)));
        } else {
            auto v = value_literals(f, ctx, mt.group, r.counted, r.object, layer);
            out.insert(out.end(), v.begin(), v.end());
        }
    }
    return out;
}

std::vector<int> counted_of(const Plmg& g, int literal) {
    std::vector<int> out;
    for (const PlmgTerm& t : g.atoms[literal].args)
        if (t.counted) out.push_back(t.index);
    return out;
}

}  // namespace

PlmgEncodingCtx make_plmg_ctx(const Problem& problem, const FactSpace& facts, const UnifiedArgs& ua,
                              const CoverResult& cover, bool binary, bool none_persistence) {
    PlmgEncodingCtx ctx;
    ctx.problem = &problem;
    ctx.facts = &facts;
    ctx.ua = &ua;
    ctx.cover = &cover;
    ctx.binary = binary;
    ctx.bits = bit_count(problem.num_objects());
    ctx.none_persistence = none_persistence;
    for (ActionId a = 0; a < static_cast<ActionId>(problem.actions.size()); ++a) {
        const ActionSchema& s = problem.actions[a];
        auto scan = [&](const std::vector<Atom>& list, AtomRole role) {
            for (int i = 0; i < static_cast<int>(list.size()); ++i) {
                if (!cover.state_predicate[list[i].pred]) continue;
                for (int m = 0; m < static_cast<int>(cover.selected.size()); ++m) {
                    const Plmg& g = cover.selected[m];
                    const int lit = g.literal_of(list[i].pred);
                    if (lit < 0) continue;
                    auto mt = build_match(problem, ua, a, list[i], role, i, m, g, lit);
                    if (!mt) continue;
                    const int phase = static_cast<int>(role == AtomRole::pre ? Phase::pre : Phase::post);
                    for (const GuardLit& gl : mt->guard)
                        if (gl.in_dom) ctx.in_dom_refs.emplace(m, gl.value, gl.slot);
                    for (const RhsTerm& r : mt->rhs)
                        if (r.slot >= 0) {
                            ctx.eq_refs.emplace(m, r.counted, r.slot, phase);
                            ctx.bit_slots.insert(r.slot);
                        }
                    ctx.matches.push_back(std::move(*mt));
                }
            }
        };
        scan(s.pre, AtomRole::pre);
        scan(s.add, AtomRole::add);
        scan(s.del, AtomRole::del);
    }
    return ctx;
}

std::vector<int> value_literals(const CnfFormula& f, const PlmgEncodingCtx& ctx, int m, int c, ObjectId o, int t) {
    if (!ctx.binary) return {f.var(VarKey::cnt_eq(m, c, o, t))};
    std::vector<int> out;
    for (int b = 0; b < ctx.bits; ++b) {
        const int x = f.var(VarKey::cnt_bit(m, c, b, t));
        out.push_back(bit_of(o, b) ? x : -x);
    }
    return out;
}

void allocate_group_layer(CnfFormula& f, const PlmgEncodingCtx& ctx, int t) {
    const auto& types = ctx.problem->types;
    for (int m = 0; m < static_cast<int>(ctx.cover->selected.size()); ++m) {
        const Plmg& g = ctx.group(m);
        for (int i = 0; i < ctx.num_literals(m); ++i) f.new_var(VarKey::lit(m, i, t));
        for (int c = 0; c < static_cast<int>(g.counted.size()); ++c) {
            if (ctx.binary) {
                for (int b = 0; b < ctx.bits; ++b) f.new_var(VarKey::cnt_bit(m, c, b, t));
            } else {
                const Range r = types.members[g.counted[c].type];
                for (ObjectId o = r.lo; o < r.hi; ++o) f.new_var(VarKey::cnt_eq(m, c, o, t));
            }
        }
    }
}

void encode_state_skeleton(CnfFormula& f, const PlmgEncodingCtx& ctx, int t) {
    const auto& types = ctx.problem->types;
    for (int m = 0; m < static_cast<int>(ctx.cover->selected.size()); ++m) {
        const Plmg& g = ctx.group(m);
        if (!ctx.binary) {
            for (int c = 0; c < static_cast<int>(g.counted.size()); ++c) {
                const Range r = types.members[g.counted[c].type];
                std::vector<int> vals;
                for (ObjectId o = r.lo; o < r.hi; ++o) vals.push_back(f.var(VarKey::cnt_eq(m, c, o, t)));
                f.exactly_one(vals, t);
            }
        }
        std::vector<int> lits;
        for (int i = 0; i < ctx.num_literals(m); ++i) lits.push_back(f.var(VarKey::lit(m, i, t)));
        f.exactly_one(lits, t);
    }
    if (ctx.binary) encode_type_range(f, ctx, t);
}

void encode_init_plmg(CnfFormula& f, const PlmgEncodingCtx& ctx) {
    const Problem& p = *ctx.problem;
    for (int m = 0; m < static_cast<int>(ctx.cover->selected.size()); ++m) {
        const Plmg& g = ctx.group(m);
        bool active = false;
        for (const GroundAtom& fact : p.init) {
            const int i = matching_literal(p, g, fact);
            if (i < 0) continue;
            active = true;
            f.add_clause({f.var(VarKey::lit(m, i, 0))});
            const PlmgAtom& a = g.atoms[i];
            for (std::size_t j = 0; j < a.args.size(); ++j)
                if (a.args[j].counted)
                    for (int l : value_literals(f, ctx, m, a.args[j].index, fact.args[j], 0)) f.add_clause({l});
        }
        if (!active && !g.exactly_one) f.add_clause({f.var(VarKey::lit(m, ctx.none_literal(m), 0))});
    }
}

void encode_goal_plmg(CnfFormula& f, const PlmgEncodingCtx& ctx, int length) {
    const Problem& p = *ctx.problem;
    const auto& u = ctx.cover->uncovered;
    for (const GroundAtom& fact : p.goal) {
        bool represented = false;
        if (auto id = ctx.facts->id(fact)) represented = std::binary_search(u.begin(), u.end(), *id);
        for (int m = 0; m < static_cast<int>(ctx.cover->selected.size()); ++m) {
            const Plmg& g = ctx.group(m);
            const int i = matching_literal(p, g, fact);
            if (i < 0) continue;
            represented = true;
            f.add_clause({f.var(VarKey::lit(m, i, length))});
            const PlmgAtom& a = g.atoms[i];
            for (std::size_t j = 0; j < a.args.size(); ++j)
                if (a.args[j].counted)
                    for (int l : value_literals(f, ctx, m, a.args[j].index, fact.args[j], length))
                        f.add_clause({l});
        }
        if (!represented) throw ModelError("goal fact " + format(p, fact) + " is not represented in the state");
    }
}

void encode_helpers(CnfFormula& f, const PlmgEncodingCtx& ctx, int t) {
    const auto& types = ctx.problem->types;
    for (auto [m, c, slot] : ctx.in_dom_refs) {
        const int d = f.new_var(VarKey::in_dom(m, c, slot, t));
        const Range rv = types.members[ctx.ua->slots[slot].type];
        const Range rc = types.members[ctx.group(m).counted[c].type];
        for (ObjectId o = rv.lo; o < rv.hi; ++o)
            f.add_clause({-f.var(VarKey::arg_eq(slot, o, t)), rc.contains(o) ? d : -d});
    }
    if (ctx.binary) {
        encode_bits_for_args(f, ctx, t);
        encode_bit_equality(f, ctx, t);
    } else {
        for (auto [m, c, slot, phase] : ctx.eq_refs) {
            const int layer = phase == static_cast<int>(Phase::pre) ? t - 1 : t;
            const int eq = f.new_var(VarKey::cnt_eq_arg(m, c, slot, static_cast<Phase>(phase), t));
            const Range rv = types.members[ctx.ua->slots[slot].type];
            const Range rc = types.members[ctx.group(m).counted[c].type];
            for (ObjectId o = rc.lo; o < rc.hi; ++o) {
                const int val = f.var(VarKey::cnt_eq(m, c, o, layer));
                if (!rv.contains(o)) {
                    f.add_clause({-val, -eq});
                    continue;
                }
                const int arg = f.var(VarKey::arg_eq(slot, o, t));
                f.add_clause({-val, -arg, eq});
                f.add_clause({-eq, -val, arg});
                f.add_clause({-eq, -arg, val});
            }
        }
    }
    for (int m = 0; m < static_cast<int>(ctx.cover->selected.size()); ++m) {
        const Plmg& g = ctx.group(m);
        for (int c = 0; c < static_cast<int>(g.counted.size()); ++c) {
            const int changed = f.new_var(VarKey::cnt_changed(m, c, t));
            if (ctx.binary) continue;
            const Range rc = types.members[g.counted[c].type];
            for (ObjectId o = rc.lo; o < rc.hi; ++o)
                f.add_clause({-f.var(VarKey::cnt_eq(m, c, o, t - 1)), f.var(VarKey::cnt_eq(m, c, o, t)), changed});
        }
    }
    if (ctx.binary) encode_bit_change(f, ctx, t);
}

void encode_preconditions_plmg(CnfFormula& f, const PlmgEncodingCtx& ctx, int t) {
    for (const PlmgMatch& mt : ctx.matches) {
        if (mt.role != AtomRole::pre) continue;
        const Clause neg = negated_guard(f, mt, t);
        for (int r : rhs_literals(f, ctx, mt, t)) {
            Clause c = neg;
            c.push_back(r);
            f.add_clause(std::move(c));
        }
    }
}

void encode_effects_plmg(CnfFormula& f, const PlmgEncodingCtx& ctx, int t) {
    for (const PlmgMatch& mt : ctx.matches) {
        if (mt.role == AtomRole::pre) continue;
        const Clause neg = negated_guard(f, mt, t);
        const auto rhs = rhs_literals(f, ctx, mt, t);
        if (mt.role == AtomRole::add) {
            for (int r : rhs) {
                Clause c = neg;
                c.push_back(r);
                f.add_clause(std::move(c));
            }
        } else {
            Clause c = neg;
            for (int r : rhs) c.push_back(-r);
            f.add_clause(std::move(c));
        }
    }
}

void encode_causes_frames_plmg(CnfFormula& f, const PlmgEncodingCtx& ctx, int t) {
    const int ngroups = static_cast<int>(ctx.cover->selected.size());
    std::vector<std::vector<std::vector<int>>> lit_causes(ngroups), cnt_causes(ngroups);
    for (int m = 0; m < ngroups; ++m) {
        lit_causes[m].resize(ctx.num_literals(m));
        cnt_causes[m].resize(ctx.group(m).counted.size());
    }
    for (const PlmgMatch& mt : ctx.matches) {
        if (mt.role != AtomRole::add) continue;
        const Plmg& g = ctx.group(mt.group);
        std::vector<int> causes{f.new_var(VarKey::lit_cause(mt.group, mt.literal, mt.action, mt.atom, t))};
        lit_causes[mt.group][mt.literal].push_back(causes.back());
        for (int c : counted_of(g, mt.literal)) {
            causes.push_back(f.new_var(VarKey::cnt_cause(mt.group, c, mt.action, mt.atom, t)));
            cnt_causes[mt.group][c].push_back(causes.back());
        }
        const Clause neg = negated_guard(f, mt, t);
        const auto guard = guard_literals(f, mt, t);
        for (int x : causes) {
            Clause c = neg;
            c.push_back(x);
            f.add_clause(std::move(c));
            for (int gl : guard) f.add_clause({-x, gl});
        }
    }
    for (int m = 0; m < ngroups; ++m) {
        const Plmg& g = ctx.group(m);
        for (int c = 0; c < static_cast<int>(g.counted.size()); ++c) {
            Clause cl{-f.var(VarKey::cnt_changed(m, c, t))};
            cl.insert(cl.end(), cnt_causes[m][c].begin(), cnt_causes[m][c].end());
            f.add_clause(std::move(cl));
        }
        for (int i = 0; i < static_cast<int>(g.atoms.size()); ++i) {
            Clause cl{f.var(VarKey::lit(m, i, t - 1)), -f.var(VarKey::lit(m, i, t))};
            cl.insert(cl.end(), lit_causes[m][i].begin(), lit_causes[m][i].end());
            f.add_clause(std::move(cl));
        }
        if (!g.exactly_one && g.fam && ctx.none_persistence) {
            const int none = ctx.none_literal(m);
            f.add_clause({-f.var(VarKey::lit(m, none, t - 1)), f.var(VarKey::lit(m, none, t))});
        }
    }
}

}  // namespace pgsat
