#include "pgsat/action_layer.hpp"

#include <map>
#include <set>

namespace pgsat {

UnifiedArgs compute_unified_args(const Problem& problem) {
    UnifiedArgs ua;
    std::map<TypeId, int> have;  // slots allocated so far per type
    for (const ActionSchema& a : problem.actions) {
        std::map<TypeId, int> used;
        std::vector<int> mapping;
        for (const Param& p : a.params) {
            int rank = used[p.type]++;
            if (rank >= have[p.type]) {
                ua.slots.push_back({p.type, rank});
                ++have[p.type];
            }
            int slot = -1;
            for (std::size_t s = 0; s < ua.slots.size(); ++s)
                if (ua.slots[s].type == p.type && ua.slots[s].rank == rank) slot = static_cast<int>(s);
            mapping.push_back(slot);
        }
        ua.param_slot.push_back(std::move(mapping));
    }
    return ua;
}

Range param_domain(const Problem& problem, const UnifiedArgs& ua, ActionId a, int param) {
    const TypeId pt = problem.actions[a].params[param].type;
    return problem.types.members[pt].intersect(problem.types.members[ua.slots[ua.slot_of(a, param)].type]);
}

void encode_action_step(CnfFormula& f, int t, const Problem& problem, const UnifiedArgs& ua) {
    const int na = static_cast<int>(problem.actions.size());
    std::vector<int> acts;
    for (int a = 0; a < na; ++a) acts.push_back(f.new_var(VarKey::action(a, t)));
    for (int v = 0; v < static_cast<int>(ua.slots.size()); ++v) {
        const Range r = problem.types.members[ua.slots[v].type];
        for (ObjectId o = r.lo; o < r.hi; ++o) f.new_var(VarKey::arg_eq(v, o, t));
    }
    f.at_most_one(acts, t);
    for (int v = 0; v < static_cast<int>(ua.slots.size()); ++v) {
        const Range r = problem.types.members[ua.slots[v].type];
        std::vector<int> vals;
        for (ObjectId o = r.lo; o < r.hi; ++o) vals.push_back(f.var(VarKey::arg_eq(v, o, t)));
        f.at_most_one(vals, t);
    }
    for (int a = 0; a < na; ++a) {
        const ActionSchema& s = problem.actions[a];
        for (int p = 0; p < static_cast<int>(s.params.size()); ++p) {
            const int v = ua.slot_of(a, p);
            const Range slot = problem.types.members[ua.slots[v].type];
            const Range dom = param_domain(problem, ua, a, p);
            Clause c{-acts[a]};
            for (ObjectId o = dom.lo; o < dom.hi; ++o) c.push_back(f.var(VarKey::arg_eq(v, o, t)));
            f.add_clause(std::move(c));
            for (ObjectId o = slot.lo; o < slot.hi; ++o)
                if (!dom.contains(o)) f.add_clause({-acts[a], -f.var(VarKey::arg_eq(v, o, t))});
        }
    }
}

namespace {

// Init tuples of `pred` consistent with the atom's constants and the parameter domains.
std::vector<const GroundAtom*> supporting_tuples(const Problem& problem, const UnifiedArgs& ua, ActionId a,
                                                 const Atom& atom) {
    std::vector<const GroundAtom*> out;
    for (const GroundAtom& g : problem.init) {
        if (g.pred != atom.pred) continue;
        bool ok = true;
        std::map<int, ObjectId> bound;
        for (std::size_t j = 0; j < atom.args.size() && ok; ++j) {
            const Term& t = atom.args[j];
            if (t.is_object()) {
                ok = g.args[j] == t.index;
            } else {
                ok = param_domain(problem, ua, a, t.index).contains(g.args[j]);
                auto [it, fresh] = bound.emplace(t.index, g.args[j]);
                ok = ok && (fresh || it->second == g.args[j]);
            }
        }
        if (ok) out.push_back(&g);
    }
    return out;
}

int position_of(const Atom& atom, int param) {
    for (std::size_t j = 0; j < atom.args.size(); ++j)
        if (atom.args[j].is_param() && atom.args[j].index == param) return static_cast<int>(j);
    return -1;
}

}  // namespace

void encode_static_preconditions(CnfFormula& f, int t, const Problem& problem, const UnifiedArgs& ua,
                                 const std::vector<bool>& action_level) {
    for (ActionId a = 0; a < static_cast<ActionId>(problem.actions.size()); ++a) {
        const ActionSchema& s = problem.actions[a];
        const int act = f.var(VarKey::action(a, t));
        for (const Atom& pre : s.pre) {
            if (!action_level[pre.pred]) continue;
            std::vector<int> params;
            for (const Term& term : pre.args)
                if (term.is_param() && std::find(params.begin(), params.end(), term.index) == params.end())
                    params.push_back(term.index);
            auto support = supporting_tuples(problem, ua, a, pre);
            if (params.empty()) {
                if (support.empty()) f.add_clause({-act});
                continue;
            }
            // per-position filter
            for (int x : params) {
                const int pos = position_of(pre, x);
                std::set<ObjectId> ok;
                for (const GroundAtom* g : support) ok.insert(g->args[pos]);
                const Range dom = param_domain(problem, ua, a, x);
                const int v = ua.slot_of(a, x);
                for (ObjectId o = dom.lo; o < dom.hi; ++o)
                    if (!ok.contains(o)) f.add_clause({-act, -f.var(VarKey::arg_eq(v, o, t))});
            }
            if (params.size() != 2) continue;
            // completion: the first argument's value restricts the second
            const int x = params[0];
            const int y = params[1];
            const int px = position_of(pre, x);
            const int py = position_of(pre, y);
            std::map<ObjectId, std::set<ObjectId>> succ;
            for (const GroundAtom* g : support) succ[g->args[px]].insert(g->args[py]);
            for (const auto& [o, targets] : succ) {
                Clause c{-act, -f.var(VarKey::arg_eq(ua.slot_of(a, x), o, t))};
                for (ObjectId o2 : targets) c.push_back(f.var(VarKey::arg_eq(ua.slot_of(a, y), o2, t)));
                f.add_clause(std::move(c));
            }
        }
    }
}

void encode_compactness(CnfFormula& f, int t, const Problem& problem) {
    if (t < 2) return;
    const int na = static_cast<int>(problem.actions.size());
    for (int a = 0; a < na; ++a) {
        Clause c{-f.var(VarKey::action(a, t))};
        for (int b = 0; b < na; ++b) c.push_back(f.var(VarKey::action(b, t - 1)));
        f.add_clause(std::move(c));
    }
}

}  // namespace pgsat
