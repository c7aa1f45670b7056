#include "pgsat/encoder_ground.hpp"

#include <algorithm>

#include "pgsat/errors.hpp"

namespace pgsat {

namespace {

template <class Fn>
void for_each_instance(const Problem& problem, const FactSpace& facts, const UnifiedArgs& ua, ActionId a,
                       const Atom& atom, Fn&& fn) {
    std::vector<int> params;
    for (const Term& t : atom.args)
        if (t.is_param() && std::find(params.begin(), params.end(), t.index) == params.end())
            params.push_back(t.index);
    std::vector<Range> dom;
    for (int p : params) {
        dom.push_back(param_domain(problem, ua, a, p));
        if (dom.back().empty()) return;
    }
    std::vector<ObjectId> value(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) value[i] = dom[i].lo;
    std::vector<ObjectId> args(atom.args.size());
    for (;;) {
        GroundInstance inst;
        inst.action = a;
        for (std::size_t i = 0; i < params.size(); ++i) inst.guard.emplace_back(ua.slot_of(a, params[i]), value[i]);
        for (std::size_t j = 0; j < atom.args.size(); ++j) {
            const Term& t = atom.args[j];
            args[j] = t.is_object() ? t.index
                                    : value[std::find(params.begin(), params.end(), t.index) - params.begin()];
        }
        inst.fact = facts.id(atom.pred, args);
        fn(std::move(inst));
        int i = static_cast<int>(params.size()) - 1;
        for (; i >= 0; --i) {
            if (++value[i] < dom[i].hi) break;
            value[i] = dom[i].lo;
        }
        if (i < 0) break;
    }
}

Clause negated_guard(const CnfFormula& f, const GroundInstance& inst, int t) {
    Clause c{-f.var(VarKey::action(inst.action, t))};
    for (auto [slot, o] : inst.guard) c.push_back(-f.var(VarKey::arg_eq(slot, o, t)));
    return c;
}

}  // namespace

GroundEncodingCtx make_ground_ctx(const Problem& problem, const FactSpace& facts, const UnifiedArgs& ua,
                                  const CoverResult& cover, const std::vector<char>& grouped) {
    GroundEncodingCtx ctx;
    ctx.problem = &problem;
    ctx.facts = &facts;
    ctx.ua = &ua;
    ctx.state_facts = cover.uncovered;
    ctx.individual.assign(facts.size(), 0);
    for (FactId f : ctx.state_facts) ctx.individual[f] = 1;
    ctx.state_predicate = cover.state_predicate;
    ctx.adders.resize(facts.size());
    ctx.deleters.resize(facts.size());
    std::vector<char> has_individual(problem.predicates.size(), 0);
    for (FactId f : ctx.state_facts) has_individual[facts.predicate(f)] = 1;

    for (ActionId a = 0; a < static_cast<ActionId>(problem.actions.size()); ++a) {
        const ActionSchema& s = problem.actions[a];
        for (int i = 0; i < static_cast<int>(s.pre.size()); ++i) {
            if (!ctx.state_predicate[s.pre[i].pred]) continue;
            for_each_instance(problem, facts, ua, a, s.pre[i], [&](GroundInstance inst) {
                inst.atom = i;
                if (inst.fact && !ctx.individual[*inst.fact]) {
                    if (*inst.fact < static_cast<FactId>(grouped.size()) && grouped[*inst.fact]) return;
                    throw ModelError("precondition fact " + format(problem, facts.atom(*inst.fact)) + " of " +
                                     s.name + " is not represented in the state");
                }
                ctx.pre.push_back(std::move(inst));
            });
        }
        auto effects = [&](const std::vector<Atom>& list, std::vector<GroundInstance>& out,
                           std::vector<std::vector<int>>& index) {
            for (int i = 0; i < static_cast<int>(list.size()); ++i) {
                if (!has_individual[list[i].pred]) continue;
                for_each_instance(problem, facts, ua, a, list[i], [&](GroundInstance inst) {
                    if (!inst.fact || !ctx.individual[*inst.fact]) return;
                    inst.atom = i;
                    index[*inst.fact].push_back(static_cast<int>(out.size()));
                    out.push_back(std::move(inst));
                });
            }
        };
        effects(s.add, ctx.add, ctx.adders);
        effects(s.del, ctx.del, ctx.deleters);
    }
    return ctx;
}

void allocate_fact_layer(CnfFormula& f, const GroundEncodingCtx& ctx, int t) {
    for (FactId fact : ctx.state_facts) f.new_var(VarKey::fact(fact, t));
}

void encode_init(CnfFormula& f, const GroundEncodingCtx& ctx) {
    std::vector<char> init(ctx.facts->size(), 0);
    for (const auto& g : ctx.problem->init)
        if (auto id = ctx.facts->id(g)) init[*id] = 1;
    for (FactId fact : ctx.state_facts) {
        const int x = f.var(VarKey::fact(fact, 0));
        f.add_clause({init[fact] ? x : -x});
    }
}

void encode_goal(CnfFormula& f, const GroundEncodingCtx& ctx, int length) {
    for (const auto& g : ctx.problem->goal) {
        auto id = ctx.facts->id(g);
        if (!id) throw ModelError("goal fact " + format(*ctx.problem, g) + " is not type-correct");
        if (ctx.individual[*id]) f.add_clause({f.var(VarKey::fact(*id, length))});
    }
}

void encode_preconditions(CnfFormula& f, const GroundEncodingCtx& ctx, int t) {
    for (const GroundInstance& inst : ctx.pre) {
        Clause c = negated_guard(f, inst, t);
        if (inst.fact) c.push_back(f.var(VarKey::fact(*inst.fact, t - 1)));
        f.add_clause(std::move(c));
    }
}

void encode_effects(CnfFormula& f, const GroundEncodingCtx& ctx, int t) {
    for (const GroundInstance& inst : ctx.add) {
        Clause c = negated_guard(f, inst, t);
        c.push_back(f.var(VarKey::fact(*inst.fact, t)));
        f.add_clause(std::move(c));
    }
    for (const GroundInstance& inst : ctx.del) {
        Clause c = negated_guard(f, inst, t);
        c.push_back(-f.var(VarKey::fact(*inst.fact, t)));
        f.add_clause(std::move(c));
    }
}

void encode_causes_and_frames(CnfFormula& f, const GroundEncodingCtx& ctx, int t) {
    auto causes = [&](const std::vector<GroundInstance>& list, bool positive) {
        for (const GroundInstance& inst : list) {
            const int c = f.new_var(VarKey::cause_ground(inst.action, inst.atom, *inst.fact, positive, t));
            f.add_clause({-c, f.var(VarKey::action(inst.action, t))});
            for (auto [slot, o] : inst.guard) f.add_clause({-c, f.var(VarKey::arg_eq(slot, o, t))});
        }
    };
    causes(ctx.add, true);
    causes(ctx.del, false);
    for (FactId fact : ctx.state_facts) {
        const int before = f.var(VarKey::fact(fact, t - 1));
        const int after = f.var(VarKey::fact(fact, t));
        Clause fall{-before, after};
        for (int i : ctx.deleters[fact]) {
            const GroundInstance& inst = ctx.del[i];
            fall.push_back(f.var(VarKey::cause_ground(inst.action, inst.atom, fact, false, t)));
        }
        f.add_clause(std::move(fall));
        Clause rise{before, -after};
        for (int i : ctx.adders[fact]) {
            const GroundInstance& inst = ctx.add[i];
            rise.push_back(f.var(VarKey::cause_ground(inst.action, inst.atom, fact, true, t)));
        }
        f.add_clause(std::move(rise));
    }
}

}  // namespace pgsat
