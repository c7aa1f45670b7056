#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "pgsat/encoder.hpp"
#include "pgsat/encoder_binary.hpp"
#include "pgsat/errors.hpp"
#include "pgsat/sat_solver.hpp"
#include "pgsat/solve.hpp"
#include "clauses.hpp"
#include "support.hpp"

using namespace pgsat;
using testing::entails;
using testing::has_clause;
using testing::has_exact_clause;

namespace {

struct Transport {
    Problem p = testing::load("transport-domain.pddl", "transport-p01.pddl");
    ActionId drive = *p.find_action("drive"), drop = *p.find_action("drop"), pickup = *p.find_action("pickup");
    ObjectId v = *p.find_object("v"), pk = *p.find_object("p"), l = *p.find_object("l");

    FactId fact(const Encoder& e, const char* pred, std::vector<ObjectId> args) const {
        return *e.facts().id(*p.find_predicate(pred), args);
    }
};

EncoderOptions with(Encoding e, bool prune = true) {
    EncoderOptions o;
    o.encoding = e;
    o.prune = prune;
    return o;
}

std::vector<testing::Instance> everything() {
    auto all = testing::suite();
    all.insert(all.end(), testing::extras().begin(), testing::extras().end());
    return all;
}

Assignment solve_model(const CnfFormula& f) {
    sat::Solver s(f.num_vars());
    for (const auto& c : f.clauses()) s.add_clause(c);
    if (s.solve() != sat::Result::sat) return {};
    Assignment a(f.num_vars() + 1, -1);
    for (int v = 1; v <= f.num_vars(); ++v) a[v] = s.value(v) ? 1 : 0;
    return a;
}

// The clauses of f over `vars` that mention one of `anchors`.
CnfFormula restrict_to(const CnfFormula& f, const std::set<int>& vars, const std::set<int>& anchors) {
    CnfFormula g;
    for (int v = 1; v <= f.num_vars(); ++v) g.new_var(f.key(v));
    for (const auto& c : f.clauses()) {
        auto in = [&](int l) { return vars.contains(std::abs(l)); };
        auto anchored = [&](int l) { return anchors.contains(std::abs(l)); };
        if (std::all_of(c.begin(), c.end(), in) && std::any_of(c.begin(), c.end(), anchored)) g.add_clause(c);
    }
    return g;
}

std::vector<int> pattern(const std::vector<int>& bits, int value) {
    std::vector<int> out;
    for (std::size_t b = 0; b < bits.size(); ++b) out.push_back(bit_of(value, b) ? bits[b] : -bits[b]);
    return out;
}

}  // namespace

TEST_CASE("ground encoding of the three-object transport instance") {
    Transport tr;
    const Encoder enc(tr.p, with(Encoding::ground));
    const CnfFormula f = enc.encode(1);
    auto fact = [&](const char* pred, std::vector<ObjectId> args, int t) {
        return f.var(VarKey::fact(tr.fact(enc, pred, args), t));
    };
    auto act = [&](ActionId a, int t) { return f.var(VarKey::action(a, t)); };
    auto arg = [&](int slot, ObjectId o, int t) { return f.var(VarKey::arg_eq(slot, o, t)); };

    CHECK(has_exact_clause(f, {fact("at", {tr.v, tr.l}, 0)}));
    CHECK(has_exact_clause(f, {fact("in", {tr.pk, tr.v}, 0)}));
    CHECK(has_exact_clause(f, {-fact("at", {tr.pk, tr.l}, 0)}));
    CHECK(has_exact_clause(f, {fact("at", {tr.pk, tr.l}, 1)}));

    CHECK(has_exact_clause(f, {-act(tr.drop, 1), -arg(0, tr.v, 1), -arg(1, tr.l, 1), fact("at", {tr.v, tr.l}, 0)}));
    CHECK(has_exact_clause(f, {-act(tr.drop, 1), -arg(0, tr.v, 1), -arg(3, tr.pk, 1), -fact("in", {tr.pk, tr.v}, 1)}));
    CHECK(has_exact_clause(f, {-act(tr.drop, 1), -arg(1, tr.l, 1), -arg(3, tr.pk, 1), fact("at", {tr.pk, tr.l}, 1)}));

    const int cause_add = f.var(VarKey::cause_ground(tr.drop, 0, tr.fact(enc, "at", {tr.pk, tr.l}), true, 1));
    CHECK(has_exact_clause(f, {-cause_add, act(tr.drop, 1)}));
    CHECK(has_exact_clause(f, {-cause_add, arg(1, tr.l, 1)}));
    CHECK(has_exact_clause(f, {-cause_add, arg(3, tr.pk, 1)}));
    const int cause_del = f.var(VarKey::cause_ground(tr.drop, 0, tr.fact(enc, "in", {tr.pk, tr.v}), false, 1));
    CHECK(has_exact_clause(f, {-fact("in", {tr.pk, tr.v}, 0), fact("in", {tr.pk, tr.v}, 1), cause_del}));

    // a solved instance at its optimum
    CHECK_FALSE(solve_model(f).empty());
    CHECK(solve_model(enc.encode(0)).empty());
}

TEST_CASE("ground step size on the three-object instance") {
    Transport tr;
    const Encoder enc(tr.p, with(Encoding::ground));
    const CnfFormula f = enc.encode(3);
    const auto& seg = f.segments();
    REQUIRE(seg.size() == 5);
    // per step: 3 action exclusions, 9 argument clauses, 2 road filters,
    // 3 compactness, 5 preconditions, 6 effects, 18 cause links, 6 frames
    CHECK(seg[2].clauses - seg[1].clauses == 52);
    CHECK(seg[3].clauses - seg[2].clauses == 52);
    CHECK(seg[1].clauses - seg[0].clauses == 49);
    // 3 actions, 4 argument values, 3 facts, 6 causes
    CHECK(seg[2].vars - seg[1].vars == 16);
}

TEST_CASE("a fact nothing changes keeps its initial value") {
    const Problem p = testing::load("rovers-domain.pddl", "rovers-p01.pddl");
    const Encoder enc(p, with(Encoding::ground));
    const CnfFormula f = enc.encode(2);
    const PredId ct = *p.find_predicate("can_traverse");
    int seen = 0;
    for (FactId x : enc.ground_ctx().state_facts) {
        if (enc.facts().predicate(x) != ct) continue;
        ++seen;
        CHECK(has_exact_clause(f, {-f.var(VarKey::fact(x, 0)), f.var(VarKey::fact(x, 1))}));
        CHECK(has_exact_clause(f, {f.var(VarKey::fact(x, 0)), -f.var(VarKey::fact(x, 1))}));
    }
    CHECK(seen > 0);
}

TEST_CASE("group encoding of the three-object transport instance") {
    Transport tr;
    const Encoder enc(tr.p, with(Encoding::plmg));
    REQUIRE(enc.cover().selected.size() == 2);
    REQUIRE(format(tr.p, enc.cover().selected[0]) == "EO   [p]  {at(p,?l), in(p,?v)}  2");
    REQUIRE(format(tr.p, enc.cover().selected[1]) == "EO   [v]  {at(v,?l)}  1");
    const int M = 0, m = 1, AT = 0, IN = 1, Lc = 0, Vc = 1;
    const int L = 1;
    const CnfFormula f = enc.encode(L);
    auto var = [&](const VarKey& k) { return f.var(k); };
    const int drop = var(VarKey::action(tr.drop, 1));
    const int slot_v = var(VarKey::arg_eq(0, tr.v, 1));
    const int slot_l = var(VarKey::arg_eq(1, tr.l, 1));
    const int slot_p = var(VarKey::arg_eq(3, tr.pk, 1));

    // skeleton
    CHECK(has_exact_clause(f, {var(VarKey::lit(M, AT, 0)), var(VarKey::lit(M, IN, 0))}));
    CHECK(has_exact_clause(f, {-var(VarKey::lit(M, AT, 0)), -var(VarKey::lit(M, IN, 0))}));
    CHECK(has_exact_clause(f, {var(VarKey::cnt_eq(M, Vc, tr.v, 0))}));
    // init and goal
    CHECK(has_exact_clause(f, {var(VarKey::lit(M, IN, 0))}));
    CHECK(has_exact_clause(f, {var(VarKey::lit(M, AT, L))}));
    CHECK(has_exact_clause(f, {var(VarKey::cnt_eq(M, Lc, tr.l, L))}));

    // preconditions
    const int dom_v = var(VarKey::in_dom(M, Vc, 0, 1));
    CHECK(has_exact_clause(f, {-drop, -slot_p, -dom_v, var(VarKey::lit(M, IN, 0))}));
    CHECK(has_exact_clause(f, {-drop, -slot_p, -dom_v, var(VarKey::cnt_eq_arg(M, Vc, 0, Phase::pre, 1))}));
    const int dom_l_m = var(VarKey::in_dom(m, Lc, 1, 1));
    CHECK(has_exact_clause(f, {-drop, -slot_v, -dom_l_m, var(VarKey::lit(m, AT, 0))}));
    CHECK(has_exact_clause(f, {-drop, -slot_v, -dom_l_m, var(VarKey::cnt_eq_arg(m, Lc, 1, Phase::pre, 1))}));

    // effects
    const int dom_l = var(VarKey::in_dom(M, Lc, 1, 1));
    CHECK(has_exact_clause(f, {-drop, -slot_p, -dom_l, var(VarKey::lit(M, AT, 1))}));
    CHECK(has_exact_clause(f, {-drop, -slot_p, -dom_l, var(VarKey::cnt_eq_arg(M, Lc, 1, Phase::post, 1))}));
    CHECK(has_exact_clause(f, {-drop, -slot_p, -dom_v, -var(VarKey::lit(M, IN, 1)),
                               -var(VarKey::cnt_eq_arg(M, Vc, 0, Phase::post, 1))}));

    // causes, both directions, and the rising frame
    const int lc = var(VarKey::lit_cause(M, AT, tr.drop, 0, 1));
    const int cc = var(VarKey::cnt_cause(M, Lc, tr.drop, 0, 1));
    CHECK(has_exact_clause(f, {-drop, -slot_p, -dom_l, lc}));
    CHECK(has_exact_clause(f, {-drop, -slot_p, -dom_l, cc}));
    for (int x : {lc, cc})
        for (int g : {drop, slot_p, dom_l}) CHECK(has_exact_clause(f, {-x, g}));
    CHECK(has_exact_clause(f, {var(VarKey::lit(M, AT, 0)), -var(VarKey::lit(M, AT, 1)), lc}));
    CHECK(has_clause(f, {-var(VarKey::cnt_changed(M, Lc, 1)), cc,
                         var(VarKey::cnt_cause(M, Lc, tr.drop, 0, 1))}));

    // helpers
    CHECK(has_exact_clause(f, {-slot_l, dom_l}));
    const int eq = var(VarKey::cnt_eq_arg(M, Lc, 1, Phase::post, 1));
    const int val = var(VarKey::cnt_eq(M, Lc, tr.l, 1));
    CHECK(has_exact_clause(f, {-val, -slot_l, eq}));
    CHECK(has_exact_clause(f, {-eq, -val, slot_l}));
    CHECK(has_exact_clause(f, {-eq, -slot_l, val}));
    CHECK(has_exact_clause(f, {-var(VarKey::cnt_eq(M, Lc, tr.l, 0)), val, var(VarKey::cnt_changed(M, Lc, 1))}));

    // cause variables come from add effects only
    for (int x = 1; x <= f.num_vars(); ++x) {
        const VarKey& k = f.key(x);
        if (k.kind != VarKind::lit_cause) continue;
        const auto& adds = tr.p.actions[k.f[2]].add;
        REQUIRE(k.f[3] < static_cast<int>(adds.size()));
        CHECK(adds[k.f[3]].pred == enc.cover().selected[k.f[0]].atoms[k.f[1]].pred);
    }
}

TEST_CASE("the delete clause is the negated conjunction") {
    // truth table of (guard -> not(a and b)) for the five literals
    Transport tr;
    const Encoder enc(tr.p, with(Encoding::plmg));
    const CnfFormula f = enc.encode(1);
    const std::vector<int> lits{f.var(VarKey::action(tr.drop, 1)), f.var(VarKey::arg_eq(3, tr.pk, 1)),
                                f.var(VarKey::in_dom(0, 1, 0, 1)), f.var(VarKey::lit(0, 1, 1)),
                                f.var(VarKey::cnt_eq_arg(0, 1, 0, Phase::post, 1))};
    Clause c;
    for (int l : lits) c.push_back(-l);
    REQUIRE(has_exact_clause(f, c));
    std::vector<char> value(f.num_vars() + 1, 0);
    for (unsigned mask = 0; mask < 32; ++mask) {
        for (int i = 0; i < 5; ++i) value[lits[i]] = (mask >> i) & 1;
        CHECK(testing::clause_satisfied(c, value) == (mask != 31));
    }
}

TEST_CASE("at-most-one groups get a none literal that persists") {
    const Problem p = testing::load("transport-destroy-domain.pddl", "transport-destroy-p01.pddl");
    const Encoder enc(p, with(Encoding::plmg));
    const CnfFormula f = enc.encode(2);
    int amo = 0;
    for (int m = 0; m < static_cast<int>(enc.cover().selected.size()); ++m) {
        const int none = enc.plmg_ctx().none_literal(m);
        if (none < 0) continue;
        ++amo;
        CHECK(has_exact_clause(f, {-f.var(VarKey::lit(m, none, 1)), f.var(VarKey::lit(m, none, 2))}));
        CHECK_FALSE(f.has(VarKey::lit_cause(m, none, 0, 0, 1)));
    }
    CHECK(amo > 0);

    EncoderOptions off = with(Encoding::plmg);
    off.none_persistence = false;
    const Encoder loose(p, off);
    const CnfFormula g = loose.encode(2);
    for (int m = 0; m < static_cast<int>(loose.cover().selected.size()); ++m) {
        const int none = loose.plmg_ctx().none_literal(m);
        if (none >= 0) CHECK_FALSE(has_exact_clause(g, {-g.var(VarKey::lit(m, none, 1)), g.var(VarKey::lit(m, none, 2))}));
    }
}

TEST_CASE("bit counts and patterns") {
    CHECK(bit_count(1) == 0);
    CHECK(bit_count(2) == 1);
    CHECK(bit_count(3) == 2);
    CHECK(bit_count(5) == 3);
    CHECK(bit_count(8) == 3);
    CHECK(bit_count(9) == 4);
    CHECK(bit_of(2, 1));
    CHECK_FALSE(bit_of(2, 0));
}

TEST_CASE("range clauses exclude exactly the patterns outside the range") {
    CHECK(range_clauses({1, 2}, 0, 2) == std::vector<Clause>{{-2, -1}});
    CHECK(range_clauses({1, 2}, 3, 3) == std::vector<Clause>{{-2, 1}, {2}});
    for (int nb = 1; nb <= 4; ++nb) {
        std::vector<int> bits;
        for (int b = 0; b < nb; ++b) bits.push_back(b + 1);
        for (int lo = 0; lo < (1 << nb); ++lo)
            for (int hi = lo; hi < (1 << nb); ++hi) {
                const auto cs = range_clauses(bits, lo, hi);
                std::vector<char> value(nb + 1);
                for (int x = 0; x < (1 << nb); ++x) {
                    for (int b = 0; b < nb; ++b) value[b + 1] = bit_of(x, b);
                    bool all = true;
                    for (const auto& c : cs) all = all && testing::clause_satisfied(c, value);
                    CHECK_MESSAGE(all == (lo <= x && x <= hi), "B=" << nb << " [" << lo << "," << hi << "] x=" << x);
                }
            }
    }
}

TEST_CASE("binary encoding blocks") {
    const Problem p = testing::load("transport-domain.pddl", "transport-p03.pddl");
    const Encoder enc(p, with(Encoding::binary));
    const auto& ctx = enc.plmg_ctx();
    REQUIRE(ctx.bits == 3);
    const int t = 2;
    const CnfFormula f = enc.encode(3);

    // argument bits follow the one-hot value
    for (int slot : ctx.bit_slots) {
        const Range r = p.types.members[enc.unified_args().slots[slot].type];
        for (ObjectId o = r.lo; o < r.hi; ++o)
            for (int b = 0; b < 3; ++b) {
                const int bit = f.var(VarKey::arg_bit(slot, b, t));
                CHECK(has_exact_clause(f, {-f.var(VarKey::arg_eq(slot, o, t)), bit_of(o, b) ? bit : -bit}));
            }
    }

    REQUIRE_FALSE(ctx.eq_refs.empty());
    for (auto [m, c, slot, phase] : ctx.eq_refs) {
        const Phase ph = static_cast<Phase>(phase);
        const int layer = ph == Phase::pre ? t - 1 : t;
        std::vector<int> vb, cb;
        std::set<int> vars, anchors;
        for (int b = 0; b < 3; ++b) {
            vb.push_back(f.var(VarKey::arg_bit(slot, b, t)));
            cb.push_back(f.var(VarKey::cnt_bit(m, c, b, layer)));
            anchors.insert(f.var(VarKey::bit_eq(m, c, slot, b, ph, t)));
            vars.insert({vb.back(), cb.back(), f.var(VarKey::bit_eq(m, c, slot, b, ph, t))});
        }
        const int eq = f.var(VarKey::cnt_eq_arg(m, c, slot, ph, t));
        vars.insert(eq);
        anchors.insert(eq);
        const CnfFormula block = restrict_to(f, vars, anchors);
        CHECK(block.num_clauses() == 4 * 3 + 1);
        for (int x = 0; x < 8; ++x)
            for (int y = 0; y < 8; ++y) {
                auto units = pattern(vb, x);
                for (int u : pattern(cb, y)) units.push_back(u);
                CHECK(entails(block, units, x == y ? eq : -eq));
            }
    }

    for (int m = 0; m < static_cast<int>(enc.cover().selected.size()); ++m)
        for (int c = 0; c < static_cast<int>(enc.cover().selected[m].counted.size()); ++c) {
            std::vector<int> before, after;
            std::set<int> vars, anchors;
            const int changed = f.var(VarKey::cnt_changed(m, c, t));
            vars.insert(changed);
            anchors.insert(changed);
            for (int b = 0; b < 3; ++b) {
                before.push_back(f.var(VarKey::cnt_bit(m, c, b, t - 1)));
                after.push_back(f.var(VarKey::cnt_bit(m, c, b, t)));
                anchors.insert(f.var(VarKey::cnt_changed_bit(m, c, b, t)));
                vars.insert({before.back(), after.back(), f.var(VarKey::cnt_changed_bit(m, c, b, t))});
            }
            const CnfFormula block = restrict_to(f, vars, anchors);
            CHECK(block.num_clauses() == 3 * 3 + 1);
            for (int x = 0; x < 8; ++x)
                for (int y = 0; y < 8; ++y) {
                    auto units = pattern(before, x);
                    for (int u : pattern(after, y)) units.push_back(u);
                    if (x != y) CHECK(entails(block, units, changed));
                    units.push_back(-changed);
                    CHECK((testing::solve_with(block, units) == sat::Result::sat) == (x == y));
                }
        }
}

TEST_CASE("state variables per layer, one-hot against bits") {
    const Problem p = testing::load("transport-domain.pddl", "transport-p03.pddl");
    auto count = [&](Encoding e, VarKind kind) {
        const Encoder enc(p, with(e));
        const CnfFormula f = enc.encode(0);
        int n = 0;
        for (int v = 1; v <= f.num_vars(); ++v) n += f.key(v).kind == kind;
        return n;
    };
    // package group: l over 3 locations, v over 1 truck; truck group: l over 3
    CHECK(count(Encoding::plmg, VarKind::cnt_eq) == 3 + 1 + 3);
    CHECK(count(Encoding::binary, VarKind::cnt_bit) == 3 * 3);
    CHECK(count(Encoding::binary, VarKind::cnt_eq) == 0);
}

TEST_CASE("formula size grows by a constant per step") {
    for (const auto& inst : everything()) {
        const Problem p = testing::load(inst);
        for (Encoding e : {Encoding::ground, Encoding::plmg, Encoding::binary}) {
            const Encoder enc(p, with(e));
            std::vector<std::size_t> clauses;
            std::vector<int> vars;
            for (int L = 1; L <= 6; ++L) {
                const CnfFormula f = enc.encode(L);
                clauses.push_back(f.num_clauses());
                vars.push_back(f.num_vars());
            }
            for (std::size_t i = 2; i < clauses.size(); ++i) {
                CHECK_MESSAGE(clauses[i] - clauses[i - 1] == clauses[1] - clauses[0], inst.problem << " " << to_string(e));
                CHECK_MESSAGE(vars[i] - vars[i - 1] == vars[1] - vars[0], inst.problem << " " << to_string(e));
            }
        }
    }
}

TEST_CASE("formulas are byte-identical across runs") {
    const Problem p = testing::load("blocksworld-domain.pddl", "blocksworld-p02.pddl");
    for (Encoding e : {Encoding::ground, Encoding::plmg, Encoding::binary}) {
        const Encoder a(p, with(e));
        const Encoder b(p, with(e));
        CHECK(a.encode(3).clauses() == b.encode(3).clauses());
    }
}

TEST_CASE("decoded layers follow the simulated plan") {
    for (const auto& inst : everything()) {
        const Problem p = testing::load(inst);
        for (Encoding e : {Encoding::ground, Encoding::plmg, Encoding::binary}) {
            for (bool prune : {true, false}) {
                const Encoder enc(p, with(e, prune));
                const int L = inst.optimum;
                const CnfFormula f = enc.encode(L);
                const Assignment a = solve_model(f);
                REQUIRE_MESSAGE(!a.empty(), inst.problem << " " << to_string(e));
                if (L > 0) CHECK_MESSAGE(solve_model(enc.encode(L - 1)).empty(), inst.problem << " " << to_string(e));
                const Plan plan = extract_plan(f, a, p, enc.unified_args(), L);
                CHECK(plan.length() == L);
                const auto layers = enc.decode_states(f, a, L);

                std::set<FactId> represented(enc.ground_ctx().state_facts.begin(), enc.ground_ctx().state_facts.end());
                for (const auto& g : enc.cover().selected) represented.insert(g.ground_facts.begin(), g.ground_facts.end());

                testing::RefState s = testing::ref_init(p);
                for (int t = 0; t <= L; ++t) {
                    if (t > 0) {
                        bool applied = false;
                        for (auto& step : testing::ref_successors(p, s))
                            if (step.action == plan.steps[t - 1]) {
                                s = step.next;
                                applied = true;
                                break;
                            }
                        REQUIRE(applied);
                    }
                    std::set<FactId> truth;
                    for (const auto& g : s) {
                        auto id = enc.facts().id(g);
                        if (id && represented.contains(*id)) truth.insert(*id);
                    }
                    const std::set<FactId> model(layers[t].begin(), layers[t].end());
                    if (e == Encoding::ground) {
                        CHECK_MESSAGE(model == truth, inst.problem << " layer " << t);
                    } else {
                        CHECK_MESSAGE(std::includes(truth.begin(), truth.end(), model.begin(), model.end()),
                                      inst.problem << " " << to_string(e) << " layer " << t);
                        // exactly-one groups always name the true fact
                        for (const auto& g : enc.cover().selected) {
                            if (!g.exactly_one) continue;
                            for (FactId x : g.ground_facts)
                                if (truth.contains(x)) CHECK(model.contains(x));
                        }
                    }
                }
                CHECK(testing::ref_goal(p, s));
            }
        }
    }
}

TEST_CASE("goal facts of pruned predicates stay in the formula") {
    const Problem p = parse(R"(
(define (domain d) (:requirements :strips :typing) (:types x)
  (:predicates (on ?a - x) (mark ?a - x))
  (:action go :parameters (?a - x) :precondition (on ?a) :effect (and (not (on ?a)) (mark ?a)))))",
                            "(define (problem p) (:domain d) (:objects a b - x) (:init (on a)) (:goal (mark b)))");
    for (Encoding e : {Encoding::ground, Encoding::plmg}) {
        const Encoder enc(p, with(e));
        CHECK_NOTHROW(enc.encode(1));
    }
    CHECK_THROWS_AS(Encoder(p, with(Encoding::ground)).encode(-1), ModelError);
}
