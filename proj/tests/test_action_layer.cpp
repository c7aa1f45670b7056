#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pgsat/action_layer.hpp"
#include "pgsat/encoder.hpp"
#include "pgsat/grounding.hpp"
#include "pgsat/sat_solver.hpp"
#include "clauses.hpp"
#include "support.hpp"

using namespace pgsat;
using testing::has_exact_clause;

namespace {

std::vector<Slot> slots_of(const Problem& p, std::initializer_list<std::pair<const char*, int>> want) {
    std::vector<Slot> s;
    for (auto [type, rank] : want) s.push_back({*p.types.find(type), rank});
    return s;
}

int av(const CnfFormula& f, const Problem& p, const char* action, int t) {
    return f.var(VarKey::action(*p.find_action(action), t));
}

int arg(const CnfFormula& f, const Problem& p, int slot, const char* obj, int t) {
    return f.var(VarKey::arg_eq(slot, *p.find_object(obj), t));
}

CnfFormula step_formula(const Problem& p, const UnifiedArgs& ua, int steps) {
    CnfFormula f;
    for (int t = 1; t <= steps; ++t) {
        encode_action_step(f, t, p, ua);
        encode_compactness(f, t, p);
    }
    return f;
}

}  // namespace

TEST_CASE("transport shares one vehicle, two location and one package slot") {
    const Problem p = testing::load("transport-domain.pddl", "transport-p01.pddl");
    const UnifiedArgs ua = compute_unified_args(p);
    CHECK(ua.slots == slots_of(p, {{"vehicle", 0}, {"location", 0}, {"location", 1}, {"package", 0}}));
    CHECK(ua.param_slot[*p.find_action("drive")] == std::vector<int>{0, 1, 2});
    CHECK(ua.param_slot[*p.find_action("drop")] == std::vector<int>{0, 1, 3});
    CHECK(ua.param_slot[*p.find_action("pickup")] == std::vector<int>{0, 1, 3});
}

TEST_CASE("slot count per type is the largest per-action count") {
    const Problem p = parse(R"(
(define (domain d) (:requirements :strips :typing) (:types T)
  (:predicates (q ?x - T))
  (:action a :parameters (?x ?y - T) :precondition (q ?x) :effect (q ?y))
  (:action b :parameters (?z - T) :precondition (q ?z) :effect (not (q ?z)))))",
                            "(define (problem p) (:domain d) (:objects o - T) (:init) (:goal (and)))");
    const UnifiedArgs ua = compute_unified_args(p);
    CHECK(ua.slots.size() == 2);
    CHECK(ua.slot_of(1, 0) == 0);

    for (const auto& inst : testing::suite()) {
        const Problem q = testing::load(inst);
        const UnifiedArgs u = compute_unified_args(q);
        for (std::size_t s = 0; s < u.slots.size(); ++s) {
            int best = 0;
            for (const auto& a : q.actions) {
                int n = 0;
                for (const auto& prm : a.params) n += prm.type == u.slots[s].type;
                best = std::max(best, n);
            }
            int count = 0;
            for (const auto& other : u.slots) count += other.type == u.slots[s].type;
            CHECK(count == best);
        }
        for (ActionId a = 0; a < static_cast<ActionId>(q.actions.size()); ++a) {
            std::set<int> used;
            for (int i = 0; i < static_cast<int>(q.actions[a].params.size()); ++i) {
                CHECK(used.insert(u.slot_of(a, i)).second);
                CHECK(u.slots[u.slot_of(a, i)].type == q.actions[a].params[i].type);
            }
        }
    }
}

TEST_CASE("action step clauses") {
    const Problem p = testing::load("transport-domain.pddl", "transport-p01.pddl");
    const UnifiedArgs ua = compute_unified_args(p);
    CnfFormula f;
    encode_action_step(f, 1, p, ua);
    // 3 pairwise action clauses, single-object slots need none, 9 argument clauses
    CHECK(f.num_clauses() == 3 + 9);
    CHECK(has_exact_clause(f, {-av(f, p, "drive", 1), -av(f, p, "drop", 1)}));
    CHECK(has_exact_clause(f, {-av(f, p, "drop", 1), arg(f, p, 3, "p", 1)}));
    CHECK(f.num_vars() == 3 + 4);
}

TEST_CASE("static binary precondition restricts the second slot") {
    const std::string domain = R"(
(define (domain d) (:requirements :strips :typing) (:types vehicle location)
  (:predicates (road ?a ?b - location) (at ?v - vehicle ?l - location))
  (:action drive :parameters (?v - vehicle ?l1 ?l2 - location)
     :precondition (and (at ?v ?l1) (road ?l1 ?l2)) :effect (and (not (at ?v ?l1)) (at ?v ?l2)))))";
    const Problem p = parse(domain, "(define (problem p) (:domain d) (:objects v - vehicle l1 l2 - location)"
                                    " (:init (at v l1) (road l1 l2)) (:goal (at v l2)))");
    const UnifiedArgs ua = compute_unified_args(p);
    CnfFormula f;
    encode_action_step(f, 1, p, ua);
    const std::size_t before = f.num_clauses();
    encode_static_preconditions(f, 1, p, ua, action_level_statics(p));
    const int drive = av(f, p, "drive", 1);
    CHECK(has_exact_clause(f, {-drive, -arg(f, p, 1, "l1", 1), arg(f, p, 2, "l2", 1)}));
    CHECK(has_exact_clause(f, {-drive, -arg(f, p, 1, "l2", 1)}));
    CHECK(has_exact_clause(f, {-drive, -arg(f, p, 2, "l1", 1)}));
    CHECK(f.num_clauses() - before == 3);

    const Problem none = parse(R"(
(define (domain d) (:requirements :strips) (:predicates (q))
  (:action a :parameters () :precondition (q) :effect (not (q)))))",
                               "(define (problem p) (:domain d) (:init (q)) (:goal (and)))");
    CnfFormula g;
    const UnifiedArgs ub = compute_unified_args(none);
    encode_action_step(g, 1, none, ub);
    const std::size_t n = g.num_clauses();
    encode_static_preconditions(g, 1, none, ub, action_level_statics(none));
    CHECK(g.num_clauses() == n);
}

TEST_CASE("an unsatisfiable unary static makes its action unusable") {
    const Problem p = parse(R"(
(define (domain d) (:requirements :strips :typing) (:types vehicle)
  (:predicates (fuel-ok ?v - vehicle) (done))
  (:action go :parameters (?v - vehicle) :precondition (fuel-ok ?v) :effect (done))))",
                            "(define (problem p) (:domain d) (:objects v1 v2 - vehicle) (:init) (:goal (done)))");
    CHECK_FALSE(testing::reference_optimum(p).has_value());
    for (Encoding e : {Encoding::ground, Encoding::plmg, Encoding::binary}) {
        EncoderOptions eo;
        eo.encoding = e;
        const Encoder enc(p, eo);
        for (int L = 0; L <= 3; ++L) CHECK(testing::solve_with(enc.encode(L), {}) == sat::Result::unsat);
    }
}

TEST_CASE("compactness") {
    const Problem p = testing::load("transport-domain.pddl", "transport-p01.pddl");
    const UnifiedArgs ua = compute_unified_args(p);
    CnfFormula f;
    encode_action_step(f, 1, p, ua);
    encode_compactness(f, 1, p);
    const std::size_t one = f.num_clauses();
    CHECK(one == 12);
    encode_action_step(f, 2, p, ua);
    const std::size_t mid = f.num_clauses();
    encode_compactness(f, 2, p);
    CHECK(f.num_clauses() - mid == 3);
    for (std::size_t i = mid; i < f.num_clauses(); ++i) CHECK(f.clauses()[i].size() == 4);

    // a gap before the first action is rejected
    std::vector<int> units{-av(f, p, "drive", 1), -av(f, p, "drop", 1), -av(f, p, "pickup", 1),
                           av(f, p, "drop", 2)};
    CHECK(testing::solve_with(f, units) == sat::Result::unsat);
    units.pop_back();
    CHECK(testing::solve_with(f, units) == sat::Result::sat);
}

TEST_CASE("models select one well-typed action per step as a prefix") {
    std::mt19937 rng(3);
    for (const auto& inst : testing::suite()) {
        const Problem p = testing::load(inst);
        const UnifiedArgs ua = compute_unified_args(p);
        const int L = 4;
        CnfFormula f = step_formula(p, ua, L);
        for (int round = 0; round < 5; ++round) {
            // random nudges give different models
            std::vector<int> units;
            std::uniform_int_distribution<int> pick(0, static_cast<int>(p.actions.size()) - 1);
            units.push_back(f.var(VarKey::action(pick(rng), 1 + round % 2)));
            sat::Solver s(f.num_vars());
            for (const auto& c : f.clauses()) s.add_clause(c);
            for (int u : units) s.add_clause({u});
            REQUIRE(s.solve() == sat::Result::sat);
            bool idle = false;
            for (int t = 1; t <= L; ++t) {
                int chosen = -1, count = 0;
                for (ActionId a = 0; a < static_cast<ActionId>(p.actions.size()); ++a)
                    if (s.value(f.var(VarKey::action(a, t)))) {
                        chosen = a;
                        ++count;
                    }
                CHECK(count <= 1);
                if (count == 0) {
                    idle = true;
                    continue;
                }
                CHECK_FALSE(idle);
                for (int i = 0; i < static_cast<int>(p.actions[chosen].params.size()); ++i) {
                    const int slot = ua.slot_of(chosen, i);
                    const Range r = p.types.members[ua.slots[slot].type];
                    int set = 0;
                    for (ObjectId o = r.lo; o < r.hi; ++o)
                        if (s.value(f.var(VarKey::arg_eq(slot, o, t)))) {
                            ++set;
                            CHECK(p.types.contains(p.actions[chosen].params[i].type, o));
                        }
                    CHECK(set == 1);
                }
            }
        }
    }
}
