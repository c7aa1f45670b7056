#pragma once

// State as selected mutex groups: one literal selector per group plus a value
// per counted variable, either one-hot or as bits.

#include <set>
#include <tuple>
#include <vector>

#include "pgsat/action_layer.hpp"
#include "pgsat/cnf.hpp"
#include "pgsat/cover.hpp"
#include "pgsat/encoder_ground.hpp"

namespace pgsat {

struct GuardLit {
    bool in_dom = false;  // (slot in D(counted)) instead of (slot = object)
    int slot = 0;
    int value = 0;  // object, or counted variable index
    friend bool operator==(const GuardLit&, const GuardLit&) = default;
};

// Counted variable equal to a slot (slot >= 0) or to a constant object.
struct RhsTerm {
    int counted = 0;
    int slot = -1;
    ObjectId object = -1;
};

struct PlmgMatch {
    ActionId action = 0;
    int atom = 0;
    AtomRole role = AtomRole::pre;
    int group = 0;
    int literal = 0;
    std::vector<GuardLit> guard;
    std::vector<RhsTerm> rhs;
};

struct PlmgEncodingCtx {
    const Problem* problem = nullptr;
    const FactSpace* facts = nullptr;
    const UnifiedArgs* ua = nullptr;
    const CoverResult* cover = nullptr;
    bool binary = false;
    int bits = 0;
    bool none_persistence = true;  // applied to groups verified by fact alternation
    std::vector<PlmgMatch> matches;
    std::set<std::tuple<int, int, int>> in_dom_refs;      // (group, counted, slot)
    std::set<std::tuple<int, int, int, int>> eq_refs;     // (group, counted, slot, phase)
    std::set<int> bit_slots;

    const Plmg& group(int m) const { return cover->selected[m]; }
    // Index of the "none" literal, or -1 for exactly-one groups.
    int none_literal(int m) const;
    int num_literals(int m) const;
};

PlmgEncodingCtx make_plmg_ctx(const Problem& problem, const FactSpace& facts, const UnifiedArgs& ua,
                              const CoverResult& cover, bool binary, bool none_persistence = true);

// Facts of all selected groups, as a per-fact mask.
std::vector<char> grouped_facts(const CoverResult& cover, const FactSpace& facts);

// Literals stating that counted variable c of group m holds object o at layer t.
std::vector<int> value_literals(const CnfFormula& f, const PlmgEncodingCtx& ctx, int m, int c, ObjectId o, int t);

void allocate_group_layer(CnfFormula& f, const PlmgEncodingCtx& ctx, int t);
void encode_state_skeleton(CnfFormula& f, const PlmgEncodingCtx& ctx, int t);
void encode_init_plmg(CnfFormula& f, const PlmgEncodingCtx& ctx);
void encode_goal_plmg(CnfFormula& f, const PlmgEncodingCtx& ctx, int length);
void encode_helpers(CnfFormula& f, const PlmgEncodingCtx& ctx, int t);
void encode_preconditions_plmg(CnfFormula& f, const PlmgEncodingCtx& ctx, int t);
void encode_effects_plmg(CnfFormula& f, const PlmgEncodingCtx& ctx, int t);
void encode_causes_frames_plmg(CnfFormula& f, const PlmgEncodingCtx& ctx, int t);

// Which literal of group m a ground fact instantiates, or -1.
int matching_literal(const Problem& problem, const Plmg& m, const GroundAtom& fact);

}  // namespace pgsat
