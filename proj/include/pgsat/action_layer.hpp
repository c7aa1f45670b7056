#pragma once

// Lifted action selection shared by every encoding: one action per step,
// arguments through type-indexed shared slots.

#include <vector>

#include "pgsat/cnf.hpp"
#include "pgsat/pddl.hpp"

namespace pgsat {

struct Slot {
    TypeId type = 0;
    int rank = 0;  // position among the slots of the same type
    friend bool operator==(const Slot&, const Slot&) = default;
};

struct UnifiedArgs {
    std::vector<Slot> slots;
    std::vector<std::vector<int>> param_slot;  // [action][parameter] -> slot

    int slot_of(ActionId a, int param) const { return param_slot[a][param]; }
};

UnifiedArgs compute_unified_args(const Problem& problem);

// Objects a parameter may take: its own type within the slot's type.
Range param_domain(const Problem& problem, const UnifiedArgs& ua, ActionId a, int param);

// Allocates Action and ArgEq variables for step t and constrains them.
void encode_action_step(CnfFormula& f, int t, const Problem& problem, const UnifiedArgs& ua);

// `action_level[p]` marks the static predicates compiled here.
void encode_static_preconditions(CnfFormula& f, int t, const Problem& problem, const UnifiedArgs& ua,
                                 const std::vector<bool>& action_level);

void encode_compactness(CnfFormula& f, int t, const Problem& problem);

}  // namespace pgsat
