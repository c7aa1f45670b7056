#pragma once

// State as individual facts. Used for the whole state by the ground encoding
// and for the uncovered remainder by the group encodings.

#include <optional>
#include <utility>
#include <vector>

#include "pgsat/action_layer.hpp"
#include "pgsat/cnf.hpp"
#include "pgsat/cover.hpp"
#include "pgsat/pddl.hpp"

namespace pgsat {

enum class AtomRole : std::uint8_t { pre, add, del };

// One grounding of an action atom: the argument choices that produce `fact`.
struct GroundInstance {
    ActionId action = 0;
    int atom = 0;  // index into the action's pre, add or del list
    std::vector<std::pair<int, ObjectId>> guard;  // (slot, object)
    std::optional<FactId> fact;                   // nullopt: the tuple names no type-correct fact
};

struct GroundEncodingCtx {
    const Problem* problem = nullptr;
    const FactSpace* facts = nullptr;
    const UnifiedArgs* ua = nullptr;
    std::vector<FactId> state_facts;  // the facts encoded individually, sorted
    std::vector<char> individual;     // per fact id
    std::vector<char> state_predicate;
    std::vector<GroundInstance> pre, add, del;
    std::vector<std::vector<int>> adders, deleters;  // per fact id: indices into add / del
};

// `grouped[f]` marks facts represented by selected groups; a precondition on
// a fact neither grouped nor individual is a model error.
GroundEncodingCtx make_ground_ctx(const Problem& problem, const FactSpace& facts, const UnifiedArgs& ua,
                                  const CoverResult& cover, const std::vector<char>& grouped);

void allocate_fact_layer(CnfFormula& f, const GroundEncodingCtx& ctx, int t);
void encode_init(CnfFormula& f, const GroundEncodingCtx& ctx);
void encode_goal(CnfFormula& f, const GroundEncodingCtx& ctx, int length);
void encode_preconditions(CnfFormula& f, const GroundEncodingCtx& ctx, int t);
void encode_effects(CnfFormula& f, const GroundEncodingCtx& ctx, int t);
void encode_causes_and_frames(CnfFormula& f, const GroundEncodingCtx& ctx, int t);

}  // namespace pgsat
