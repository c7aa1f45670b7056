#pragma once

// Choosing the PLMGs that represent the state, plus predicate pruning.

#include <string>
#include <vector>

#include "pgsat/mutex_groups.hpp"
#include "pgsat/pddl.hpp"

namespace pgsat {

struct PruneResult {
    std::vector<PredId> kept;
    std::vector<PredId> pruned;
    std::vector<GroundAtom> goal_exceptions;
};

// Predicates that occur in no action precondition.
PruneResult prune_predicates(const Problem& problem);

enum class Disposition { covered_by_lmg, grounded, pruned, static_action_level };

struct CoverResult {
    std::vector<Plmg> selected;               // ids are positions in this vector
    std::vector<FactId> uncovered;            // sorted; includes goal exceptions and static goal facts
    std::vector<PredId> covered_predicates;   // fully covered by one lifted group
    std::vector<PredId> pruned_predicates;
    std::vector<FactId> goal_exception_facts;  // sorted
    std::vector<Disposition> disposition;     // per predicate
    std::vector<char> state_predicate;        // per predicate: tracked in the state layers
    std::vector<std::string> notes;
};

// `lmgs` must be verified and is consumed in the given order.
CoverResult select_cover(const Problem& problem, const FactSpace& facts, const std::vector<LmgCandidate>& lmgs,
                         bool prune = true);

// Cover with no groups at all: every state fact is encoded individually.
CoverResult ground_cover(const Problem& problem, const FactSpace& facts, bool prune = true);

std::string cover_report(const Problem& problem, const CoverResult& cover);

}  // namespace pgsat
