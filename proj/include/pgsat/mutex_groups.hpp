#pragma once

// Lifted mutex groups: candidate generation, a lifted fact-alternation check,
// exactly-one classification and instantiation into partially lifted groups.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pgsat/grounding.hpp"
#include "pgsat/pddl.hpp"

namespace pgsat {

struct LiftedVar {
    std::string name;
    TypeId type = 0;
    friend bool operator==(const LiftedVar&, const LiftedVar&) = default;
};

struct GroupAtom {
    PredId pred = 0;
    std::vector<int> vars;  // indices into LmgCandidate::vars
    friend bool operator==(const GroupAtom&, const GroupAtom&) = default;
};

// vars[0, num_fixed) are the fixed variables, the rest are counted. Atoms use
// pairwise distinct predicates and every atom mentions every fixed variable.
struct LmgCandidate {
    std::vector<LiftedVar> vars;
    int num_fixed = 0;
    std::vector<GroupAtom> atoms;
    bool exactly_one = false;

    bool is_fixed(int v) const { return v < num_fixed; }
    int num_counted() const { return static_cast<int>(vars.size()) - num_fixed; }
    friend bool operator==(const LmgCandidate&, const LmgCandidate&) = default;
};

struct PlmgTerm {
    bool counted = false;
    int index = 0;  // counted variable index, or object id
    friend bool operator==(const PlmgTerm&, const PlmgTerm&) = default;
};

struct PlmgAtom {
    PredId pred = 0;
    std::vector<PlmgTerm> args;
    friend bool operator==(const PlmgAtom&, const PlmgAtom&) = default;
};

struct Plmg {
    int id = 0;
    int source = -1;  // index of the lifted group it was instantiated from
    std::vector<ObjectId> fixed_binding;
    std::vector<LiftedVar> counted;
    std::vector<PlmgAtom> atoms;
    bool exactly_one = false;
    bool fam = true;                  // verified by fact alternation: an emptied group stays empty
    std::vector<FactId> ground_facts;  // sorted

    int literal_of(PredId pred) const;  // -1 if absent
};

std::vector<LmgCandidate> generate_candidates(const Problem& problem);

bool verify_fam(const LmgCandidate& candidate, const Problem& problem);

// Lifted part of exactly-one classification: every action deleting a group
// fact adds one for the same fixed binding. Initial-state count is per PLMG.
bool preserves_exactly_one(const LmgCandidate& candidate, const Problem& problem);

bool classify_exactly_one(const Plmg& plmg, const Problem& problem);

std::vector<Plmg> instantiate(const LmgCandidate& candidate, const Problem& problem, const FactSpace& facts,
                              int source = -1);

// Verdict per candidate; the OpenMP version and the serial reference must agree.
std::vector<char> verify_candidates(const std::vector<LmgCandidate>& candidates, const Problem& problem);
std::vector<char> verify_candidates_serial(const std::vector<LmgCandidate>& candidates, const Problem& problem);

// Candidates that pass verification, with the exactly-one flag set.
std::vector<LmgCandidate> infer_lifted_mutex_groups(const Problem& problem);

struct MutexVerdict {
    enum class Kind { holds, violated, inconclusive };
    Kind kind = Kind::inconclusive;
    State witness;
    std::string reason;
};

MutexVerdict verify_mutex_exhaustive(const Plmg& plmg, const GroundModel& model, std::size_t state_cap);

// Same check for many groups over one exploration of the state space.
std::vector<MutexVerdict> verify_mutex_exhaustive(const std::vector<Plmg>& plmgs, const GroundModel& model,
                                                  std::size_t state_cap);
std::vector<MutexVerdict> verify_mutex_exhaustive_serial(const std::vector<Plmg>& plmgs, const GroundModel& model,
                                                         std::size_t state_cap);

std::string format(const Problem& problem, const LmgCandidate& candidate);
// One line: EO|AMO  fixed-binding  {atoms}  |F(M)|
std::string format(const Problem& problem, const Plmg& plmg);

}  // namespace pgsat
