#pragma once

// Explicit ground state space. Only used by oracles, validation and analysis
// on instances small enough to ground; the encoders never ground actions.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "pgsat/pddl.hpp"

namespace pgsat {

// Sorted list of true facts.
using State = std::vector<FactId>;

struct StateHash {
    std::size_t operator()(const State& s) const noexcept;
};

struct GroundOp {
    GroundAction action;
    std::vector<FactId> pre;  // fluent preconditions only; static ones are checked at grounding
    std::vector<FactId> add;
    std::vector<FactId> del;  // excludes facts that are also added
};

class GroundModel {
public:
    explicit GroundModel(const Problem& problem);

    const Problem& problem() const { return *problem_; }
    const FactSpace& facts() const { return facts_; }
    const std::vector<GroundOp>& ops() const { return ops_; }

    State initial_state() const;
    bool goal_reached(const State& s) const;
    bool applicable(const GroundOp& op, const State& s) const;
    State apply(const GroundOp& op, const State& s) const;

    enum class Exploration { exhausted, stopped, capped };

    // Breadth-first over reachable states. The callback sees the initial state
    // once (op == nullptr) and then every transition; returning false stops.
    Exploration explore(std::size_t state_cap,
                 const std::function<bool(const State& from, const GroundOp* op, const State& to)>& visit) const;

private:
    const Problem* problem_;
    FactSpace facts_;
    std::vector<GroundOp> ops_;
    std::vector<FactId> goal_;
};

bool holds(const State& s, FactId f);

}  // namespace pgsat
