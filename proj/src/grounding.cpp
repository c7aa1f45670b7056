#include "pgsat/grounding.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace pgsat {

std::size_t StateHash::operator()(const State& s) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (FactId f : s) {
        h ^= static_cast<std::size_t>(f) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

bool holds(const State& s, FactId f) { return std::binary_search(s.begin(), s.end(), f); }

GroundModel::GroundModel(const Problem& problem) : problem_(&problem), facts_(problem) {
    for (const auto& g : problem.goal)
        if (auto id = facts_.id(g)) goal_.push_back(*id);
    std::sort(goal_.begin(), goal_.end());

    for (ActionId a = 0; a < static_cast<ActionId>(problem.actions.size()); ++a) {
        const ActionSchema& s = problem.actions[a];
        const int n = static_cast<int>(s.params.size());
        // static preconditions are tested as soon as their last parameter is bound
        std::vector<std::vector<const Atom*>> checks(n + 1);
        for (const auto& pre : s.pre) {
            if (!problem.predicates[pre.pred].is_static) continue;
            int depth = 0;
            for (const Term& t : pre.args)
                if (t.is_param()) depth = std::max(depth, t.index + 1);
            checks[depth].push_back(&pre);
        }
        auto instantiate = [&](const Atom& atom, const std::vector<ObjectId>& b) {
            GroundAtom g{atom.pred, {}};
            for (const Term& t : atom.args) g.args.push_back(t.is_param() ? b[t.index] : t.index);
            return g;
        };
        auto passes = [&](int depth, const std::vector<ObjectId>& b) {
            for (const Atom* pre : checks[depth])
                if (!problem.in_init(instantiate(*pre, b))) return false;
            return true;
        };
        std::vector<ObjectId> binding(n);
        auto emit = [&]() {
            GroundOp op;
            op.action = {a, binding};
            bool possible = true;
            for (const auto& pre : s.pre) {
                if (problem.predicates[pre.pred].is_static) continue;
                auto id = facts_.id(instantiate(pre, binding));
                if (!id) {
                    possible = false;
                    break;
                }
                op.pre.push_back(*id);
            }
            if (!possible) return;
            for (const auto& e : s.add)
                if (auto id = facts_.id(instantiate(e, binding))) op.add.push_back(*id);
            for (const auto& e : s.del)
                if (auto id = facts_.id(instantiate(e, binding))) op.del.push_back(*id);
            for (auto* v : {&op.pre, &op.add, &op.del}) {
                std::sort(v->begin(), v->end());
                v->erase(std::unique(v->begin(), v->end()), v->end());
            }
            std::erase_if(op.del, [&](FactId f) { return std::binary_search(op.add.begin(), op.add.end(), f); });
            ops_.push_back(std::move(op));
        };
        auto rec = [&](auto&& self, int i) -> void {
            if (!passes(i, binding)) return;
            if (i == n) {
                emit();
                return;
            }
            const Range r = problem.types.members[s.params[i].type];
            for (ObjectId o = r.lo; o < r.hi; ++o) {
                binding[i] = o;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
    }
}

State GroundModel::initial_state() const {
    State s;
    for (const auto& f : problem_->init)
        if (auto id = facts_.id(f)) s.push_back(*id);
    std::sort(s.begin(), s.end());
    return s;
}

bool GroundModel::goal_reached(const State& s) const {
    if (goal_.size() != problem_->goal.size()) {
        // a goal fact without a valid fact id can never hold
        return false;
    }
    return std::includes(s.begin(), s.end(), goal_.begin(), goal_.end());
}

bool GroundModel::applicable(const GroundOp& op, const State& s) const {
    return std::includes(s.begin(), s.end(), op.pre.begin(), op.pre.end());
}

State GroundModel::apply(const GroundOp& op, const State& s) const {
    State kept;
    kept.reserve(s.size());
    std::set_difference(s.begin(), s.end(), op.del.begin(), op.del.end(), std::back_inserter(kept));
    State out;
    out.reserve(kept.size() + op.add.size());
    std::set_union(kept.begin(), kept.end(), op.add.begin(), op.add.end(), std::back_inserter(out));
    return out;
}

GroundModel::Exploration GroundModel::explore(
    std::size_t state_cap, const std::function<bool(const State&, const GroundOp*, const State&)>& visit) const {
    if (state_cap == 0) return Exploration::capped;
    std::unordered_set<State, StateHash> seen;
    std::deque<State> queue;
    State init = initial_state();
    seen.insert(init);
    queue.push_back(init);
    if (!visit(init, nullptr, init)) return Exploration::stopped;
    while (!queue.empty()) {
        State s = std::move(queue.front());
        queue.pop_front();
        for (const GroundOp& op : ops_) {
            if (!applicable(op, s)) continue;
            State next = apply(op, s);
            if (!visit(s, &op, next)) return Exploration::stopped;
            if (seen.contains(next)) continue;
            if (seen.size() >= state_cap) return Exploration::capped;
            seen.insert(next);
            queue.push_back(std::move(next));
        }
    }
    return Exploration::exhausted;
}

}  // namespace pgsat
