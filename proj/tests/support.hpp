#pragma once

// Shared by the test executables: data paths, the instance suite and a
// reference state-space search that does not share code with the library's
// grounding.

#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pgsat/cnf.hpp"
#include "pgsat/pddl.hpp"

namespace testing {

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(PGSAT_TEST_DATA) / name; }

struct Instance {
    std::string domain;
    std::string problem;
    int optimum;  // hand-checked, also confirmed against reference_optimum
};

// The oracle suite: 11 instances over transport, blocksworld, gripper and a
// visitall grid.
inline const std::vector<Instance>& suite() {
    static const std::vector<Instance> s{
        {"transport-domain.pddl", "transport-p01.pddl", 1},
        {"transport-domain.pddl", "transport-p02.pddl", 6},
        {"transport-domain.pddl", "transport-p03.pddl", 6},
        {"blocksworld-domain.pddl", "blocksworld-p01.pddl", 4},
        {"blocksworld-domain.pddl", "blocksworld-p02.pddl", 6},
        {"blocksworld-domain.pddl", "blocksworld-p03.pddl", 4},
        {"gripper-domain.pddl", "gripper-p01.pddl", 3},
        {"gripper-domain.pddl", "gripper-p02.pddl", 5},
        {"visitall-domain.pddl", "visitall-p01.pddl", 3},
        {"visitall-domain.pddl", "visitall-p02.pddl", 5},
        {"visitall-domain.pddl", "visitall-p03.pddl", 8},
    };
    return s;
}

// Extra instances with pruning and at-most-one groups.
inline const std::vector<Instance>& extras() {
    static const std::vector<Instance> s{
        {"rovers-domain.pddl", "rovers-p01.pddl", 9},
        {"transport-destroy-domain.pddl", "transport-destroy-p01.pddl", 5},
    };
    return s;
}

inline pgsat::Problem load(const Instance& i) { return pgsat::parse_files(data(i.domain), data(i.problem)); }
inline pgsat::Problem load(const std::string& domain, const std::string& problem) {
    return pgsat::parse_files(data(domain), data(problem));
}

using RefState = std::set<pgsat::GroundAtom>;

struct RefStep {
    pgsat::GroundAction action;
    RefState next;
};

// Successors by brute force over all object tuples, checking parameter types
// straight from the type table.
inline std::vector<RefStep> ref_successors(const pgsat::Problem& p, const RefState& s) {
    std::vector<RefStep> out;
    for (int a = 0; a < static_cast<int>(p.actions.size()); ++a) {
        const auto& act = p.actions[a];
        const std::size_t n = act.params.size();
        std::vector<int> b(n, 0);
        auto ground = [&](const pgsat::Atom& atom) {
            pgsat::GroundAtom g{atom.pred, {}};
            for (const auto& t : atom.args) g.args.push_back(t.is_param() ? b[t.index] : t.index);
            return g;
        };
        for (;;) {
            bool typed = true;
            for (std::size_t i = 0; i < n && typed; ++i) typed = p.types.contains(act.params[i].type, b[i]);
            if (typed) {
                bool ok = true;
                for (const auto& pre : act.pre) ok = ok && s.contains(ground(pre));
                if (ok) {
                    RefState next = s;
                    for (const auto& d : act.del) next.erase(ground(d));
                    for (const auto& e : act.add) next.insert(ground(e));
                    out.push_back({{a, b}, std::move(next)});
                }
            }
            std::size_t i = 0;
            for (; i < n; ++i) {
                if (++b[i] < p.num_objects()) break;
                b[i] = 0;
            }
            if (i == n) break;
        }
    }
    return out;
}

inline RefState ref_init(const pgsat::Problem& p) { return RefState(p.init.begin(), p.init.end()); }

inline bool ref_goal(const pgsat::Problem& p, const RefState& s) {
    for (const auto& g : p.goal)
        if (!s.contains(g)) return false;
    return true;
}

// Optimal plan length, or nullopt when the goal is unreachable.
inline std::optional<int> reference_optimum(const pgsat::Problem& p) {
    std::map<RefState, int> depth;
    std::deque<RefState> queue;
    const RefState init = ref_init(p);
    if (ref_goal(p, init)) return 0;
    depth[init] = 0;
    queue.push_back(init);
    while (!queue.empty()) {
        RefState s = queue.front();
        queue.pop_front();
        for (auto& step : ref_successors(p, s)) {
            if (depth.contains(step.next)) continue;
            const int d = depth[s] + 1;
            if (ref_goal(p, step.next)) return d;
            depth[step.next] = d;
            queue.push_back(std::move(step.next));
        }
    }
    return std::nullopt;
}

struct RefGraph {
    std::vector<RefState> states;
    std::vector<std::pair<int, int>> edges;
};

inline RefGraph reference_reachable(const pgsat::Problem& p) {
    RefGraph g;
    std::map<RefState, int> index;
    std::deque<int> queue;
    index[ref_init(p)] = 0;
    g.states.push_back(ref_init(p));
    queue.push_back(0);
    while (!queue.empty()) {
        const int i = queue.front();
        queue.pop_front();
        const RefState s = g.states[i];
        for (auto& step : ref_successors(p, s)) {
            auto [it, fresh] = index.emplace(step.next, static_cast<int>(g.states.size()));
            if (fresh) {
                g.states.push_back(step.next);
                queue.push_back(it->second);
            }
            g.edges.emplace_back(i, it->second);
        }
    }
    return g;
}

inline bool clause_satisfied(const pgsat::Clause& c, const std::vector<char>& value) {
    for (int l : c)
        if ((l > 0) == static_cast<bool>(value[std::abs(l)])) return true;
    return false;
}

}  // namespace testing
