#include "pgsat/cover.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

namespace pgsat {

PruneResult prune_predicates(const Problem& problem) {
    std::vector<char> in_pre(problem.predicates.size(), 0);
    for (const auto& a : problem.actions)
        for (const auto& pre : a.pre) in_pre[pre.pred] = 1;
    PruneResult r;
    for (PredId p = 0; p < static_cast<PredId>(problem.predicates.size()); ++p)
        (in_pre[p] ? r.kept : r.pruned).push_back(p);
    for (const auto& g : problem.goal)
        if (!in_pre[g.pred]) r.goal_exceptions.push_back(g);
    return r;
}

namespace {

struct Base {
    CoverResult result;
    std::vector<char> needed;  // per fact: must be represented in the state layers
    std::vector<FactId> extra;  // goal facts represented individually regardless of cover
};

Base prepare(const Problem& problem, const FactSpace& facts, bool prune) {
    Base b;
    CoverResult& r = b.result;
    const auto n = problem.predicates.size();
    std::vector<bool> statics = action_level_statics(problem);
    r.disposition.assign(n, Disposition::grounded);
    r.state_predicate.assign(n, 1);
    std::vector<char> pruned(n, 0);
    if (prune) {
        PruneResult pr = prune_predicates(problem);
        for (PredId p : pr.pruned) pruned[p] = 1;
        r.pruned_predicates = pr.pruned;
        for (const auto& g : pr.goal_exceptions)
            if (auto id = facts.id(g)) r.goal_exception_facts.push_back(*id);
        std::sort(r.goal_exception_facts.begin(), r.goal_exception_facts.end());
    }
    for (PredId p = 0; p < static_cast<PredId>(n); ++p) {
        if (pruned[p]) {
            r.disposition[p] = Disposition::pruned;
            r.state_predicate[p] = 0;
        } else if (statics[p]) {
            r.disposition[p] = Disposition::static_action_level;
            r.state_predicate[p] = 0;
        }
    }
    b.needed.assign(facts.size(), 0);
    for (PredId p = 0; p < static_cast<PredId>(n); ++p) {
        if (!r.state_predicate[p]) continue;
        Range fr = facts.facts_of(p);
        for (FactId f = fr.lo; f < fr.hi; ++f) b.needed[f] = 1;
    }
    b.extra = r.goal_exception_facts;
    for (const auto& g : problem.goal) {
        if (pruned[g.pred] || !statics[g.pred]) continue;
        if (auto id = facts.id(g)) {
            b.extra.push_back(*id);
            r.notes.push_back("static goal fact " + format(problem, g) + " kept as an individual fact");
        }
    }
    return b;
}

void finish(Base& b) {
    CoverResult& r = b.result;
    for (FactId f = 0; f < static_cast<FactId>(b.needed.size()); ++f)
        if (b.needed[f]) r.uncovered.push_back(f);
    r.uncovered.insert(r.uncovered.end(), b.extra.begin(), b.extra.end());
    std::sort(r.uncovered.begin(), r.uncovered.end());
    r.uncovered.erase(std::unique(r.uncovered.begin(), r.uncovered.end()), r.uncovered.end());
    for (std::size_t i = 0; i < r.selected.size(); ++i) r.selected[i].id = static_cast<int>(i);
}

bool covers_predicate(const Problem& problem, const LmgCandidate& c, PredId p) {
    for (const auto& g : c.atoms) {
        if (g.pred != p) continue;
        for (std::size_t j = 0; j < g.vars.size(); ++j)
            if (!problem.types.covers(c.vars[g.vars[j]].type, problem.predicates[p].params[j].type)) return false;
        return true;
    }
    return false;
}

}  // namespace

CoverResult ground_cover(const Problem& problem, const FactSpace& facts, bool prune) {
    Base b = prepare(problem, facts, prune);
    finish(b);
    return std::move(b.result);
}

CoverResult select_cover(const Problem& problem, const FactSpace& facts, const std::vector<LmgCandidate>& lmgs,
                         bool prune) {
    Base b = prepare(problem, facts, prune);
    CoverResult& r = b.result;
    const auto npred = static_cast<PredId>(problem.predicates.size());

    std::vector<char> usable(lmgs.size(), 0);
    for (std::size_t i = 0; i < lmgs.size(); ++i) {
        usable[i] = 1;
        for (const auto& g : lmgs[i].atoms)
            if (!r.state_predicate[g.pred]) usable[i] = 0;
    }

    auto take = [&](Plmg m) {
        for (FactId f : m.ground_facts) b.needed[f] = 0;
        r.selected.push_back(std::move(m));
    };

    std::vector<char> lmg_taken(lmgs.size(), 0);
    for (PredId p = 0; p < npred; ++p) {
        if (!r.state_predicate[p] || r.disposition[p] == Disposition::covered_by_lmg) continue;
        std::vector<std::size_t> full;
        for (std::size_t i = 0; i < lmgs.size(); ++i)
            if (usable[i] && covers_predicate(problem, lmgs[i], p)) full.push_back(i);
        if (full.empty()) continue;
        std::size_t pick = full.front();
        if (full.size() > 1)
            r.notes.push_back("predicate " + problem.predicates[p].name + ": " + std::to_string(full.size()) +
                              " lifted groups cover it, took " + format(problem, lmgs[pick]));
        if (!lmg_taken[pick]) {
            lmg_taken[pick] = 1;
            for (Plmg& m : instantiate(lmgs[pick], problem, facts, static_cast<int>(pick)))
                if (!m.ground_facts.empty()) take(std::move(m));
        }
        for (PredId q = 0; q < npred; ++q)
            if (r.state_predicate[q] && covers_predicate(problem, lmgs[pick], q)) {
                if (r.disposition[q] != Disposition::covered_by_lmg) r.covered_predicates.push_back(q);
                r.disposition[q] = Disposition::covered_by_lmg;
            }
    }
    std::sort(r.covered_predicates.begin(), r.covered_predicates.end());

    // greedy on newly covered facts; counts only shrink, so stale queue entries are re-scored lazily
    std::vector<Plmg> pool;
    for (std::size_t i = 0; i < lmgs.size(); ++i) {
        if (!usable[i] || lmg_taken[i]) continue;
        for (Plmg& m : instantiate(lmgs[i], problem, facts, static_cast<int>(i)))
            if (!m.ground_facts.empty()) pool.push_back(std::move(m));
    }
    auto fresh = [&](const Plmg& m) {
        int n = 0;
        for (FactId f : m.ground_facts) n += b.needed[f];
        return n;
    };
    using Entry = std::tuple<int, int, int, int>;  // count, exactly-one, -|cnt|, -order
    std::priority_queue<Entry> queue;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        int n = fresh(pool[i]);
        if (n > 0)
            queue.emplace(n, pool[i].exactly_one ? 1 : 0, -static_cast<int>(pool[i].counted.size()),
                          -static_cast<int>(i));
    }
    while (!queue.empty()) {
        auto [n, eo, cnt, order] = queue.top();
        queue.pop();
        const std::size_t i = static_cast<std::size_t>(-order);
        int now = fresh(pool[i]);
        if (now == 0) continue;
        if (now < n) {
            queue.emplace(now, eo, cnt, order);
            continue;
        }
        take(pool[i]);
    }
    finish(b);
    return std::move(b.result);
}

std::string cover_report(const Problem& problem, const CoverResult& cover) {
    std::string s;
    for (PredId p = 0; p < static_cast<PredId>(problem.predicates.size()); ++p) {
        s += problem.predicates[p].name + " ";
        switch (cover.disposition[p]) {
        case Disposition::covered_by_lmg: s += "covered-by-LMG"; break;
        case Disposition::grounded: s += "grounded"; break;
        case Disposition::pruned: s += "pruned"; break;
        case Disposition::static_action_level: s += "static"; break;
        }
        s += "\n";
    }
    s += "|P| = " + std::to_string(cover.selected.size()) + "\n";
    s += "|U| = " + std::to_string(cover.uncovered.size()) + "\n";
    for (const auto& n : cover.notes) s += "note: " + n + "\n";
    return s;
}

}  // namespace pgsat
