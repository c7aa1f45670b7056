#include "pgsat/sat_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace pgsat::sat {

namespace {

double luby(double y, int x) {
    int size = 1;
    int seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, seq);
}

}  // namespace

Solver::Solver(int num_vars) { ensure_vars(num_vars); }

void Solver::ensure_vars(int n) {
    if (n <= num_vars_) return;
    watches_.resize(2 * static_cast<std::size_t>(n));
    assigns_.resize(n, -1);
    polarity_.resize(n, 0);
    level_.resize(n, 0);
    reason_.resize(n, -1);
    activity_.resize(n, 0.0);
    heap_pos_.resize(n, -1);
    seen_.resize(n, 0);
    for (int v = num_vars_; v < n; ++v) heap_insert(v);
    num_vars_ = n;
}

void Solver::heap_insert(int v) {
    if (heap_pos_[v] >= 0) return;
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_pos_[v]);
}

void Solver::heap_up(int pos) {
    const int v = heap_[pos];
    while (pos > 0) {
        const int parent = (pos - 1) >> 1;
        if (!heap_less(v, heap_[parent])) break;
        heap_[pos] = heap_[parent];
        heap_pos_[heap_[pos]] = pos;
        pos = parent;
    }
    heap_[pos] = v;
    heap_pos_[v] = pos;
}

void Solver::heap_down(int pos) {
    const int v = heap_[pos];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
        int child = 2 * pos + 1;
        if (child >= n) break;
        if (child + 1 < n && heap_less(heap_[child + 1], heap_[child])) ++child;
        if (!heap_less(heap_[child], v)) break;
        heap_[pos] = heap_[child];
        heap_pos_[heap_[pos]] = pos;
        pos = child;
    }
    heap_[pos] = v;
    heap_pos_[v] = pos;
}

int Solver::heap_pop() {
    const int top = heap_[0];
    heap_pos_[top] = -1;
    const int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[last] = 0;
        heap_down(0);
    }
    return top;
}

void Solver::bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (double& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
}

void Solver::bump_clause(Clause& c) {
    c.activity += cla_inc_;
    if (c.activity > 1e20) {
        for (Clause& d : clauses_)
            if (d.learnt) d.activity *= 1e-20;
        cla_inc_ *= 1e-20;
    }
}

void Solver::attach(int cref) {
    const Clause& c = clauses_[cref];
    watches_[c.lits[0]].push_back({cref, c.lits[1]});
    watches_[c.lits[1]].push_back({cref, c.lits[0]});
}

void Solver::enqueue(int lit, int reason) {
    const int v = var_of(lit);
    assigns_[v] = static_cast<signed char>((lit & 1) ? 0 : 1);
    level_[v] = level();
    reason_[v] = reason;
    trail_.push_back(lit);
}

bool Solver::add_clause(const std::vector<int>& dimacs) {
    if (!ok_) return false;
    int maxv = 0;
    for (int l : dimacs) maxv = std::max(maxv, std::abs(l));
    ensure_vars(maxv);
    std::vector<int> lits;
    for (int l : dimacs) lits.push_back(lit_of(l));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<int> kept;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        if (i + 1 < lits.size() && lits[i + 1] == neg(lits[i])) return true;  // tautology
        const signed char val = lit_value(lits[i]);
        if (val == 1) return true;
        if (val == 0) continue;
        kept.push_back(lits[i]);
    }
    if (kept.empty()) return ok_ = false;
    if (kept.size() == 1) {
        enqueue(kept[0], -1);
        if (propagate() >= 0) ok_ = false;
        return ok_;
    }
    clauses_.push_back({std::move(kept)});
    attach(static_cast<int>(clauses_.size()) - 1);
    return true;
}

int Solver::propagate() {
    while (qhead_ < trail_.size()) {
        const int p = trail_[qhead_++];
        const int false_lit = neg(p);
        auto& ws = watches_[false_lit];
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < ws.size()) {
            const Watch w = ws[i++];
            if (lit_value(w.blocker) == 1) {
                ws[j++] = w;
                continue;
            }
            Clause& c = clauses_[w.cref];
            if (c.deleted) continue;
            auto& lits = c.lits;
            if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
            const int first = lits[0];
            if (first != w.blocker && lit_value(first) == 1) {
                ws[j++] = {w.cref, first};
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < lits.size(); ++k) {
                if (lit_value(lits[k]) != 0) {
                    std::swap(lits[1], lits[k]);
                    watches_[lits[1]].push_back({w.cref, first});
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = {w.cref, first};
            if (lit_value(first) == 0) {
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return w.cref;
            }
            enqueue(first, w.cref);
        }
        ws.resize(j);
    }
    return -1;
}

bool Solver::redundant(int lit, unsigned abstract_levels) {
    analyze_stack_.assign(1, lit);
    const std::size_t top = analyze_clear_.size();
    while (!analyze_stack_.empty()) {
        const int q = analyze_stack_.back();
        analyze_stack_.pop_back();
        const Clause& c = clauses_[reason_[var_of(q)]];
        for (std::size_t i = 1; i < c.lits.size(); ++i) {
            const int l = c.lits[i];
            const int v = var_of(l);
            if (seen_[v] || level_[v] == 0) continue;
            if (reason_[v] >= 0 && ((1u << (level_[v] & 31)) & abstract_levels)) {
                seen_[v] = 1;
                analyze_stack_.push_back(l);
                analyze_clear_.push_back(l);
            } else {
                for (std::size_t k = top; k < analyze_clear_.size(); ++k) seen_[var_of(analyze_clear_[k])] = 0;
                analyze_clear_.resize(top);
                return false;
            }
        }
    }
    return true;
}

void Solver::analyze(int confl, std::vector<int>& learnt, int& bt_level, int& lbd) {
    learnt.assign(1, -1);
    int path = 0;
    int p = -1;
    int idx = static_cast<int>(trail_.size()) - 1;
    do {
        Clause& c = clauses_[confl];
        if (c.learnt) bump_clause(c);
        for (std::size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
            const int q = c.lits[k];
            const int v = var_of(q);
            if (seen_[v] || level_[v] == 0) continue;
            seen_[v] = 1;
            bump_var(v);
            if (level_[v] >= level())
                ++path;
            else
                learnt.push_back(q);
        }
        while (!seen_[var_of(trail_[idx])]) --idx;
        p = trail_[idx--];
        confl = reason_[var_of(p)];
        seen_[var_of(p)] = 0;
        --path;
    } while (path > 0);
    learnt[0] = neg(p);

    analyze_clear_ = learnt;
    unsigned abstract_levels = 0;
    for (std::size_t i = 1; i < learnt.size(); ++i) abstract_levels |= 1u << (level_[var_of(learnt[i])] & 31);
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i)
        if (reason_[var_of(learnt[i])] < 0 || !redundant(learnt[i], abstract_levels)) learnt[j++] = learnt[i];
    learnt.resize(j);
    for (int l : analyze_clear_) seen_[var_of(l)] = 0;

    bt_level = 0;
    if (learnt.size() > 1) {
        std::size_t best = 1;
        for (std::size_t i = 2; i < learnt.size(); ++i)
            if (level_[var_of(learnt[i])] > level_[var_of(learnt[best])]) best = i;
        std::swap(learnt[1], learnt[best]);
        bt_level = level_[var_of(learnt[1])];
    }
    std::vector<int> levels;
    for (int l : learnt) levels.push_back(level_[var_of(l)]);
    std::sort(levels.begin(), levels.end());
    lbd = static_cast<int>(std::unique(levels.begin(), levels.end()) - levels.begin());
}

void Solver::backtrack(int lvl) {
    if (level() <= lvl) return;
    for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[lvl]; --i) {
        const int v = var_of(trail_[i]);
        polarity_[v] = assigns_[v];
        assigns_[v] = -1;
        reason_[v] = -1;
        heap_insert(v);
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
}

int Solver::pick_branch() {
    while (!heap_.empty()) {
        const int v = heap_pop();
        if (assigns_[v] < 0) return 2 * v + (polarity_[v] == 1 ? 0 : 1);
    }
    return -1;
}

void Solver::reduce_db() {
    std::vector<int> cand;
    for (int i = 0; i < static_cast<int>(clauses_.size()); ++i) {
        const Clause& c = clauses_[i];
        if (!c.learnt || c.deleted || c.lits.size() <= 2 || c.lbd <= 2) continue;
        const int v = var_of(c.lits[0]);
        if (reason_[v] == i && lit_value(c.lits[0]) == 1) continue;
        cand.push_back(i);
    }
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
        if (clauses_[a].lbd != clauses_[b].lbd) return clauses_[a].lbd > clauses_[b].lbd;
        return clauses_[a].activity < clauses_[b].activity;
    });
    for (std::size_t k = 0; k < cand.size() / 2; ++k) {
        Clause& c = clauses_[cand[k]];
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
        --num_learnts_;
    }
    for (auto& ws : watches_) ws.clear();
    for (int i = 0; i < static_cast<int>(clauses_.size()); ++i)
        if (!clauses_[i].deleted) attach(i);
}

Result Solver::solve(std::int64_t conflict_limit) {
    if (!ok_) return Result::unsat;
    if (propagate() >= 0) {
        ok_ = false;
        return Result::unsat;
    }
    std::vector<int> learnt;
    int restarts = 0;
    std::int64_t since_restart = 0;
    double restart_limit = luby(2, 0) * 100;
    double max_learnts = static_cast<double>(clauses_.size()) / 3 + 2000;
    const std::int64_t start = conflicts_;
    for (;;) {
        const int confl = propagate();
        if (confl >= 0) {
            ++conflicts_;
            ++since_restart;
            if (level() == 0) {
                ok_ = false;
                return Result::unsat;
            }
            int bt = 0;
            int lbd = 0;
            analyze(confl, learnt, bt, lbd);
            backtrack(bt);
            if (learnt.size() == 1) {
                enqueue(learnt[0], -1);
            } else {
                Clause c;
                c.lits = learnt;
                c.learnt = true;
                c.lbd = lbd;
                clauses_.push_back(std::move(c));
                const int cref = static_cast<int>(clauses_.size()) - 1;
                attach(cref);
                bump_clause(clauses_[cref]);
                ++num_learnts_;
                enqueue(learnt[0], cref);
            }
            var_inc_ /= 0.95;
            cla_inc_ /= 0.999;
            if (conflict_limit >= 0 && conflicts_ - start >= conflict_limit) {
                backtrack(0);
                return Result::unknown;
            }
            if (since_restart >= restart_limit) {
                backtrack(0);
                since_restart = 0;
                restart_limit = luby(2, ++restarts) * 100;
            }
            continue;
        }
        if (static_cast<double>(num_learnts_) >= max_learnts) {
            reduce_db();
            max_learnts *= 1.1;
        }
        const int next = pick_branch();
        if (next < 0) {
            model_.assign(assigns_.begin(), assigns_.end());
            backtrack(0);
            return Result::sat;
        }
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        enqueue(next, -1);
    }
}

}  // namespace pgsat::sat
