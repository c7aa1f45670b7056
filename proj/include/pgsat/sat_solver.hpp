#pragma once

// Small CDCL solver: two watched literals, first-UIP learning, VSIDS,
// Luby restarts, phase saving. Backs the bundled pgsat-sat executable.

#include <cstdint>
#include <vector>

namespace pgsat::sat {

enum class Result { sat, unsat, unknown };

class Solver {
public:
    explicit Solver(int num_vars = 0);

    int num_vars() const { return num_vars_; }
    // DIMACS literals. Returns false once the formula is known unsatisfiable.
    bool add_clause(const std::vector<int>& lits);
    // conflict_limit < 0 means no limit.
    Result solve(std::int64_t conflict_limit = -1);
    // After sat: value of variable v (1-based).
    bool value(int v) const { return model_[v - 1] == 1; }

    std::int64_t conflicts() const { return conflicts_; }

private:
    struct Clause {
        std::vector<int> lits;
        bool learnt = false;
        bool deleted = false;
        int lbd = 0;
        double activity = 0;
    };
    struct Watch {
        int cref;
        int blocker;
    };

    static int lit_of(int dimacs) { return dimacs > 0 ? 2 * (dimacs - 1) : 2 * (-dimacs - 1) + 1; }
    static int var_of(int lit) { return lit >> 1; }
    static int neg(int lit) { return lit ^ 1; }
    signed char lit_value(int lit) const {
        signed char v = assigns_[var_of(lit)];
        return v < 0 ? -1 : static_cast<signed char>(v ^ (lit & 1));
    }
    int level() const { return static_cast<int>(trail_lim_.size()); }

    void ensure_vars(int n);
    void enqueue(int lit, int reason);
    int propagate();
    void analyze(int confl, std::vector<int>& learnt, int& bt_level, int& lbd);
    bool redundant(int lit, unsigned abstract_levels);
    void backtrack(int lvl);
    int pick_branch();
    void attach(int cref);
    void reduce_db();
    void bump_var(int v);
    void bump_clause(Clause& c);

    void heap_insert(int v);
    void heap_up(int pos);
    void heap_down(int pos);
    int heap_pop();
    bool heap_less(int a, int b) const { return activity_[a] > activity_[b]; }

    int num_vars_ = 0;
    bool ok_ = true;
    std::vector<Clause> clauses_;
    std::vector<std::vector<Watch>> watches_;
    std::vector<signed char> assigns_;
    std::vector<signed char> polarity_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<double> activity_;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    std::vector<int> heap_;
    std::vector<int> heap_pos_;
    std::vector<char> seen_;
    std::vector<int> analyze_stack_;
    std::vector<int> analyze_clear_;
    std::vector<signed char> model_;
    std::int64_t conflicts_ = 0;
    std::size_t num_learnts_ = 0;
};

}  // namespace pgsat::sat
