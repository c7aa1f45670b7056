// Standalone DIMACS solver: pgsat-sat FILE
// Prints SAT-competition output, exits 10 (sat) / 20 (unsat) / 0 (unknown).

#include <fstream>
#include <iostream>
#include <sstream>

#include "pgsat/cnf.hpp"
#include "pgsat/sat_solver.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: pgsat-sat FILE.cnf\n";
        return 1;
    }
    std::ifstream in(argv[1]);
    if (!in) {
        std::cerr << "cannot open " << argv[1] << "\n";
        return 1;
    }
    pgsat::Dimacs cnf;
    try {
        cnf = pgsat::read_dimacs(in);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    pgsat::sat::Solver solver(cnf.num_vars);
    for (const auto& c : cnf.clauses) solver.add_clause(c);
    const auto r = solver.solve();
    if (r == pgsat::sat::Result::unsat) {
        std::cout << "s UNSATISFIABLE\n";
        return 20;
    }
    if (r == pgsat::sat::Result::unknown) {
        std::cout << "s UNKNOWN\n";
        return 0;
    }
    for (const auto& c : cnf.clauses) {
        bool sat = false;
        for (int l : c) sat = sat || (solver.value(std::abs(l)) == (l > 0));
        if (!sat) {
            std::cerr << "internal error: model violates a clause\n";
            return 1;
        }
    }
    std::ostringstream out;
    out << "s SATISFIABLE\n";
    int on_line = 0;
    for (int v = 1; v <= cnf.num_vars; ++v) {
        if (on_line == 0) out << "v";
        out << ' ' << (solver.value(v) ? v : -v);
        if (++on_line == 16) {
            out << '\n';
            on_line = 0;
        }
    }
    if (on_line == 0) out << "v";
    out << " 0\n";
    std::cout << out.str();
    return 10;
}
