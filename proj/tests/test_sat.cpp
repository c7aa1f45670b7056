#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <unistd.h>
#include <sstream>

#include "pgsat/cnf.hpp"
#include "pgsat/sat_solver.hpp"
#include "support.hpp"

using namespace pgsat;

namespace {

std::vector<Clause> random_cnf(std::mt19937& rng, int n, int m, int k) {
    std::uniform_int_distribution<int> var(1, n), sign(0, 1);
    std::vector<Clause> cs(m);
    for (auto& c : cs)
        for (int i = 0; i < k; ++i) c.push_back(sign(rng) ? var(rng) : -var(rng));
    return cs;
}

bool brute_force(int n, const std::vector<Clause>& cs) {
    std::vector<char> value(n + 1);
    for (unsigned m = 0; m < (1u << n); ++m) {
        for (int v = 1; v <= n; ++v) value[v] = (m >> (v - 1)) & 1;
        bool all = true;
        for (const auto& c : cs) all = all && testing::clause_satisfied(c, value);
        if (all) return true;
    }
    return false;
}

std::vector<Clause> pigeonhole(int holes) {
    const int pigeons = holes + 1;
    auto p = [&](int i, int j) { return i * holes + j + 1; };
    std::vector<Clause> cs;
    for (int i = 0; i < pigeons; ++i) {
        Clause c;
        for (int j = 0; j < holes; ++j) c.push_back(p(i, j));
        cs.push_back(c);
    }
    for (int j = 0; j < holes; ++j)
        for (int a = 0; a < pigeons; ++a)
            for (int b = a + 1; b < pigeons; ++b) cs.push_back({-p(a, j), -p(b, j)});
    return cs;
}

std::string read_all(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("solver agrees with brute force on random formulas") {
    std::mt19937 rng(7);
    int sat = 0;
    for (int round = 0; round < 400; ++round) {
        const int n = 4 + round % 11;
        const int m = static_cast<int>(n * (3.0 + (round % 5) * 0.5));
        const auto cs = random_cnf(rng, n, m, 1 + round % 3 == 1 ? 2 : 3);
        sat::Solver s(n);
        for (const auto& c : cs) s.add_clause(c);
        const auto r = s.solve();
        const bool expect = brute_force(n, cs);
        REQUIRE(r != sat::Result::unknown);
        CHECK(expect == (r == sat::Result::sat));
        if (r == sat::Result::sat) {
            ++sat;
            std::vector<char> value(n + 1);
            for (int v = 1; v <= n; ++v) value[v] = s.value(v);
            for (const auto& c : cs) CHECK(testing::clause_satisfied(c, value));
        }
    }
    CHECK(sat > 50);
    CHECK(sat < 350);
}

TEST_CASE("pigeonhole formulas are unsatisfiable") {
    for (int h = 2; h <= 7; ++h) {
        sat::Solver s(h * (h + 1));
        for (const auto& c : pigeonhole(h)) s.add_clause(c);
        CHECK(s.solve() == sat::Result::unsat);
    }
}

TEST_CASE("empty and trivial formulas") {
    sat::Solver none(0);
    CHECK(none.solve() == sat::Result::sat);
    sat::Solver contra(1);
    contra.add_clause({1});
    CHECK_FALSE(contra.add_clause({-1}));
    CHECK(contra.solve() == sat::Result::unsat);
    sat::Solver taut(2);
    taut.add_clause({1, -1});
    CHECK(taut.solve() == sat::Result::sat);
}

TEST_CASE("conflict limit yields unknown and the search resumes") {
    sat::Solver s(9 * 10);
    for (const auto& c : pigeonhole(9)) s.add_clause(c);
    CHECK(s.solve(10) == sat::Result::unknown);
    CHECK(s.solve() == sat::Result::unsat);
}

TEST_CASE("solver executable speaks the competition format") {
    const auto dir = std::filesystem::temp_directory_path() / ("pgsat-sat-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    const std::string bin = PGSAT_SAT_BIN;

    {
        std::ofstream(dir / "sat.cnf") << "p cnf 3 2\n1 -2 0\n2 3 0\n";
        const int rc = std::system((bin + " " + (dir / "sat.cnf").string() + " > " + (dir / "out").string()).c_str());
        CHECK(WEXITSTATUS(rc) == 10);
        std::istringstream in(read_all(dir / "out"));
        const auto out = parse_solver_output(in, 3);
        REQUIRE(out.status == SolverOutput::Status::sat);
        std::vector<char> value(4);
        for (int v = 1; v <= 3; ++v) value[v] = out.assignment[v] == 1;
        CHECK(testing::clause_satisfied({1, -2}, value));
        CHECK(testing::clause_satisfied({2, 3}, value));
    }
    {
        std::ofstream(dir / "unsat.cnf") << "p cnf 1 2\n1 0\n-1 0\n";
        const int rc = std::system((bin + " " + (dir / "unsat.cnf").string() + " > " + (dir / "out").string()).c_str());
        CHECK(WEXITSTATUS(rc) == 20);
        CHECK(read_all(dir / "out").find("s UNSATISFIABLE") != std::string::npos);
    }
    {
        const int rc = std::system((bin + " " + (dir / "missing.cnf").string() + " > /dev/null 2>&1").c_str());
        CHECK(WEXITSTATUS(rc) == 1);
    }
    std::filesystem::remove_all(dir);
}
