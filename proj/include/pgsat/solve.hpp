#pragma once

// Horizon loops around the encoder and a SAT solver, plan extraction and
// checking, the BFS oracle and the benchmark runner.

#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pgsat/action_layer.hpp"
#include "pgsat/cnf.hpp"
#include "pgsat/encoder.hpp"
#include "pgsat/pddl.hpp"

namespace pgsat {

struct Plan {
    std::vector<GroundAction> steps;
    int length() const { return static_cast<int>(steps.size()); }
};

// One line per step, "(name obj ...)".
std::string format_plan(const Problem& problem, const Plan& plan);

enum class Mode { optimal, satisficing };
std::string to_string(Mode m);

enum class CallResult { sat, unsat, timeout };
std::string to_string(CallResult r);

struct SolverCall {
    CallResult result = CallResult::timeout;
    Assignment assignment;  // filled when sat
    double seconds = 0;
};

// Runs one formula. The path is only written when needs_file is set.
struct SolverBackend {
    bool needs_file = true;
    std::function<SolverCall(const std::filesystem::path& cnf, const CnfFormula& f, double budget)> run;
};

// `cmd` is run through /bin/sh with the DIMACS path appended. The process
// group is killed once the budget runs out.
SolverBackend external_solver(std::string cmd);
// The bundled CDCL solver, in process.
SolverBackend internal_solver();

// Seconds on a monotonic clock.
using Clock = std::function<double()>;
Clock steady_clock();

struct LengthRecord {
    int length = 0;
    int vars = 0;
    std::size_t clauses = 0;
    CallResult result = CallResult::timeout;
    double seconds = 0;
    double budget = 0;
};

enum class Outcome { plan, unsat_bound_exhausted, timeout, error };
std::string to_string(Outcome o);

struct SolveReport {
    Mode mode = Mode::optimal;
    Encoding encoding = Encoding::plmg;
    bool pp = true;
    std::vector<LengthRecord> records;
    Outcome outcome = Outcome::error;
    std::string message;
};

struct SolveOptions {
    int max_length = 100;
    double time_limit = std::numeric_limits<double>::infinity();
    std::optional<std::filesystem::path> keep_cnf;  // directory
    std::vector<int> bounds{10, 25, 50, 100, 200};   // satisficing only
};

struct SolveResult {
    std::optional<Plan> plan;
    SolveReport report;
};

SolveResult solve_optimal(const Encoder& encoder, const SolveOptions& options, const SolverBackend& backend,
                          const Clock& clock = steady_clock());
SolveResult solve_satisficing(const Encoder& encoder, const SolveOptions& options, const SolverBackend& backend,
                              const Clock& clock = steady_clock());

// Throws SolverError on a model that breaks the action layer's contract.
Plan extract_plan(const CnfFormula& f, const Assignment& a, const Problem& problem, const UnifiedArgs& ua,
                  int length);

struct Validation {
    bool valid = false;
    int step = 0;  // 1-based failing step; length()+1 when only the goal fails
    std::vector<GroundAtom> missing;
    std::string message;
};

Validation validate(const Plan& plan, const Problem& problem);

struct OracleResult {
    enum class Status { solved, unreachable, capped };
    Status status = Status::capped;
    int length = -1;
    std::size_t states = 0;
};

OracleResult bfs_oracle(const Problem& problem, std::size_t state_cap);

struct BenchConfig {
    Encoding encoding = Encoding::plmg;
    bool pp = true;
    Mode mode = Mode::optimal;
};

struct BenchInstance {
    std::filesystem::path domain;
    std::filesystem::path problem;
};

struct BenchRow {
    std::string instance;
    BenchConfig config;
    Outcome outcome = Outcome::error;
    int plan_length = -1;
    std::vector<LengthRecord> records;
    double seconds = 0;
    std::string message;
};

// Lines "domain.pddl problem.pddl"; blank lines and '#' comments skipped.
// Relative paths resolve against `base`.
std::vector<BenchInstance> read_manifest(std::istream& in, const std::filesystem::path& base);

std::vector<BenchRow> run_benchmark(const std::vector<BenchInstance>& instances,
                                    const std::vector<BenchConfig>& configs, const SolveOptions& limits,
                                    const SolverBackend& backend);
std::vector<BenchRow> run_benchmark_serial(const std::vector<BenchInstance>& instances,
                                           const std::vector<BenchConfig>& configs, const SolveOptions& limits,
                                           const SolverBackend& backend);

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);

// instance,encoding,pp,length,vars,clauses,result,seconds
void write_stats_csv(const std::string& instance, const SolveReport& report, std::ostream& out, bool header);

}  // namespace pgsat
