#include "pgsat/solve.hpp"

#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fcntl.h>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "pgsat/errors.hpp"
#include "pgsat/grounding.hpp"
#include "pgsat/sat_solver.hpp"

extern char** environ;

namespace pgsat {

std::string format_plan(const Problem& problem, const Plan& plan) {
    std::string s;
    for (const GroundAction& a : plan.steps) s += format(problem, a) + "\n";
    return s;
}

std::string to_string(Mode m) { return m == Mode::optimal ? "optimal" : "sat"; }

std::string to_string(CallResult r) {
    switch (r) {
    case CallResult::sat: return "SAT";
    case CallResult::unsat: return "UNSAT";
    case CallResult::timeout: return "TIMEOUT";
    }
    return "?";
}

std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::plan: return "plan";
    case Outcome::unsat_bound_exhausted: return "unsat-bound-exhausted";
    case Outcome::timeout: return "timeout";
    case Outcome::error: return "error";
    }
    return "?";
}

Clock steady_clock() {
    return [] {
        using namespace std::chrono;
        return duration<double>(steady_clock::now().time_since_epoch()).count();
    };
}

namespace {

double now() {
    using namespace std::chrono;
    return duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string shell_quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) {
        if (c == '\'')
            q += "'\\''";
        else
            q += c;
    }
    return q + "'";
}

std::filesystem::path scratch_path(const std::string& tag) {
    static std::atomic<long> counter{0};
    const long n = counter++;
    return std::filesystem::temp_directory_path() /
           ("pgsat-" + std::to_string(::getpid()) + "-" + std::to_string(n) + "-" + tag);
}

}  // namespace

SolverBackend external_solver(std::string cmd) {
    SolverBackend b;
    b.needs_file = true;
    b.run = [cmd](const std::filesystem::path& cnf, const CnfFormula& f, double budget) {
        const double start = now();
        const auto out_path = scratch_path("out.txt");
        const std::string line = cmd + " " + shell_quote(cnf.string());

        posix_spawn_file_actions_t actions;
        posix_spawn_file_actions_init(&actions);
        posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC,
                                         0644);
        posix_spawnattr_t attr;
        posix_spawnattr_init(&attr);
        posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
        posix_spawnattr_setpgroup(&attr, 0);
        const char* argv[] = {"/bin/sh", "-c", line.c_str(), nullptr};
        pid_t pid = 0;
        const int rc = posix_spawn(&pid, "/bin/sh", &actions, &attr, const_cast<char* const*>(argv), environ);
        posix_spawn_file_actions_destroy(&actions);
        posix_spawnattr_destroy(&attr);
        if (rc != 0) throw SolverError("cannot start solver: " + cmd);

        SolverCall call;
        bool killed = false;
        int status = 0;
        double pause = 0.001;
        for (;;) {
            const pid_t w = ::waitpid(pid, &status, WNOHANG);
            if (w == pid) break;
            if (w < 0) throw SolverError("waitpid failed");
            if (now() - start > budget) {
                ::kill(-pid, SIGKILL);
                ::waitpid(pid, &status, 0);
                killed = true;
                break;
            }
            std::this_thread::sleep_for(std::chrono::duration<double>(pause));
            pause = std::min(pause * 2, 0.05);
        }
        call.seconds = now() - start;
        std::ifstream in(out_path);
        SolverOutput parsed = parse_solver_output(in, f.num_vars());
        in.close();
        std::error_code ec;
        std::filesystem::remove(out_path, ec);
        if (killed) {
            call.result = CallResult::timeout;
            return call;
        }
        switch (parsed.status) {
        case SolverOutput::Status::sat:
            call.result = CallResult::sat;
            call.assignment = std::move(parsed.assignment);
            break;
        case SolverOutput::Status::unsat: call.result = CallResult::unsat; break;
        case SolverOutput::Status::unknown:
            if (WIFSIGNALED(status) || (WIFEXITED(status) && WEXITSTATUS(status) != 0 && WEXITSTATUS(status) != 10 &&
                                        WEXITSTATUS(status) != 20))
                throw SolverError("solver failed without an answer: " + cmd);
            call.result = CallResult::timeout;
            break;
        }
        return call;
    };
    return b;
}

SolverBackend internal_solver() {
    SolverBackend b;
    b.needs_file = false;
    b.run = [](const std::filesystem::path&, const CnfFormula& f, double budget) {
        const double start = now();
        sat::Solver solver(f.num_vars());
        for (const Clause& c : f.clauses()) solver.add_clause(c);
        SolverCall call;
        for (;;) {
            const sat::Result r = solver.solve(20000);
            if (r == sat::Result::sat) {
                call.result = CallResult::sat;
                call.assignment.assign(f.num_vars() + 1, 0);
                for (int v = 1; v <= f.num_vars(); ++v) call.assignment[v] = solver.value(v) ? 1 : 0;
                break;
            }
            if (r == sat::Result::unsat) {
                call.result = CallResult::unsat;
                break;
            }
            if (now() - start > budget) {
                call.result = CallResult::timeout;
                break;
            }
        }
        call.seconds = now() - start;
        return call;
    };
    return b;
}

Plan extract_plan(const CnfFormula& f, const Assignment& a, const Problem& problem, const UnifiedArgs& ua,
                  int length) {
    auto value = [&](int v) {
        if (v >= static_cast<int>(a.size()) || a[v] < 0) throw SolverError("model leaves variable " + std::to_string(v) + " unassigned");
        return a[v] == 1;
    };
    Plan plan;
    int idle_from = 0;
    for (int t = 1; t <= length; ++t) {
        std::optional<ActionId> chosen;
        for (ActionId act = 0; act < static_cast<int>(problem.actions.size()); ++act) {
            if (!value(f.var(VarKey::action(act, t)))) continue;
            if (chosen) throw SolverError("two actions at step " + std::to_string(t));
            chosen = act;
        }
        if (!chosen) {
            if (!idle_from) idle_from = t;
            continue;
        }
        if (idle_from) throw SolverError("action at step " + std::to_string(t) + " after an empty step");
        GroundAction g{*chosen, {}};
        const ActionSchema& schema = problem.actions[*chosen];
        for (int p = 0; p < static_cast<int>(schema.params.size()); ++p) {
            const int slot = ua.slot_of(*chosen, p);
            const Range r = problem.types.members[ua.slots[slot].type];
            std::optional<ObjectId> obj;
            for (ObjectId o = r.lo; o < r.hi; ++o) {
                if (!value(f.var(VarKey::arg_eq(slot, o, t)))) continue;
                if (obj) throw SolverError("slot bound twice at step " + std::to_string(t));
                obj = o;
            }
            if (!obj) throw SolverError(schema.name + " at step " + std::to_string(t) + " has unbound parameter " +
                                        schema.params[p].name);
            g.binding.push_back(*obj);
        }
        plan.steps.push_back(std::move(g));
    }
    return plan;
}

Validation validate(const Plan& plan, const Problem& problem) {
    Validation v;
    std::set<GroundAtom> state(problem.init.begin(), problem.init.end());
    auto instantiate = [](const Atom& atom, const std::vector<ObjectId>& binding) {
        GroundAtom g{atom.pred, {}};
        for (const Term& t : atom.args) g.args.push_back(t.is_param() ? binding[t.index] : t.index);
        return g;
    };
    for (int i = 0; i < plan.length(); ++i) {
        const GroundAction& a = plan.steps[i];
        v.step = i + 1;
        if (a.schema < 0 || a.schema >= static_cast<int>(problem.actions.size()) ||
            a.binding.size() != problem.actions[a.schema].params.size() || !binding_respects_types(problem, a)) {
            v.message = "step " + std::to_string(i + 1) + " is not a well-typed action";
            return v;
        }
        const ActionSchema& schema = problem.actions[a.schema];
        for (const Atom& pre : schema.pre) {
            GroundAtom g = instantiate(pre, a.binding);
            if (!state.contains(g)) v.missing.push_back(std::move(g));
        }
        if (!v.missing.empty()) {
            v.message = "step " + std::to_string(i + 1) + " " + format(problem, a) + " misses " +
                        format(problem, v.missing.front());
            return v;
        }
        std::vector<GroundAtom> adds;
        for (const Atom& e : schema.add) adds.push_back(instantiate(e, a.binding));
        for (const Atom& e : schema.del) state.erase(instantiate(e, a.binding));
        for (GroundAtom& g : adds) state.insert(std::move(g));
    }
    v.step = plan.length() + 1;
    for (const GroundAtom& g : problem.goal)
        if (!state.contains(g)) v.missing.push_back(g);
    if (!v.missing.empty()) {
        v.message = "goal fact " + format(problem, v.missing.front()) + " does not hold";
        return v;
    }
    v.valid = true;
    v.step = 0;
    return v;
}

OracleResult bfs_oracle(const Problem& problem, std::size_t state_cap) {
    GroundModel model(problem);
    OracleResult r;
    std::unordered_map<State, int, StateHash> depth;
    const auto how = model.explore(state_cap, [&](const State& from, const GroundOp* op, const State& to) {
        if (!op) {
            depth.emplace(to, 0);
            if (model.goal_reached(to)) {
                r.length = 0;
                return false;
            }
            return true;
        }
        if (depth.contains(to)) return true;
        const int d = depth.at(from) + 1;
        depth.emplace(to, d);
        if (model.goal_reached(to)) {
            r.length = d;
            return false;
        }
        return true;
    });
    r.states = depth.size();
    if (how == GroundModel::Exploration::stopped)
        r.status = OracleResult::Status::solved;
    else if (how == GroundModel::Exploration::exhausted)
        r.status = OracleResult::Status::unreachable;
    else
        r.status = OracleResult::Status::capped;
    return r;
}

namespace {

struct Attempt {
    LengthRecord record;
    std::optional<Plan> plan;
};

Attempt attempt(const Encoder& enc, int length, double budget, const SolveOptions& options,
                const SolverBackend& backend) {
    Attempt out;
    const CnfFormula f = enc.encode(length);
    out.record.length = length;
    out.record.vars = f.num_vars();
    out.record.clauses = f.num_clauses();
    out.record.budget = budget;
    std::filesystem::path path;
    bool scratch = false;
    if (options.keep_cnf) {
        std::filesystem::create_directories(*options.keep_cnf);
        path = *options.keep_cnf / (enc.problem().problem_name + "-" + to_string(enc.options().encoding) +
                                    (enc.options().prune ? "" : "-nopp") + "-" + std::to_string(length) + ".cnf");
    } else if (backend.needs_file) {
        path = scratch_path("formula.cnf");
        scratch = true;
    }
    if (!path.empty()) {
        std::ofstream out(path);
        write_dimacs(f, out);
        if (!out) throw Error("cannot write " + path.string());
    }
    SolverCall call;
    try {
        call = backend.run(path, f, budget);
    } catch (...) {
        std::error_code ec;
        if (scratch) std::filesystem::remove(path, ec);
        throw;
    }
    if (scratch) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
    out.record.result = call.result;
    out.record.seconds = call.seconds;
    if (call.result == CallResult::sat) {
        Plan plan = extract_plan(f, call.assignment, enc.problem(), enc.unified_args(), length);
        const Validation v = validate(plan, enc.problem());
        if (!v.valid) throw SolverError("extracted plan does not validate: " + v.message);
        out.plan = std::move(plan);
    }
    return out;
}

SolveReport fresh_report(const Encoder& enc, Mode mode) {
    SolveReport r;
    r.mode = mode;
    r.encoding = enc.options().encoding;
    r.pp = enc.options().prune;
    return r;
}

}  // namespace

SolveResult solve_optimal(const Encoder& enc, const SolveOptions& options, const SolverBackend& backend,
                          const Clock& clock) {
    SolveResult res;
    res.report = fresh_report(enc, Mode::optimal);
    const double start = clock();
    try {
        for (int length = 0; length <= options.max_length; ++length) {
            const double remaining = options.time_limit - (clock() - start);
            if (remaining <= 0) {
                res.report.outcome = Outcome::timeout;
                return res;
            }
            Attempt a = attempt(enc, length, remaining, options, backend);
            res.report.records.push_back(a.record);
            if (a.record.result == CallResult::timeout) {
                res.report.outcome = Outcome::timeout;
                return res;
            }
            if (a.plan) {
                res.plan = std::move(a.plan);
                res.report.outcome = Outcome::plan;
                return res;
            }
        }
        res.report.outcome = Outcome::unsat_bound_exhausted;
    } catch (const std::exception& e) {
        res.report.outcome = Outcome::error;
        res.report.message = e.what();
    }
    return res;
}

SolveResult solve_satisficing(const Encoder& enc, const SolveOptions& options, const SolverBackend& backend,
                              const Clock& clock) {
    SolveResult res;
    res.report = fresh_report(enc, Mode::satisficing);
    const double start = clock();
    bool timed_out = false;
    try {
        const auto& bounds = options.bounds;
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            const double remaining = options.time_limit - (clock() - start);
            if (remaining <= 0) {
                timed_out = true;
                break;
            }
            const double budget = remaining / static_cast<double>(bounds.size() - i);
            Attempt a = attempt(enc, bounds[i], budget, options, backend);
            res.report.records.push_back(a.record);
            if (a.record.result == CallResult::timeout) timed_out = true;
            if (a.plan) {
                res.plan = std::move(a.plan);
                res.report.outcome = Outcome::plan;
                return res;
            }
        }
        res.report.outcome = timed_out ? Outcome::timeout : Outcome::unsat_bound_exhausted;
    } catch (const std::exception& e) {
        res.report.outcome = Outcome::error;
        res.report.message = e.what();
    }
    return res;
}

std::vector<BenchInstance> read_manifest(std::istream& in, const std::filesystem::path& base) {
    std::vector<BenchInstance> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string d, p, extra;
        if (!(ss >> d)) continue;
        if (!(ss >> p) || (ss >> extra)) throw Error("manifest line " + std::to_string(lineno) + ": expected two paths");
        auto resolve = [&](const std::string& s) {
            std::filesystem::path x(s);
            return x.is_absolute() ? x : base / x;
        };
        out.push_back({resolve(d), resolve(p)});
    }
    return out;
}

namespace {

BenchRow bench_job(const BenchInstance& inst, const BenchConfig& cfg, const SolveOptions& limits,
                   const SolverBackend& backend) {
    BenchRow row;
    row.instance = inst.problem.stem().string();
    row.config = cfg;
    const double start = now();
    try {
        const Problem problem = parse_files(inst.domain, inst.problem);
        EncoderOptions eo;
        eo.encoding = cfg.encoding;
        eo.prune = cfg.pp;
        const Encoder enc(problem, eo);
        SolveResult r = cfg.mode == Mode::optimal ? solve_optimal(enc, limits, backend)
                                                  : solve_satisficing(enc, limits, backend);
        row.outcome = r.report.outcome;
        row.records = std::move(r.report.records);
        row.message = r.report.message;
        if (r.plan) row.plan_length = r.plan->length();
    } catch (const std::exception& e) {
        row.outcome = Outcome::error;
        row.message = e.what();
    }
    row.seconds = now() - start;
    return row;
}

}  // namespace

std::vector<BenchRow> run_benchmark(const std::vector<BenchInstance>& instances,
                                    const std::vector<BenchConfig>& configs, const SolveOptions& limits,
                                    const SolverBackend& backend) {
    const long n = static_cast<long>(instances.size() * configs.size());
    std::vector<BenchRow> rows(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long j = 0; j < n; ++j)
        rows[j] = bench_job(instances[j / configs.size()], configs[j % configs.size()], limits, backend);
    return rows;
}

std::vector<BenchRow> run_benchmark_serial(const std::vector<BenchInstance>& instances,
                                           const std::vector<BenchConfig>& configs, const SolveOptions& limits,
                                           const SolverBackend& backend) {
    std::vector<BenchRow> rows;
    for (const BenchInstance& inst : instances)
        for (const BenchConfig& cfg : configs) rows.push_back(bench_job(inst, cfg, limits, backend));
    return rows;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

template <class F>
std::string joined(const std::vector<LengthRecord>& records, F field) {
    std::string s;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (i) s += ';';
        s += field(records[i]);
    }
    return s;
}

}  // namespace

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "instance,encoding,pp,mode,outcome,plan_length,lengths,vars,clauses,results,seconds,message\n";
    for (const BenchRow& r : rows) {
        out << csv_field(r.instance) << ',' << to_string(r.config.encoding) << ',' << (r.config.pp ? "on" : "off")
            << ',' << to_string(r.config.mode) << ',' << to_string(r.outcome) << ',' << r.plan_length << ','
            << joined(r.records, [](const LengthRecord& x) { return std::to_string(x.length); }) << ','
            << joined(r.records, [](const LengthRecord& x) { return std::to_string(x.vars); }) << ','
            << joined(r.records, [](const LengthRecord& x) { return std::to_string(x.clauses); }) << ','
            << joined(r.records, [](const LengthRecord& x) { return to_string(x.result); }) << ',' << r.seconds
            << ',' << csv_field(r.message) << '\n';
    }
}

void write_stats_csv(const std::string& instance, const SolveReport& report, std::ostream& out, bool header) {
    if (header) out << "instance,encoding,pp,length,vars,clauses,result,seconds\n";
    for (const LengthRecord& r : report.records)
        out << csv_field(instance) << ',' << to_string(report.encoding) << ',' << (report.pp ? "on" : "off") << ','
            << r.length << ',' << r.vars << ',' << r.clauses << ',' << to_string(r.result) << ',' << r.seconds
            << '\n';
}

}  // namespace pgsat
