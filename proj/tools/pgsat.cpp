#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pgsat/encoder.hpp"
#include "pgsat/errors.hpp"
#include "pgsat/solve.hpp"

using namespace pgsat;

namespace {

Encoding encoding_arg(const std::string& s) {
    auto e = parse_encoding(s);
    if (!e) throw Error("unknown encoding " + s);
    return *e;
}

int exit_code(Outcome o) {
    switch (o) {
    case Outcome::plan: return 0;
    case Outcome::unsat_bound_exhausted: return 10;
    case Outcome::timeout: return 20;
    case Outcome::error: return 1;
    }
    return 1;
}

Plan read_plan(std::istream& in, const Problem& problem) {
    Plan plan;
    std::string line;
    while (std::getline(in, line)) {
        const auto semi = line.find(';');
        if (semi != std::string::npos) line.erase(semi);
        for (char& c : line)
            if (c == '(' || c == ')') c = ' ';
        std::istringstream ss(line);
        std::string name;
        if (!(ss >> name)) continue;
        auto a = problem.find_action(name);
        if (!a) throw Error("unknown action " + name);
        GroundAction g{*a, {}};
        std::string obj;
        while (ss >> obj) {
            auto o = problem.find_object(obj);
            if (!o) throw Error("unknown object " + obj);
            g.binding.push_back(*o);
        }
        plan.steps.push_back(std::move(g));
    }
    return plan;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lifted planning as SAT with partially lifted mutex groups"};
    app.require_subcommand(1);

    std::string domain, problem_file, encoding = "plmg", mode = "optimal", solver, keep_cnf, stats;
    bool no_pp = false;
    int max_length = 100;
    double time_limit = 0;

    auto* plan = app.add_subcommand("plan", "find a plan");
    plan->add_option("--domain", domain)->required();
    plan->add_option("--problem", problem_file)->required();
    plan->add_option("--encoding", encoding)->check(CLI::IsMember({"ground", "plmg", "binary"}));
    plan->add_flag("--no-pp", no_pp, "keep predicates that occur in no precondition");
    plan->add_option("--mode", mode)->check(CLI::IsMember({"optimal", "sat"}));
    plan->add_option("--solver", solver, "command taking a DIMACS path")->required();
    plan->add_option("--max-length", max_length);
    plan->add_option("--time-limit", time_limit, "seconds, 0 = none");
    plan->add_option("--keep-cnf", keep_cnf, "directory for the generated formulas");
    plan->add_option("--stats", stats, "per-length CSV");

    int length = 0;
    std::string out_file;
    auto* encode = app.add_subcommand("encode", "write the formula for one length as DIMACS");
    encode->add_option("--domain", domain)->required();
    encode->add_option("--problem", problem_file)->required();
    encode->add_option("--encoding", encoding)->check(CLI::IsMember({"ground", "plmg", "binary"}));
    encode->add_flag("--no-pp", no_pp);
    encode->add_option("--length", length)->required();
    encode->add_option("-o,--output", out_file);

    bool lifted = false;
    auto* groups = app.add_subcommand("groups", "print the mutex groups and the chosen cover");
    groups->add_option("--domain", domain)->required();
    groups->add_option("--problem", problem_file)->required();
    groups->add_flag("--no-pp", no_pp);
    groups->add_flag("--lifted", lifted, "also list every verified lifted group");

    std::string plan_file;
    auto* val = app.add_subcommand("validate", "check a plan file");
    val->add_option("--domain", domain)->required();
    val->add_option("--problem", problem_file)->required();
    val->add_option("--plan", plan_file)->required();

    std::size_t cap = 1000000;
    auto* oracle = app.add_subcommand("oracle", "breadth-first optimal length");
    oracle->add_option("--domain", domain)->required();
    oracle->add_option("--problem", problem_file)->required();
    oracle->add_option("--cap", cap, "maximum number of states");

    std::string manifest, csv;
    std::vector<std::string> encodings{"ground", "plmg", "binary"};
    bool serial = false;
    auto* bench = app.add_subcommand("bench", "run a manifest of instances");
    bench->add_option("--manifest", manifest)->required();
    bench->add_option("--encodings", encodings)->check(CLI::IsMember({"ground", "plmg", "binary"}));
    bench->add_flag("--no-pp", no_pp);
    bench->add_option("--mode", mode)->check(CLI::IsMember({"optimal", "sat"}));
    bench->add_option("--solver", solver)->required();
    bench->add_option("--max-length", max_length);
    bench->add_option("--time-limit", time_limit);
    bench->add_option("--csv", csv);
    bench->add_flag("--serial", serial);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bench) {
            std::ifstream in(manifest);
            if (!in) throw Error("cannot open " + manifest);
            const auto instances = read_manifest(in, std::filesystem::path(manifest).parent_path());
            std::vector<BenchConfig> configs;
            for (const auto& e : encodings)
                configs.push_back({encoding_arg(e), !no_pp, mode == "sat" ? Mode::satisficing : Mode::optimal});
            SolveOptions opts;
            opts.max_length = max_length;
            if (time_limit > 0) opts.time_limit = time_limit;
            const auto backend = external_solver(solver);
            const auto rows = serial ? run_benchmark_serial(instances, configs, opts, backend)
                                     : run_benchmark(instances, configs, opts, backend);
            if (csv.empty()) {
                write_bench_csv(rows, std::cout);
            } else {
                std::ofstream out(csv);
                write_bench_csv(rows, out);
            }
            return 0;
        }

        const Problem problem = parse_files(domain, problem_file);

        if (*val) {
            std::ifstream in(plan_file);
            if (!in) throw Error("cannot open " + plan_file);
            const Validation v = validate(read_plan(in, problem), problem);
            std::cout << (v.valid ? "valid" : "invalid: " + v.message) << "\n";
            return v.valid ? 0 : 1;
        }
        if (*oracle) {
            const OracleResult r = bfs_oracle(problem, cap);
            switch (r.status) {
            case OracleResult::Status::solved: std::cout << "optimal length " << r.length << "\n"; break;
            case OracleResult::Status::unreachable: std::cout << "unreachable\n"; break;
            case OracleResult::Status::capped: std::cout << "capped after " << r.states << " states\n"; break;
            }
            return r.status == OracleResult::Status::capped ? 20 : 0;
        }
        if (*groups) {
            EncoderOptions eo;
            eo.encoding = Encoding::plmg;
            eo.prune = !no_pp;
            const Encoder enc(problem, eo);
            if (lifted)
                for (const auto& g : enc.lifted_groups()) std::cout << format(problem, g) << "\n";
            for (const auto& g : enc.cover().selected) std::cout << format(problem, g) << "\n";
            std::cout << cover_report(problem, enc.cover());
            return 0;
        }

        EncoderOptions eo;
        eo.encoding = encoding_arg(encoding);
        eo.prune = !no_pp;
        const Encoder enc(problem, eo);

        if (*encode) {
            const CnfFormula f = enc.encode(length);
            std::cerr << f.stats_line(length) << "\n";
            if (out_file.empty()) {
                write_dimacs(f, std::cout);
            } else {
                std::ofstream out(out_file);
                write_dimacs(f, out);
            }
            return 0;
        }

        SolveOptions opts;
        opts.max_length = max_length;
        if (time_limit > 0) opts.time_limit = time_limit;
        if (!keep_cnf.empty()) opts.keep_cnf = keep_cnf;
        const auto backend = external_solver(solver);
        const SolveResult r =
            mode == "sat" ? solve_satisficing(enc, opts, backend) : solve_optimal(enc, opts, backend);
        if (!stats.empty()) {
            const bool fresh = !std::filesystem::exists(stats) || std::filesystem::file_size(stats) == 0;
            std::ofstream out(stats, std::ios::app);
            write_stats_csv(std::filesystem::path(problem_file).stem().string(), r.report, out, fresh);
        }
        for (const auto& rec : r.report.records)
            std::cerr << "length " << rec.length << ": vars=" << rec.vars << " clauses=" << rec.clauses << " "
                      << to_string(rec.result) << " " << rec.seconds << "s\n";
        if (r.plan) {
            std::cout << format_plan(problem, *r.plan);
            std::cerr << "plan length " << r.plan->length() << "\n";
        } else {
            std::cerr << to_string(r.report.outcome);
            if (!r.report.message.empty()) std::cerr << ": " << r.report.message;
            std::cerr << "\n";
        }
        return exit_code(r.report.outcome);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
