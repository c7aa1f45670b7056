// Times each OpenMP kernel against its serial reference and checks that both
// give the same answer.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>

#include <CLI11.hpp>
#include <omp.h>

#include "pgsat/errors.hpp"
#include "pgsat/grounding.hpp"
#include "pgsat/mutex_groups.hpp"
#include "pgsat/solve.hpp"

using namespace pgsat;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw pgsat::Error("cannot open " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// n blocks in one tower, goal the reversed tower.
std::string tower(int n) {
    std::string objs, init = "(handempty) (clear b0) (ontable b" + std::to_string(n - 1) + ")", goal;
    for (int i = 0; i < n; ++i) objs += " b" + std::to_string(i);
    for (int i = 0; i + 1 < n; ++i) {
        init += " (on b" + std::to_string(i) + " b" + std::to_string(i + 1) + ")";
        goal += " (on b" + std::to_string(i + 1) + " b" + std::to_string(i) + ")";
    }
    return "(define (problem tower" + std::to_string(n) + ") (:domain blocksworld) (:objects" + objs +
           " - block) (:init " + init + ") (:goal (and" + goal + ")))";
}

void row(const char* name, double serial, double parallel, bool agree) {
    std::printf("%-22s %10.2f %10.2f %8.2fx  %s\n", name, serial * 1e3, parallel * 1e3, serial / parallel,
                agree ? "agree" : "DISAGREE");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OpenMP kernels against their serial references"};
    std::string data = PGSAT_TEST_DATA;
    int reps = 3, blocks = 6;
    app.add_option("--data", data, "directory with the test instances");
    app.add_option("--reps", reps, "repetitions, best time reported");
    app.add_option("--blocks", blocks, "tower size for the state-space kernel");
    CLI11_PARSE(app, argc, argv);

    try {
        const std::filesystem::path dir(data);
        std::printf("threads: %d\n", omp_get_max_threads());
        std::printf("%-22s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");
        bool all = true;

        {
            const Problem p = parse(read_file(dir / "blocksworld-domain.pddl"), tower(blocks));
            const auto cands = generate_candidates(p);
            std::vector<char> a, b;
            const double s = best_of(reps, [&] { a = verify_candidates_serial(cands, p); });
            const double o = best_of(reps, [&] { b = verify_candidates(cands, p); });
            row("verify_candidates", s, o, a == b);
            all = all && a == b;
        }
        {
            const Problem p = parse(read_file(dir / "blocksworld-domain.pddl"), tower(blocks));
            const FactSpace fs(p);
            std::vector<Plmg> groups;
            for (const auto& c : infer_lifted_mutex_groups(p))
                for (auto& g : instantiate(c, p, fs)) groups.push_back(std::move(g));
            const GroundModel model(p);
            std::vector<MutexVerdict> a, b;
            const double s = best_of(reps, [&] { a = verify_mutex_exhaustive_serial(groups, model, 5000000); });
            const double o = best_of(reps, [&] { b = verify_mutex_exhaustive(groups, model, 5000000); });
            bool same = a.size() == b.size();
            for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].kind == b[i].kind;
            row("verify_mutex_exhaustive", s, o, same);
            all = all && same;
        }
        {
            std::vector<BenchInstance> instances;
            for (const char* d : {"transport", "blocksworld", "gripper", "visitall"})
                for (int i = 1; i <= 3; ++i) {
                    auto prob = dir / (std::string(d) + "-p0" + std::to_string(i) + ".pddl");
                    if (std::filesystem::exists(prob)) instances.push_back({dir / (std::string(d) + "-domain.pddl"), prob});
                }
            std::vector<BenchConfig> configs{{Encoding::ground, true, Mode::optimal},
                                             {Encoding::plmg, true, Mode::optimal},
                                             {Encoding::binary, true, Mode::optimal}};
            std::vector<BenchRow> a, b;
            const auto backend = internal_solver();
            const double s = best_of(reps, [&] { a = run_benchmark_serial(instances, configs, {}, backend); });
            const double o = best_of(reps, [&] { b = run_benchmark(instances, configs, {}, backend); });
            bool same = a.size() == b.size();
            for (std::size_t i = 0; same && i < a.size(); ++i)
                same = a[i].outcome == b[i].outcome && a[i].plan_length == b[i].plan_length;
            row("run_benchmark", s, o, same);
            all = all && same;
        }
        return all ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
