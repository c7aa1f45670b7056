#include "pgsat/cnf.hpp"

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "pgsat/errors.hpp"

namespace pgsat {

std::size_t VarKeyHash::operator()(const VarKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.kind) * 0x9e3779b97f4a7c15ull;
    auto mix = [&](std::int32_t v) {
        h ^= static_cast<std::uint32_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    for (auto v : k.f) mix(v);
    mix(k.t);
    return static_cast<std::size_t>(h);
}

std::string to_string(const VarKey& k) {
    static const char* names[] = {"action",  "arg_eq",      "fact",      "cause",   "cnt_eq", "lit",
                                  "in_dom",  "cnt_eq_arg",  "cnt_cause", "lit_cause", "cnt_changed",
                                  "arg_bit", "cnt_bit",     "bit_eq",    "cnt_changed_bit", "amo_aux"};
    std::string s = names[static_cast<int>(k.kind)];
    s += "(";
    for (std::size_t i = 0; i < k.f.size(); ++i) s += std::to_string(k.f[i]) + ",";
    return s + "t=" + std::to_string(k.t) + ")";
}

int CnfFormula::new_var(const VarKey& key) {
    const int id = static_cast<int>(keys_.size()) + 1;
    if (!index_.emplace(key, id).second) throw ModelError("duplicate variable key " + to_string(key));
    keys_.push_back(key);
    return id;
}

int CnfFormula::var(const VarKey& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) throw ModelError("no variable for key " + to_string(key));
    return it->second;
}

const VarKey& CnfFormula::key(int var) const {
    if (var < 1 || var > num_vars()) throw ModelError("variable id out of range: " + std::to_string(var));
    return keys_[var - 1];
}

void CnfFormula::add_clause(Clause c) {
    if (c.empty()) throw ModelError("empty clause");
    for (int lit : c)
        if (lit == 0 || std::abs(lit) > num_vars()) throw ModelError("clause uses unallocated variable");
    clauses_.push_back(std::move(c));
}

void CnfFormula::at_most_one(const std::vector<int>& vars, int t) {
    const std::size_t n = vars.size();
    if (n < 2) return;
    if (n <= pairwise_limit_) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) add_clause({-vars[i], -vars[j]});
        return;
    }
    const int group = amo_groups_++;
    std::vector<int> s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) s[i] = new_var(VarKey::amo_aux(group, static_cast<int>(i), t));
    add_clause({-vars[0], s[0]});
    for (std::size_t i = 1; i + 1 < n; ++i) {
        add_clause({-vars[i], s[i]});
        add_clause({-s[i - 1], s[i]});
        add_clause({-vars[i], -s[i - 1]});
    }
    add_clause({-vars[n - 1], -s[n - 2]});
}

void CnfFormula::exactly_one(const std::vector<int>& vars, int t) {
    add_clause(Clause(vars.begin(), vars.end()));
    at_most_one(vars, t);
}

void CnfFormula::mark_segment(std::string label) {
    segments_.push_back({std::move(label), num_vars(), num_clauses()});
}

std::string CnfFormula::stats_line(int length) const {
    return "length=" + std::to_string(length) + " vars=" + std::to_string(num_vars()) +
           " clauses=" + std::to_string(num_clauses());
}

void write_dimacs(const CnfFormula& f, std::ostream& out) {
    out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
    std::string line;
    for (const Clause& c : f.clauses()) {
        line.clear();
        for (int lit : c) {
            line += std::to_string(lit);
            line += ' ';
        }
        line += "0\n";
        out << line;
    }
    if (!out) throw Error("failed to write DIMACS");
}

Dimacs read_dimacs(std::istream& in) {
    Dimacs d;
    std::string tok;
    bool header = false;
    Clause cur;
    while (in >> tok) {
        if (tok == "c") {
            std::getline(in, tok);
            continue;
        }
        if (tok == "p") {
            std::string fmt;
            std::size_t m = 0;
            in >> fmt >> d.num_vars >> m;
            if (fmt != "cnf" || !in) throw Error("bad DIMACS header");
            d.clauses.reserve(m);
            header = true;
            continue;
        }
        if (!header) throw Error("DIMACS clause before header");
        int lit = std::stoi(tok);
        if (lit == 0) {
            d.clauses.push_back(std::move(cur));
            cur.clear();
        } else {
            if (std::abs(lit) > d.num_vars) throw Error("DIMACS literal out of range: " + tok);
            cur.push_back(lit);
        }
    }
    if (!cur.empty()) throw Error("unterminated DIMACS clause");
    return d;
}

std::unordered_map<VarKey, bool, VarKeyHash> decode_model(const CnfFormula& f, const Assignment& a) {
    std::unordered_map<VarKey, bool, VarKeyHash> out;
    out.reserve(f.num_vars());
    for (int v = 1; v <= f.num_vars(); ++v) {
        if (v >= static_cast<int>(a.size()) || a[v] < 0)
            throw SolverError("model does not assign variable " + std::to_string(v));
        out.emplace(f.key(v), a[v] == 1);
    }
    return out;
}

SolverOutput parse_solver_output(std::istream& in, int num_vars) {
    SolverOutput out;
    out.assignment.assign(num_vars + 1, -1);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("s ", 0) == 0) {
            if (line.find("UNSATISFIABLE") != std::string::npos)
                out.status = SolverOutput::Status::unsat;
            else if (line.find("SATISFIABLE") != std::string::npos)
                out.status = SolverOutput::Status::sat;
        } else if (line.rfind("v ", 0) == 0 || line == "v") {
            std::istringstream ss(line.substr(1));
            int lit;
            while (ss >> lit) {
                if (lit == 0) continue;
                int v = std::abs(lit);
                if (v <= num_vars) out.assignment[v] = lit > 0 ? 1 : 0;
            }
        }
    }
    // solvers may leave out variables that occur in no clause
    if (out.status == SolverOutput::Status::sat)
        for (int v = 1; v <= num_vars; ++v)
            if (out.assignment[v] < 0) out.assignment[v] = 0;
    return out;
}

}  // namespace pgsat
