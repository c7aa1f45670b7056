#pragma once

// Variable registry keyed by meaning, clause store, DIMACS I/O.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace pgsat {

enum class VarKind : std::uint8_t {
    action,           // a, t
    arg_eq,           // slot, object, t
    fact,             // fact, t
    cause_ground,     // action, effect, fact, polarity, t
    cnt_eq,           // group, counted, object, t
    lit,              // group, literal, t
    in_dom,           // group, counted, slot, t
    cnt_eq_arg,       // group, counted, slot, phase, t
    cnt_cause,        // group, counted, action, effect, t
    lit_cause,        // group, literal, action, effect, t
    cnt_changed,      // group, counted, t
    arg_bit,          // slot, bit, t
    cnt_bit,          // group, counted, bit, t
    bit_eq,           // group, counted, slot, bit, phase, t
    cnt_changed_bit,  // group, counted, bit, t
    amo_aux,          // group, k, t
};

// Equality helpers exist twice per step: against the layer before the action
// and against the layer it produces.
enum class Phase : std::int32_t { pre = 0, post = 1 };

struct VarKey {
    VarKind kind = VarKind::action;
    std::array<std::int32_t, 5> f{};
    std::int32_t t = 0;

    friend bool operator==(const VarKey&, const VarKey&) = default;

    static VarKey action(int a, int t) { return {VarKind::action, {a}, t}; }
    static VarKey arg_eq(int slot, int o, int t) { return {VarKind::arg_eq, {slot, o}, t}; }
    static VarKey fact(int f, int t) { return {VarKind::fact, {f}, t}; }
    static VarKey cause_ground(int a, int effect, int f, bool positive, int t) {
        return {VarKind::cause_ground, {a, effect, f, positive ? 1 : 0}, t};
    }
    static VarKey cnt_eq(int m, int c, int o, int t) { return {VarKind::cnt_eq, {m, c, o}, t}; }
    static VarKey lit(int m, int p, int t) { return {VarKind::lit, {m, p}, t}; }
    static VarKey in_dom(int m, int c, int slot, int t) { return {VarKind::in_dom, {m, c, slot}, t}; }
    static VarKey cnt_eq_arg(int m, int c, int slot, Phase ph, int t) {
        return {VarKind::cnt_eq_arg, {m, c, slot, static_cast<int>(ph)}, t};
    }
    static VarKey cnt_cause(int m, int c, int a, int effect, int t) {
        return {VarKind::cnt_cause, {m, c, a, effect}, t};
    }
    static VarKey lit_cause(int m, int p, int a, int effect, int t) {
        return {VarKind::lit_cause, {m, p, a, effect}, t};
    }
    static VarKey cnt_changed(int m, int c, int t) { return {VarKind::cnt_changed, {m, c}, t}; }
    static VarKey arg_bit(int slot, int b, int t) { return {VarKind::arg_bit, {slot, b}, t}; }
    static VarKey cnt_bit(int m, int c, int b, int t) { return {VarKind::cnt_bit, {m, c, b}, t}; }
    static VarKey bit_eq(int m, int c, int slot, int b, Phase ph, int t) {
        return {VarKind::bit_eq, {m, c, slot, b, static_cast<int>(ph)}, t};
    }
    static VarKey cnt_changed_bit(int m, int c, int b, int t) { return {VarKind::cnt_changed_bit, {m, c, b}, t}; }
    static VarKey amo_aux(int group, int k, int t) { return {VarKind::amo_aux, {group, k}, t}; }
};

struct VarKeyHash {
    std::size_t operator()(const VarKey& k) const noexcept;
};

std::string to_string(const VarKey& k);

using Clause = std::vector<int>;

struct SegmentMark {
    std::string label;
    int vars = 0;
    std::size_t clauses = 0;
};

class CnfFormula {
public:
    static constexpr std::size_t kPairwiseLimit = 256;

    int new_var(const VarKey& key);
    bool has(const VarKey& key) const { return index_.contains(key); }
    int var(const VarKey& key) const;  // throws if absent
    const VarKey& key(int var) const;
    int num_vars() const { return static_cast<int>(keys_.size()); }
    std::size_t num_clauses() const { return clauses_.size(); }
    const std::vector<Clause>& clauses() const { return clauses_; }

    void add_clause(Clause c);
    void add_clause(std::initializer_list<int> c) { add_clause(Clause(c)); }

    // Pairwise up to the limit, sequential counter above it. `t` tags the
    // auxiliary variables.
    void at_most_one(const std::vector<int>& vars, int t);
    void exactly_one(const std::vector<int>& vars, int t);
    void set_pairwise_limit(std::size_t n) { pairwise_limit_ = n; }
    std::size_t pairwise_limit() const { return pairwise_limit_; }

    void mark_segment(std::string label);
    const std::vector<SegmentMark>& segments() const { return segments_; }

    std::string stats_line(int length) const;

private:
    std::unordered_map<VarKey, int, VarKeyHash> index_;
    std::vector<VarKey> keys_;
    std::vector<Clause> clauses_;
    std::vector<SegmentMark> segments_;
    std::size_t pairwise_limit_ = kPairwiseLimit;
    int amo_groups_ = 0;
};

void write_dimacs(const CnfFormula& f, std::ostream& out);

struct Dimacs {
    int num_vars = 0;
    std::vector<Clause> clauses;
};
Dimacs read_dimacs(std::istream& in);

// Truth value per variable id; index 0 unused.
using Assignment = std::vector<signed char>;  // -1 unassigned, 0 false, 1 true

std::unordered_map<VarKey, bool, VarKeyHash> decode_model(const CnfFormula& f, const Assignment& a);

// Reads SAT-competition output ("s ..." and "v ..." lines).
struct SolverOutput {
    enum class Status { sat, unsat, unknown };
    Status status = Status::unknown;
    Assignment assignment;
};
SolverOutput parse_solver_output(std::istream& in, int num_vars);

}  // namespace pgsat
