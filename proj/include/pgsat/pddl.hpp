#pragma once

// Lifted typed-STRIPS problem representation and the PDDL front end.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pgsat {

using TypeId = int;
using ObjectId = int;
using PredId = int;
using ActionId = int;
using FactId = int;

// Half-open interval of object indices.
struct Range {
    int lo = 0;
    int hi = 0;

    int size() const { return hi > lo ? hi - lo : 0; }
    bool empty() const { return size() == 0; }
    bool contains(int i) const { return lo <= i && i < hi; }
    bool contains(const Range& o) const { return o.empty() || (lo <= o.lo && o.hi <= hi); }
    bool intersects(const Range& o) const { return std::max(lo, o.lo) < std::min(hi, o.hi); }
    Range intersect(const Range& o) const {
        int l = std::max(lo, o.lo);
        return {l, std::max(l, std::min(hi, o.hi))};
    }
    friend bool operator==(const Range&, const Range&) = default;
};

// Flattened type tree. Every type's members form one contiguous index range.
struct TypeTable {
    std::vector<std::string> names;
    std::vector<TypeId> parent;  // -1 for the root
    std::vector<Range> members;

    int size() const { return static_cast<int>(names.size()); }
    std::optional<TypeId> find(std::string_view name) const;
    bool contains(TypeId t, ObjectId o) const { return members[t].contains(o); }
    bool intersects(TypeId a, TypeId b) const { return members[a].intersects(members[b]); }
    // members(sub) is a subset of members(super)
    bool covers(TypeId super, TypeId sub) const { return members[super].contains(members[sub]); }
    bool is_ancestor(TypeId ancestor, TypeId t) const;
    std::vector<TypeId> children(TypeId t) const;

    friend bool operator==(const TypeTable&, const TypeTable&) = default;
};

struct Object {
    std::string name;
    TypeId type = 0;
    bool constant = false;  // declared in the domain's :constants

    friend bool operator==(const Object&, const Object&) = default;
};

struct Term {
    enum class Kind : std::uint8_t { param, object };
    Kind kind = Kind::param;
    int index = 0;  // parameter index of the owning action, or object id

    static Term param(int i) { return {Kind::param, i}; }
    static Term object(ObjectId o) { return {Kind::object, o}; }
    bool is_param() const { return kind == Kind::param; }
    bool is_object() const { return kind == Kind::object; }

    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
};

struct Atom {
    PredId pred = 0;
    std::vector<Term> args;

    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct GroundAtom {
    PredId pred = 0;
    std::vector<ObjectId> args;

    friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
    friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

struct Param {
    std::string name;
    TypeId type = 0;
    friend bool operator==(const Param&, const Param&) = default;
};

struct PredicateSchema {
    std::string name;
    std::vector<Param> params;
    bool is_static = false;  // occurs in no effect

    int arity() const { return static_cast<int>(params.size()); }
    friend bool operator==(const PredicateSchema&, const PredicateSchema&) = default;
};

struct ActionSchema {
    std::string name;
    std::vector<Param> params;
    std::vector<Atom> pre;
    std::vector<Atom> add;
    std::vector<Atom> del;

    friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

enum class Polarity : std::uint8_t { positive, negative };

struct Problem {
    std::string domain_name;
    std::string problem_name;
    TypeTable types;
    std::vector<Object> objects;
    std::vector<PredicateSchema> predicates;
    std::vector<ActionSchema> actions;
    std::vector<GroundAtom> init;  // sorted, unique
    std::vector<GroundAtom> goal;  // sorted, unique

    int num_objects() const { return static_cast<int>(objects.size()); }
    std::optional<ObjectId> find_object(std::string_view name) const;
    std::optional<PredId> find_predicate(std::string_view name) const;
    std::optional<ActionId> find_action(std::string_view name) const;
    bool in_init(const GroundAtom& f) const;

    friend bool operator==(const Problem&, const Problem&) = default;
};

struct GroundAction {
    ActionId schema = 0;
    std::vector<ObjectId> binding;

    friend bool operator==(const GroundAction&, const GroundAction&) = default;
    friend auto operator<=>(const GroundAction&, const GroundAction&) = default;
};

// Hierarchy as declared, before flattening.
struct RawTypes {
    std::vector<std::pair<std::string, std::string>> types;    // (type, parent); parent may be empty
    std::vector<std::pair<std::string, std::string>> objects;  // (object, type)
    std::vector<bool> constant;                                // per object, optional
};

struct FlatTypes {
    TypeTable types;
    std::vector<Object> objects;
};

Problem parse(std::string_view domain_text, std::string_view problem_text);
Problem parse_files(const std::filesystem::path& domain, const std::filesystem::path& problem);

// Objects are ordered depth-first over the type tree, each type's own objects
// before those of its subtypes. Throws ModelError on a non-tree hierarchy.
FlatTypes flatten_types(const RawTypes& raw);

struct Achiever {
    ActionId action = 0;
    int effect = 0;  // index into add (positive) or del (negative)
    friend bool operator==(const Achiever&, const Achiever&) = default;
};

std::vector<Achiever> achievers(const Problem& problem, PredId pred, Polarity polarity);

// Cartesian product of the parameter type members, lexicographic in object index.
std::vector<GroundAtom> ground_facts(const Problem& problem, PredId pred);

// Dense numbering of every type-correct fact.
class FactSpace {
public:
    explicit FactSpace(const Problem& problem);

    int size() const { return total_; }
    std::optional<FactId> id(PredId pred, std::span<const ObjectId> args) const;
    std::optional<FactId> id(const GroundAtom& f) const { return id(f.pred, f.args); }
    GroundAtom atom(FactId f) const;
    PredId predicate(FactId f) const;
    Range facts_of(PredId pred) const { return {offset_[pred], offset_[pred + 1]}; }

private:
    std::vector<int> offset_;
    std::vector<std::vector<Range>> domains_;
    int total_ = 0;
};

std::string format(const Problem& problem, const GroundAtom& f);
std::string format(const Problem& problem, const GroundAction& a);
std::string format(const Problem& problem, const ActionSchema& a, const Atom& atom);

std::string to_domain_pddl(const Problem& problem);
std::string to_problem_pddl(const Problem& problem);

// Static predicates whose preconditions are compiled into action-level
// constraints. A static predicate used with three or more distinct variables
// in some precondition is left out and tracked as ordinary state instead.
std::vector<bool> action_level_statics(const Problem& problem);

// Everything the planner may be given has to respect parameter types.
bool binding_respects_types(const Problem& problem, const GroundAction& a);

}  // namespace pgsat
