#include "pgsat/encoder.hpp"

#include <algorithm>

#include "pgsat/encoder_binary.hpp"
#include "pgsat/errors.hpp"

namespace pgsat {

std::string to_string(Encoding e) {
    switch (e) {
    case Encoding::ground: return "ground";
    case Encoding::plmg: return "plmg";
    case Encoding::binary: return "binary";
    }
    return "?";
}

std::optional<Encoding> parse_encoding(std::string_view s) {
    if (s == "ground") return Encoding::ground;
    if (s == "plmg") return Encoding::plmg;
    if (s == "binary") return Encoding::binary;
    return std::nullopt;
}

Encoder::Encoder(const Problem& problem, EncoderOptions options)
    : problem_(&problem), options_(options), facts_(problem) {
    if (options_.encoding != Encoding::ground) lmgs_ = infer_lifted_mutex_groups(problem);
    build();
}

Encoder::Encoder(const Problem& problem, EncoderOptions options, std::vector<LmgCandidate> lmgs)
    : problem_(&problem), options_(options), facts_(problem), lmgs_(std::move(lmgs)) {
    build();
}

void Encoder::build() {
    ua_ = compute_unified_args(*problem_);
    statics_ = action_level_statics(*problem_);
    if (options_.encoding == Encoding::ground)
        cover_ = ground_cover(*problem_, facts_, options_.prune);
    else
        cover_ = select_cover(*problem_, facts_, lmgs_, options_.prune);
    ground_ = make_ground_ctx(*problem_, facts_, ua_, cover_, grouped_facts(cover_, facts_));
    plmg_ = make_plmg_ctx(*problem_, facts_, ua_, cover_, options_.encoding == Encoding::binary,
                          options_.none_persistence);
}

CnfFormula Encoder::encode(int length) const {
    if (length < 0) throw ModelError("negative plan length");
    CnfFormula f;
    f.set_pairwise_limit(options_.pairwise_limit);
    allocate_fact_layer(f, ground_, 0);
    allocate_group_layer(f, plmg_, 0);
    encode_state_skeleton(f, plmg_, 0);
    encode_init(f, ground_);
    encode_init_plmg(f, plmg_);
    f.mark_segment("init");
    for (int t = 1; t <= length; ++t) {
        encode_action_step(f, t, *problem_, ua_);
        allocate_fact_layer(f, ground_, t);
        allocate_group_layer(f, plmg_, t);
        encode_static_preconditions(f, t, *problem_, ua_, statics_);
        encode_compactness(f, t, *problem_);
        encode_state_skeleton(f, plmg_, t);
        encode_helpers(f, plmg_, t);
        encode_preconditions(f, ground_, t);
        encode_preconditions_plmg(f, plmg_, t);
        encode_effects(f, ground_, t);
        encode_effects_plmg(f, plmg_, t);
        encode_causes_and_frames(f, ground_, t);
        encode_causes_frames_plmg(f, plmg_, t);
        f.mark_segment("step " + std::to_string(t));
    }
    encode_goal(f, ground_, length);
    encode_goal_plmg(f, plmg_, length);
    f.mark_segment("goal");
    return f;
}

std::vector<State> Encoder::decode_states(const CnfFormula& f, const Assignment& a, int length) const {
    auto value = [&](const VarKey& k) {
        const int v = f.var(k);
        if (v >= static_cast<int>(a.size()) || a[v] < 0) throw SolverError("model misses " + to_string(k));
        return a[v] == 1;
    };
    const auto& types = problem_->types;
    std::vector<State> out;
    for (int t = 0; t <= length; ++t) {
        State s;
        for (FactId fact : ground_.state_facts)
            if (value(VarKey::fact(fact, t))) s.push_back(fact);
        for (int m = 0; m < static_cast<int>(cover_.selected.size()); ++m) {
            const Plmg& g = cover_.selected[m];
            for (int i = 0; i < static_cast<int>(g.atoms.size()); ++i) {
                if (!value(VarKey::lit(m, i, t))) continue;
                std::vector<ObjectId> args;
                for (const PlmgTerm& term : g.atoms[i].args) {
                    if (!term.counted) {
                        args.push_back(term.index);
                        continue;
                    }
                    ObjectId o = -1;
                    if (plmg_.binary) {
                        o = 0;
                        for (int b = 0; b < plmg_.bits; ++b)
                            if (value(VarKey::cnt_bit(m, term.index, b, t))) o |= 1 << b;
                    } else {
                        const Range r = types.members[g.counted[term.index].type];
                        for (ObjectId x = r.lo; x < r.hi && o < 0; ++x)
                            if (value(VarKey::cnt_eq(m, term.index, x, t))) o = x;
                    }
                    args.push_back(o);
                }
                auto id = facts_.id(g.atoms[i].pred, args);
                if (!id) throw SolverError("model assigns a value outside the group's domain");
                s.push_back(*id);
            }
        }
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace pgsat
