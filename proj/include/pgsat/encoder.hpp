#pragma once

// Whole formula for a given plan length, built from the per-encoding parts.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgsat/action_layer.hpp"
#include "pgsat/cnf.hpp"
#include "pgsat/cover.hpp"
#include "pgsat/encoder_ground.hpp"
#include "pgsat/encoder_plmg.hpp"
#include "pgsat/grounding.hpp"
#include "pgsat/mutex_groups.hpp"

namespace pgsat {

enum class Encoding { ground, plmg, binary };

std::string to_string(Encoding e);
std::optional<Encoding> parse_encoding(std::string_view s);

struct EncoderOptions {
    Encoding encoding = Encoding::plmg;
    bool prune = true;
    bool none_persistence = true;
    std::size_t pairwise_limit = CnfFormula::kPairwiseLimit;
};

class Encoder {
public:
    explicit Encoder(const Problem& problem, EncoderOptions options = {});
    // Uses the given verified lifted groups instead of inferring them.
    Encoder(const Problem& problem, EncoderOptions options, std::vector<LmgCandidate> lmgs);
    Encoder(const Encoder&) = delete;
    Encoder& operator=(const Encoder&) = delete;

    CnfFormula encode(int length) const;

    const Problem& problem() const { return *problem_; }
    const EncoderOptions& options() const { return options_; }
    const FactSpace& facts() const { return facts_; }
    const UnifiedArgs& unified_args() const { return ua_; }
    const std::vector<LmgCandidate>& lifted_groups() const { return lmgs_; }
    const CoverResult& cover() const { return cover_; }
    const GroundEncodingCtx& ground_ctx() const { return ground_; }
    const PlmgEncodingCtx& plmg_ctx() const { return plmg_; }

    // State layers 0..length of a model, as sets of true represented facts.
    std::vector<State> decode_states(const CnfFormula& f, const Assignment& a, int length) const;

private:
    void build();

    const Problem* problem_;
    EncoderOptions options_;
    FactSpace facts_;
    UnifiedArgs ua_;
    std::vector<bool> statics_;
    std::vector<LmgCandidate> lmgs_;
    CoverResult cover_;
    GroundEncodingCtx ground_;
    PlmgEncodingCtx plmg_;
};

}  // namespace pgsat
