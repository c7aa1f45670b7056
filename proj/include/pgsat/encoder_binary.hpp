#pragma once

// Counted-variable values as bit vectors over the global object numbering.

#include "pgsat/encoder_plmg.hpp"

namespace pgsat {

// ceil(log2(n)); 0 for n <= 1.
int bit_count(int num_objects);
inline bool bit_of(int i, int b) { return ((i >> b) & 1) != 0; }

// Clauses excluding every pattern outside [lo, hi] for `bits` over B positions.
std::vector<Clause> range_clauses(const std::vector<int>& bits, int lo, int hi);

void encode_bits_for_args(CnfFormula& f, const PlmgEncodingCtx& ctx, int t);
void encode_type_range(CnfFormula& f, const PlmgEncodingCtx& ctx, int t);
void encode_bit_equality(CnfFormula& f, const PlmgEncodingCtx& ctx, int t);
void encode_bit_change(CnfFormula& f, const PlmgEncodingCtx& ctx, int t);

}  // namespace pgsat
