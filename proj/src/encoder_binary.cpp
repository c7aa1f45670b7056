#include "pgsat/encoder_binary.hpp"

namespace pgsat {

int bit_count(int num_objects) {
    int b = 0;
    while ((1 << b) < num_objects) ++b;
    return b;
}

std::vector<Clause> range_clauses(const std::vector<int>& bits, int lo, int hi) {
    const int nb = static_cast<int>(bits.size());
    std::vector<Clause> out;
    auto prefix = [&](int bound, int b) {
        // negation of "bits above b agree with bound"
        Clause c;
        for (int h = b + 1; h < nb; ++h) c.push_back(bit_of(bound, h) ? -bits[h] : bits[h]);
        return c;
    };
    for (int b = 0; b < nb; ++b) {
        if (bit_of(lo, b)) {
            Clause c = prefix(lo, b);
            c.push_back(bits[b]);
            out.push_back(std::move(c));
        }
        if (!bit_of(hi, b)) {
            Clause c = prefix(hi, b);
            c.push_back(-bits[b]);
            out.push_back(std::move(c));
        }
    }
    return out;
}

void encode_bits_for_args(CnfFormula& f, const PlmgEncodingCtx& ctx, int t) {
    for (int slot : ctx.bit_slots) {
        std::vector<int> bits;
        for (int b = 0; b < ctx.bits; ++b) bits.push_back(f.new_var(VarKey::arg_bit(slot, b, t)));
        const Range r = ctx.problem->types.members[ctx.ua->slots[slot].type];
        for (ObjectId o = r.lo; o < r.hi; ++o) {
            const int arg = f.var(VarKey::arg_eq(slot, o, t));
            for (int b = 0; b < ctx.bits; ++b) f.add_clause({-arg, bit_of(o, b) ? bits[b] : -bits[b]});
        }
    }
}

void encode_type_range(CnfFormula& f, const PlmgEncodingCtx& ctx, int t) {
    for (int m = 0; m < static_cast<int>(ctx.cover->selected.size()); ++m) {
        const Plmg& g = ctx.group(m);
        for (int c = 0; c < static_cast<int>(g.counted.size()); ++c) {
            const Range r = ctx.problem->types.members[g.counted[c].type];
            if (r.empty()) continue;
            std::vector<int> bits;
            for (int b = 0; b < ctx.bits; ++b) bits.push_back(f.var(VarKey::cnt_bit(m, c, b, t)));
            for (Clause& cl : range_clauses(bits, r.lo, r.hi - 1)) f.add_clause(std::move(cl));
        }
    }
}

void encode_bit_equality(CnfFormula& f, const PlmgEncodingCtx& ctx, int t) {
    for (auto [m, c, slot, phase] : ctx.eq_refs) {
        const Phase ph = static_cast<Phase>(phase);
        const int layer = ph == Phase::pre ? t - 1 : t;
        const int eq = f.new_var(VarKey::cnt_eq_arg(m, c, slot, ph, t));
        Clause all{eq};
        for (int b = 0; b < ctx.bits; ++b) {
            const int e = f.new_var(VarKey::bit_eq(m, c, slot, b, ph, t));
            const int vb = f.var(VarKey::arg_bit(slot, b, t));
            const int cb = f.var(VarKey::cnt_bit(m, c, b, layer));
            f.add_clause({-vb, -cb, e});
            f.add_clause({vb, cb, e});
            f.add_clause({-cb, -eq, vb});
            f.add_clause({-vb, -eq, cb});
            all.push_back(-e);
        }
        f.add_clause(std::move(all));
    }
}

void encode_bit_change(CnfFormula& f, const PlmgEncodingCtx& ctx, int t) {
    for (int m = 0; m < static_cast<int>(ctx.cover->selected.size()); ++m) {
        const Plmg& g = ctx.group(m);
        for (int c = 0; c < static_cast<int>(g.counted.size()); ++c) {
            const int changed = f.var(VarKey::cnt_changed(m, c, t));
            Clause any{-changed};
            for (int b = 0; b < ctx.bits; ++b) {
                const int d = f.new_var(VarKey::cnt_changed_bit(m, c, b, t));
                const int before = f.var(VarKey::cnt_bit(m, c, b, t - 1));
                const int after = f.var(VarKey::cnt_bit(m, c, b, t));
                f.add_clause({-d, changed});
                f.add_clause({-before, after, d});
                f.add_clause({before, -after, d});
                any.push_back(d);
            }
            f.add_clause(std::move(any));
        }
    }
}

}  // namespace pgsat
