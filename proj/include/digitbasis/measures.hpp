#pragma once

#include <vector>

#include "basis.hpp"
#include "binomial.hpp"

namespace digitbasis {

/// Finitely additive K-valued measure on O, resolved at level n: one value
/// per ball (coset of m^n), in canonical ball order.
struct Measure {
    const LocalField* field = nullptr;
    int level = 0;
    int precN = kExactPrec;
    std::vector<LocalElem> values;

    static Measure zero(const LocalField* f, int level, int precN) {
        Measure m;
        m.field = f;
        m.level = level;
        m.precN = precN;
        long long n = 1;
        for (int i = 0; i < level; ++i) n *= f->residue_q();
        m.values.assign(n, LocalElem::zero_at(f, precN));
        return m;
    }
    static Measure dirac(const LocalField* f, int level, int precN, long long ball_index) {
        Measure m = zero(f, level, precN);
        m.values.at(ball_index) = LocalElem::one(f).truncate(precN);
        return m;
    }
    size_t size() const { return values.size(); }
};

/// Convolution at a common level: (nu * mu)(ball) = sum over pairs of balls
/// whose representatives add into the target ball.
inline Measure convolve(const Measure& nu, const Measure& mu) {
    if (nu.field != mu.field || nu.level != mu.level)
        throw InputError("convolve: level or field mismatch");
    Measure out = Measure::zero(nu.field, nu.level, prec_min(nu.precN, mu.precN));
    auto reps = canonical_reps(nu.field, nu.level);
    for (size_t a = 0; a < reps.size(); ++a) {
        if (nu.values[a].is_zero_at_precision()) continue;
        for (size_t b = 0; b < reps.size(); ++b) {
            if (mu.values[b].is_zero_at_precision()) continue;
            long long target = class_index((reps[a] + reps[b]).truncate(nu.level), nu.level);
            out.values[target] = out.values[target] + nu.values[a] * mu.values[b];
        }
    }
    for (auto& v : out.values) v = v.truncate(out.precN);
    return out;
}

/// Formal divided power series: coefficients c_i of X^i/i!, truncated at an
/// index bound.  Multiplication uses (X^i/i!)(X^j/j!) = binom(i+j,i)
/// X^(i+j)/(i+j)! with binomials reduced mod p.
struct DividedPowerSeries {
    const LocalField* field = nullptr;
    std::vector<LocalElem> c;

    static DividedPowerSeries zero(const LocalField* f, size_t bound) {
        DividedPowerSeries s;
        s.field = f;
        s.c.assign(bound, LocalElem::zero(f));
        return s;
    }
    DividedPowerSeries operator*(const DividedPowerSeries& o) const {
        if (field != o.field) throw InputError("DividedPowerSeries: mixed fields");
        size_t bound = std::min(c.size(), o.c.size());
        DividedPowerSeries out = zero(field, bound);
        int p = field->characteristic();
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i].is_zero_at_precision() && c[i].is_exact()) continue;
            for (size_t j = 0; j < o.c.size(); ++j) {
                size_t k = i + j;
                if (k >= bound) continue;
                int b = binom_mod_p(static_cast<long long>(k), static_cast<long long>(i), p);
                if (b == 0) continue;
                out.c[k] = out.c[k] + LocalElem::from_integer(field, b) * c[i] * o.c[j];
            }
        }
        return out;
    }
    bool congruent_mod(const DividedPowerSeries& o, int N) const {
        if (c.size() != o.c.size()) return false;
        for (size_t i = 0; i < c.size(); ++i)
            if (!c[i].congruent_mod(o.c[i], N)) return false;
        return true;
    }
};

/// The measure transform of section-6 type: nu maps to
/// sum_i (integral of f_i d nu) X^i / i!, with f_i the digit extension of the
/// given family and i below the index bound (at most q^level).
inline DividedPowerSeries measure_transform(const Measure& nu, const BasisFamily& fam,
                                            size_t index_bound) {
    if (fam.field != nu.field) throw InputError("measure_transform: field mismatch");
    if (nu.field->kind() == FieldKind::Padic)
        throw InputError("measure_transform: defined for the characteristic-p settings");
    if (index_bound > nu.size())
        throw InputError("measure_transform: index bound exceeds level resolution");
    DividedPowerSeries out = DividedPowerSeries::zero(nu.field, index_bound);
    auto reps = canonical_reps(nu.field, nu.level);
    for (size_t i = 0; i < index_bound; ++i) {
        LocalElem acc = LocalElem::zero_at(nu.field, nu.precN);
        for (size_t v = 0; v < reps.size(); ++v) {
            if (nu.values[v].is_zero_at_precision()) continue;
            acc = acc + digit_extend(fam, static_cast<long long>(i), reps[v], nu.precN) *
                            nu.values[v];
        }
        out.c[i] = acc.truncate(nu.precN);
    }
    return out;
}

inline DividedPowerSeries measure_transform(const Measure& nu, const BasisFamily& fam) {
    return measure_transform(nu, fam, nu.size());
}

}  // namespace digitbasis
