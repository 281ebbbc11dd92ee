#pragma once

#include <vector>

#include "basis.hpp"
#include "binomial.hpp"
#include "local.hpp"

namespace digitbasis {

/// j-th hyperdifferential (divided power) operator on F[T]:
/// D_j(T^m) = binom(m, j) T^(m-j), extended F-linearly.
inline Poly hyperdiff_poly(int j, const Poly& f) {
    if (j < 0) throw InputError("hyperdiff_poly: negative order");
    const FqField* F = f.field();
    if (f.degree() < j) return Poly::zero(F);
    std::vector<FqElem> out(f.degree() - j + 1, F->zero());
    for (int m = j; m <= f.degree(); ++m)
        out[m - j] = f.coeff(m) * F->from_int(binom_mod_p(m, j, F->p()));
    return Poly(F, std::move(out));
}

/// Truncated Taylor series sum_j (D_j f) X^j, as X-coefficients (index =
/// power of X).
using TaylorSeries = std::vector<Poly>;

inline TaylorSeries taylor_series_mul(const TaylorSeries& a, const TaylorSeries& b, int M,
                                      const FqField* F) {
    TaylorSeries out(M + 1, Poly::zero(F));
    for (size_t i = 0; i < a.size() && i <= static_cast<size_t>(M); ++i)
        for (size_t j = 0; j < b.size() && i + j <= static_cast<size_t>(M); ++j)
            out[i + j] = out[i + j] + a[i] * b[j];
    return out;
}

/// Substitution route: f(T + X) mod X^(M+1) by Horner in T + X.
inline TaylorSeries taylor_by_substitution(const Poly& f, int M) {
    const FqField* F = f.field();
    TaylorSeries acc(M + 1, Poly::zero(F));
    for (int i = f.degree(); i >= 0; --i) {
        // acc <- acc*(T+X) + c_i
        TaylorSeries next(M + 1, Poly::zero(F));
        for (int k = 0; k <= M; ++k) {
            next[k] = acc[k] * Poly::t_power(F, 1);
            if (k > 0) next[k] = next[k] + acc[k - 1];
        }
        next[0] = next[0] + Poly::constant(F, f.coeff(i));
        acc = std::move(next);
    }
    return acc;
}

/// The Taylor map (coefficient-wise D_j), cross-checked against the
/// substitution T -> T + X; the two routes must agree identically.
inline TaylorSeries taylor_map(const Poly& f, int M) {
    TaylorSeries viaD(M + 1, Poly::zero(f.field()));
    for (int j = 0; j <= M; ++j) viaD[j] = hyperdiff_poly(j, f);
    TaylorSeries viaSub = taylor_by_substitution(f, M);
    for (int j = 0; j <= M; ++j)
        if (viaD[j] != viaSub[j])
            throw MathError("taylor_map: coefficient and substitution routes disagree");
    return viaD;
}

/// D_j on a truncated element of a char-p setting, with respect to the
/// uniformizer u and its Teichmuller coefficient field:
/// D_j(sum omega_m u^m) = sum binom(m, j) omega_m u^(m-j).
/// For Laurent elements the Teichmuller digits are the stored digits and the
/// rule is applied term by term, negative exponents included.  Output
/// precision is precN - j.
inline LocalElem hyperdiff_local(int j, const LocalElem& x) {
    const LocalField* f = x.field();
    if (f->kind() == FieldKind::Padic)
        throw InputError("hyperdiff_local: hyperdifferential operators act in characteristic p");
    if (j == 0) return x;
    if (x.is_exact() && x.is_zero_at_precision()) return x;
    int prec = x.precN();
    if (!x.is_exact() && prec <= j) throw MathError("hyperdiff_local: insufficient precision");
    int outprec = prec_add(prec, -j);
    if (x.is_zero_at_precision()) return LocalElem::zero_at(f, outprec);
    int val = x.valuation();
    int p = f->characteristic();
    if (f->kind() == FieldKind::Laurent) {
        std::vector<int> out;
        const auto& w = x.window_digits();
        const FqField* R = f->residue();
        for (size_t i = 0; i < w.size(); ++i) {
            long long m = val + static_cast<long long>(i);
            out.push_back(R->mul(w[i], R->from_int(binom_mod_p(m, j, p)).index()));
        }
        return LocalElem::from_digits(f, val - j, std::move(out), outprec);
    }
    // Completion: expand in Teichmuller digits and apply the rule term-wise.
    LocalElem unit = x.shift(-val);
    int count = unit.precN();
    if (count >= kExactPrec) {
        // An exact element is still only used through finitely many digits;
        // cap at enough digits to determine the result at outprec.
        count = std::max(outprec + j + 1, j + 1);
        unit = unit.truncate(count);
    }
    auto omegas = teichmuller_digits(unit, count, std::max(outprec, 1));
    LocalElem acc = LocalElem::zero_at(f, outprec);
    for (int i = 0; i < count; ++i) {
        long long m = val + i;
        int b = binom_mod_p(m, j, p);
        if (b == 0 || omegas[i].is_zero_at_precision()) continue;
        acc = acc + LocalElem::from_integer(f, b) * omegas[i].shift(static_cast<int>(m) - j);
    }
    return acc.truncate(outprec);
}

/// Multi-factor Leibniz rule check:
/// D_j(f_1...f_m) = sum over k_1+...+k_m = j of prod D_(k_l)(f_l), exactly.
inline bool leibniz_check(int j, const std::vector<Poly>& factors) {
    if (factors.empty()) throw InputError("leibniz_check: no factors");
    const FqField* F = factors[0].field();
    Poly prod = Poly::one(F);
    for (auto& f : factors) prod = prod * f;
    Poly lhs = hyperdiff_poly(j, prod);
    // enumerate compositions of j into |factors| nonnegative parts
    Poly rhs = Poly::zero(F);
    std::vector<int> ks(factors.size(), 0);
    auto rec = [&](auto&& self, size_t idx, int remaining) -> void {
        if (idx + 1 == ks.size()) {
            ks[idx] = remaining;
            Poly term = Poly::one(F);
            for (size_t l = 0; l < factors.size(); ++l)
                term = term * hyperdiff_poly(ks[l], factors[l]);
            rhs = rhs + term;
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            ks[idx] = k;
            self(self, idx + 1, remaining - k);
        }
    };
    rec(rec, 0, j);
    return lhs == rhs;
}

/// Power congruence: D_j(f^n g) = 0 mod f^(n-j), n >= j.
inline bool congruence_power_check(int j, int n, const Poly& f, const Poly& g) {
    if (n < j) throw InputError("congruence_power_check: requires n >= j");
    Poly val = hyperdiff_poly(j, f.pow(n) * g);
    return (val % f.pow(n - j)).is_zero();
}

/// Derivative congruence: D_j(f^j) = (f')^j mod f.
inline bool congruence_derivative_check(int j, const Poly& f) {
    Poly lhs = hyperdiff_poly(j, f.pow(j));
    Poly rhs = f.derivative().pow(j);
    return ((lhs - rhs) % f).is_zero();
}

/// Seeds D_{j,T} on F_q[[T]], digit base q.  The reductions are the dual
/// basis to 1, T, ..., T^(n-1).
inline BasisFamily local_hyperdiff_family(const FqField* coeff_field) {
    BasisFamily fam;
    fam.field = LocalField::laurent(coeff_field);
    fam.digit_base = coeff_field->q();
    fam.subdeg = 1;
    fam.label = "hyperdiff";
    fam.default_mode = CertMode::Linear;
    fam.seed = [](int j, const LocalElem& rep, int) {
        return LocalElem::from_poly(rep.field(), hyperdiff_poly(j, rep.to_poly()));
    };
    fam.loss = [](int j) { return j; };
    return fam;
}

inline BasisFamily local_hyperdiff_family(int q) {
    int p = q, f = 1;
    for (int pp : {2, 3, 5, 7, 11, 13})
        if (q % pp == 0) {
            p = pp;
            f = 0;
            for (int t = q; t > 1; t /= pp) ++f;
            break;
        }
    return local_hyperdiff_family(FqField::get(p, f));
}

/// Seeds D_{j,T} (the global operators of F_r[T]) on the completion at pi,
/// extended by r^d-digit expansions: digit base is the full residue size.
/// Certification finds the matrix (Dbar_{j,T}(pi^k)) triangular with diagonal
/// (pi')^j mod pi, nonzero by separability.
inline BasisFamily completion_hyperdiff_family(const Poly& pi) {
    BasisFamily fam;
    fam.field = LocalField::completion_at_pi(pi);
    fam.digit_base = fam.field->residue_q();
    fam.subdeg = 1;
    fam.label = "hyperdiff-at-pi";
    fam.default_mode = CertMode::Linear;
    fam.seed = [](int j, const LocalElem& rep, int) {
        return LocalElem::from_poly(rep.field(),
                                    hyperdiff_poly(j, rep.to_poly()));
    };
    fam.loss = [](int j) { return j; };
    return fam;
}

/// prod over compositions: P(i, j) = sum over k_1+...+k_i = j, k_l >= 1, of
/// D_{k_1,T}(pi) ... D_{k_i,T}(pi), as an exact element of the completion.
inline LocalElem chain_rule_weight(int i, int j, const LocalField* comp) {
    const Poly& pi = comp->pi();
    std::vector<LocalElem> dpi(j + 1, LocalElem::zero(comp));
    for (int k = 1; k <= j; ++k)
        dpi[k] = LocalElem::from_poly(comp, hyperdiff_poly(k, pi));
    LocalElem acc = LocalElem::zero(comp);
    std::vector<int> ks(i, 1);
    auto rec = [&](auto&& self, int idx, int remaining) -> void {
        if (idx + 1 == i) {
            if (remaining < 1) return;
            ks[idx] = remaining;
            LocalElem term = LocalElem::one(comp);
            for (int l = 0; l < i; ++l) term = term * dpi[ks[l]];
            acc = acc + term;
            return;
        }
        for (int k = 1; k <= remaining - (i - idx - 1); ++k) {
            ks[idx] = k;
            self(self, idx + 1, remaining - k);
        }
    };
    if (i == 0) return j == 0 ? LocalElem::one(comp) : LocalElem::zero(comp);
    rec(rec, 0, j);
    return acc;
}

/// Teichmuller's chain rule for the global operators on the completion:
///   D_{j,T}(f(pi)) = sum_{i=1..j} D_{i,pi}(f(pi)) * P(i, j),
/// cross-checked against direct evaluation of D_{j,T} on a polynomial
/// representative of f(pi).  Both values are valid modulo pi^(precN - j).
struct ChainRuleReport {
    LocalElem via_formula;
    LocalElem direct;
    int valid_prec = 0;
    bool ok = false;
};

inline ChainRuleReport chain_rule(int j, const LocalElem& fpi) {
    const LocalField* comp = fpi.field();
    if (comp->kind() != FieldKind::CompletionAtPi)
        throw InputError("chain_rule: expects an element of a completion at pi");
    if (fpi.is_exact()) throw InputError("chain_rule: give f(pi) at finite precision");
    if (fpi.precN() <= j) throw MathError("chain_rule: insufficient precision");
    if (!fpi.is_zero_at_precision() && fpi.valuation() < 0)
        throw MathError("chain_rule: f(pi) must be integral");
    ChainRuleReport rep;
    rep.valid_prec = fpi.precN() - j;
    LocalElem acc = LocalElem::zero_at(comp, rep.valid_prec);
    for (int i = 1; i <= j; ++i)
        acc = acc + hyperdiff_local(i, fpi) * chain_rule_weight(i, j, comp);
    rep.via_formula = acc.truncate(rep.valid_prec);
    Poly g = fpi.to_poly();  // representative of the class mod pi^precN
    rep.direct = LocalElem::from_poly(comp, hyperdiff_poly(j, g)).truncate(rep.valid_prec);
    rep.ok = rep.via_formula.congruent_mod(rep.direct, rep.valid_prec);
    return rep;
}

}  // namespace digitbasis
