#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "basis.hpp"
#include "binomial.hpp"
#include "local.hpp"

namespace digitbasis {

/// Truncated one-variable power series with K-coefficients (index = degree).
struct PowerSeries {
    const LocalField* field = nullptr;
    std::vector<LocalElem> c;

    static PowerSeries zero(const LocalField* f, int M) {
        PowerSeries s;
        s.field = f;
        s.c.assign(M + 1, LocalElem::zero(f));
        return s;
    }
    int truncation() const { return static_cast<int>(c.size()) - 1; }
    LocalElem coeff(int i) const {
        return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : LocalElem::zero(field);
    }
    PowerSeries resized(int M) const {
        PowerSeries s = zero(field, M);
        for (int i = 0; i <= M && i < static_cast<int>(c.size()); ++i) s.c[i] = c[i];
        return s;
    }
    PowerSeries operator+(const PowerSeries& o) const {
        PowerSeries s = zero(field, std::min(truncation(), o.truncation()));
        for (int i = 0; i <= s.truncation(); ++i) s.c[i] = coeff(i) + o.coeff(i);
        return s;
    }
    PowerSeries operator-(const PowerSeries& o) const {
        PowerSeries s = zero(field, std::min(truncation(), o.truncation()));
        for (int i = 0; i <= s.truncation(); ++i) s.c[i] = coeff(i) - o.coeff(i);
        return s;
    }
    PowerSeries operator*(const PowerSeries& o) const {
        PowerSeries s = zero(field, std::min(truncation(), o.truncation()));
        for (int i = 0; i <= truncation() && i <= s.truncation(); ++i) {
            if (c[i].is_zero_at_precision() && c[i].is_exact()) continue;
            for (int j = 0; j <= o.truncation() && i + j <= s.truncation(); ++j)
                s.c[i + j] = s.c[i + j] + c[i] * o.c[j];
        }
        return s;
    }
    PowerSeries operator*(const LocalElem& a) const {
        PowerSeries s = *this;
        for (auto& x : s.c) x = x * a;
        return s;
    }
    /// this(g(X)) mod X^(M+1); requires g(0) = 0.
    PowerSeries compose(const PowerSeries& g) const {
        if (!g.coeff(0).is_zero_at_precision())
            throw InputError("PowerSeries::compose: inner constant term must vanish");
        int M = std::min(truncation(), g.truncation());
        PowerSeries acc = zero(field, M);
        for (int k = truncation(); k >= 0; --k) {
            acc = acc * g.resized(M);
            acc.c[0] = acc.c[0] + c[k];
        }
        return acc;
    }
    PowerSeries truncate_coeffs(int N) const {
        PowerSeries s = *this;
        for (auto& x : s.c) x = x.truncate(N);
        return s;
    }
};

/// Lubin-Tate formal group over O (p-adic or Laurent base) attached to a
/// Frobenius series [pi](X): validated to satisfy [pi](X) = pi X mod deg 2
/// and [pi](X) = X^q mod pi up to the stored truncation.
///
/// Endomorphisms [a](X) = sum C_{n,F}(a) X^n are built coefficient by
/// coefficient from [a](X) = aX mod X^2 and commutation with [pi]; the pivot
/// pi^m - pi has valuation exactly 1, so each degree costs one digit of
/// working precision.
class LubinTateGroup {
public:
    LubinTateGroup(const LocalField* base, std::vector<LocalElem> frobenius, int truncation)
        : base_(base), M_(truncation) {
        if (base->kind() == FieldKind::CompletionAtPi)
            throw InputError("LubinTateGroup: p-adic or Laurent base expected");
        q_ = base->residue_q();
        frob_ = PowerSeries::zero(base, M_);
        for (size_t i = 0; i < frobenius.size() && i <= static_cast<size_t>(M_); ++i)
            frob_.c[i] = frobenius[i];
        validate_frobenius();
        pi_ = frob_.coeff(1);
    }

    /// The default Frobenius series X^q + pi X.
    static std::shared_ptr<LubinTateGroup> standard(const LocalField* base, int truncation) {
        std::vector<LocalElem> f(std::max(2, base->residue_q() + 1), LocalElem::zero(base));
        f[1] = LocalElem::single_digit(base, 1, 1);
        if (base->residue_q() <= truncation)
            f[base->residue_q()] = LocalElem::one(base);
        return std::make_shared<LubinTateGroup>(base, std::move(f), truncation);
    }

    const LocalField* base() const { return base_; }
    int q() const { return q_; }
    int truncation() const { return M_; }
    const PowerSeries& frobenius() const { return frob_; }
    const LocalElem& uniformizer() const { return pi_; }

    /// [a](X) mod X^(M+1), coefficients delivered modulo u^target.
    PowerSeries endomorphism(const LocalElem& a, int M, int target) const {
        if (M > M_) throw InputError("LubinTateGroup: truncation degree too small");
        int W = target + M + 2;  // one digit of slack per solved degree
        LocalElem aw = a.truncate(W);
        PowerSeries u = PowerSeries::zero(base_, M);
        if (M >= 1) u.c[1] = aw;
        PowerSeries phi = frob_.resized(std::max(M, q_)).truncate_coeffs(W);
        for (int m = 2; m <= M; ++m) {
            // defect at degree m of phi([a]) - [a](phi)
            PowerSeries lhs = phi.resized(m).compose(u.resized(m));
            PowerSeries rhs = u.resized(m).compose(phi.resized(m));
            LocalElem defect = (lhs.coeff(m) - rhs.coeff(m));
            if (defect.is_zero_at_precision()) {
                u.c[m] = LocalElem::zero_at(base_, defect.precN() - 1);
                continue;
            }
            if (defect.valuation() < 1)
                throw MathError("LubinTateGroup: defect not divisible by pi "
                                "(invalid Frobenius series?)");
            LocalElem pivot = (pi_.pow(m) - pi_).truncate(defect.precN());
            u.c[m] = defect / pivot;
        }
        return u.truncate_coeffs(target);
    }

    /// Coefficient function C_{n,F}(a) modulo u^target.
    LocalElem coefficient(int n, const LocalElem& a, int target) const {
        std::lock_guard<std::mutex> lock(mu_);
        // write-once cache keyed by (digits of a, n, target)
        CacheKey key{a.valuation_lower_bound(), a.precN(), a.window_digits(), n, target};
        auto it = cache_.find(key);
        if (it == cache_.end())
            it = cache_.emplace(key, endomorphism(a, n, target).coeff(n)).first;
        return it->second;
    }

private:
    void validate_frobenius() const {
        if (!frob_.coeff(0).is_zero_at_precision())
            throw InputError("Frobenius series: constant term must vanish");
        LocalElem c1 = frob_.coeff(1);
        if (c1.is_zero_at_precision() || c1.valuation() != 1)
            throw InputError("Frobenius series: linear coefficient must be a uniformizer");
        // [pi](X) = X^q mod pi, coefficient by coefficient.
        for (int i = 0; i <= M_; ++i) {
            LocalElem c = frob_.coeff(i);
            if (i == q_) c = c - LocalElem::one(base_);
            if (!c.is_zero_at_precision() && c.valuation() < 1)
                throw InputError("Frobenius series: must reduce to X^q mod pi");
        }
    }

    struct CacheKey {
        int val, prec;
        std::vector<int> digits;
        int n, target;
        bool operator<(const CacheKey& o) const {
            return std::tie(val, prec, digits, n, target) <
                   std::tie(o.val, o.prec, o.digits, o.n, o.target);
        }
    };

    const LocalField* base_;
    int M_, q_;
    PowerSeries frob_;
    LocalElem pi_;
    mutable std::mutex mu_;
    mutable std::map<CacheKey, LocalElem> cache_;
};

/// Bivariate truncated series (total degree <= M), used for the group law.
struct BivariateSeries {
    const LocalField* field = nullptr;
    int M = 0;
    std::vector<LocalElem> a;  // (i, j) with i + j <= M, flattened i*(M+1)+j

    static BivariateSeries zero(const LocalField* f, int M) {
        BivariateSeries s;
        s.field = f;
        s.M = M;
        s.a.assign(static_cast<size_t>(M + 1) * (M + 1), LocalElem::zero(f));
        return s;
    }
    LocalElem& at(int i, int j) { return a[static_cast<size_t>(i) * (M + 1) + j]; }
    const LocalElem& at(int i, int j) const { return a[static_cast<size_t>(i) * (M + 1) + j]; }
    BivariateSeries operator+(const BivariateSeries& o) const {
        BivariateSeries s = zero(field, M);
        for (size_t k = 0; k < a.size(); ++k) s.a[k] = a[k] + o.a[k];
        return s;
    }
    BivariateSeries operator-(const BivariateSeries& o) const {
        BivariateSeries s = zero(field, M);
        for (size_t k = 0; k < a.size(); ++k) s.a[k] = a[k] - o.a[k];
        return s;
    }
    BivariateSeries operator*(const BivariateSeries& o) const {
        BivariateSeries s = zero(field, M);
        for (int i1 = 0; i1 <= M; ++i1)
            for (int j1 = 0; i1 + j1 <= M; ++j1) {
                const LocalElem& x = at(i1, j1);
                if (x.is_zero_at_precision() && x.is_exact()) continue;
                for (int i2 = 0; i1 + j1 + i2 <= M; ++i2)
                    for (int j2 = 0; i1 + j1 + i2 + j2 <= M; ++j2)
                        s.at(i1 + i2, j1 + j2) = s.at(i1 + i2, j1 + j2) + x * o.at(i2, j2);
            }
        return s;
    }
    /// Substitute univariate series for both variables: this(u(X), v(Y)).
    BivariateSeries substitute(const PowerSeries& u, const PowerSeries& v) const {
        BivariateSeries s = zero(field, M);
        // power tables
        std::vector<BivariateSeries> up(M + 1, zero(field, M)), vp(M + 1, zero(field, M));
        up[0].at(0, 0) = LocalElem::one(field);
        vp[0].at(0, 0) = LocalElem::one(field);
        BivariateSeries ub = zero(field, M), vb = zero(field, M);
        for (int i = 0; i <= M; ++i) {
            ub.at(i, 0) = u.coeff(i);
            vb.at(0, i) = v.coeff(i);
        }
        for (int k = 1; k <= M; ++k) {
            up[k] = up[k - 1] * ub;
            vp[k] = vp[k - 1] * vb;
        }
        for (int i = 0; i <= M; ++i)
            for (int j = 0; i + j <= M; ++j) {
                const LocalElem& x = at(i, j);
                if (x.is_zero_at_precision() && x.is_exact()) continue;
                BivariateSeries term = up[i] * vp[j];
                for (size_t k = 0; k < s.a.size(); ++k) s.a[k] = s.a[k] + term.a[k] * x;
            }
        return s;
    }
    BivariateSeries truncate_coeffs(int N) const {
        BivariateSeries s = *this;
        for (auto& x : s.a) x = x.truncate(N);
        return s;
    }
    /// Univariate composition phi(this) mod total degree M.
    BivariateSeries compose_outer(const PowerSeries& phi) const {
        BivariateSeries acc = zero(field, M);
        for (int k = phi.truncation(); k >= 0; --k) {
            acc = acc * (*this);
            acc.at(0, 0) = acc.at(0, 0) + phi.coeff(k);
        }
        return acc;
    }
};

/// The formal group law F(X,Y) = X + Y + ... solved from commutation with
/// the Frobenius series, mod total degree M, coefficients mod u^target.
inline BivariateSeries lubin_tate_group_law(const LubinTateGroup& G, int M, int target) {
    const LocalField* f = G.base();
    int W = target + M + 2;
    BivariateSeries F = BivariateSeries::zero(f, M);
    F.at(1, 0) = LocalElem::one(f).truncate(W);
    F.at(0, 1) = LocalElem::one(f).truncate(W);
    PowerSeries phi = G.frobenius().resized(std::max(M, G.q())).truncate_coeffs(W);
    LocalElem pi = G.uniformizer();
    for (int m = 2; m <= M; ++m) {
        BivariateSeries lhs = F.compose_outer(phi);     // phi(F(X,Y))
        BivariateSeries rhs = F.substitute(phi, phi);   // F(phi(X), phi(Y))
        BivariateSeries defect = lhs - rhs;
        LocalElem pivot = (pi.pow(m) - pi);
        for (int i = 0; i <= m; ++i) {
            int j = m - i;
            LocalElem d = defect.at(i, j);
            if (d.is_zero_at_precision()) {
                F.at(i, j) = F.at(i, j) + LocalElem::zero_at(f, d.precN() - 1);
                continue;
            }
            if (d.valuation() < 1)
                throw MathError("group law: defect not divisible by pi");
            F.at(i, j) = F.at(i, j) + d / pivot.truncate(d.precN());
        }
    }
    return F.truncate_coeffs(target);
}

/// Wiles' logarithm at a finite stage: [pi^k](X) / pi^k mod X^(M+1).  The
/// limit over k is the normalized logarithm; callers measure the achieved
/// precision by comparing consecutive stages.
inline PowerSeries wiles_log_stage(const LubinTateGroup& G, int k, int M, int target) {
    int W = target + M + 2 + k;
    PowerSeries phi = G.frobenius().resized(M).truncate_coeffs(W);
    PowerSeries acc = PowerSeries::zero(G.base(), M);
    acc.c[1] = LocalElem::one(G.base()).truncate(W);
    for (int i = 0; i < k; ++i) acc = phi.compose(acc);
    LocalElem pik = G.uniformizer().pow(k).truncate(W);
    for (auto& c : acc.c)
        if (!c.is_zero_at_precision())
            c = c / pik;
        else
            c = c.shift(-k);
    return acc;
}

/// Compositional inverse of a series X + O(X^2) (used as exp_F from the
/// logarithm).
inline PowerSeries series_compositional_inverse(const PowerSeries& lambda) {
    const LocalField* f = lambda.field;
    int M = lambda.truncation();
    if (lambda.coeff(1).is_zero_at_precision())
        throw InputError("series_compositional_inverse: needs unit linear term");
    PowerSeries e = PowerSeries::zero(f, M);
    e.c[1] = LocalElem::one(f);
    for (int m = 2; m <= M; ++m) {
        LocalElem defect = lambda.resized(m).compose(e.resized(m)).coeff(m);
        e.c[m] = -(defect / lambda.coeff(1));
    }
    return e;
}

/// Seeds C_{q^j, F}(x), digit base q; the formal-group Lucas congruence C_{q^j}(pi^j a) = a mod pi makes the
/// reduced tuple map bijective, so general-mode certification applies.
inline BasisFamily lubin_tate_family(std::shared_ptr<const LubinTateGroup> G) {
    BasisFamily fam;
    fam.field = G->base();
    fam.digit_base = G->q();
    fam.subdeg = 1;
    fam.label = "lubin-tate";
    fam.default_mode = CertMode::General;
    fam.seed = [G](int j, const LocalElem& rep, int target) {
        long long deg = 1;
        for (int i = 0; i < j; ++i) deg *= G->q();
        if (deg > G->truncation())
            throw InputError("lubin_tate_family: truncation degree too small for this level");
        return G->coefficient(static_cast<int>(deg), rep, target);
    };
    fam.loss = [](int j) { return j; };
    return fam;
}

/// binom(x, m) as a p-adic integer modulo p^target.
inline LocalElem binom_elem(const LocalField* padic_field, long long x, long long m,
                            int target) {
    if (padic_field->kind() != FieldKind::Padic) throw InputError("binom_elem: p-adic only");
    long long v = binom_mod_ppow(x, m, padic_field->padic_p(), target);
    return LocalElem::from_integer(padic_field, v).truncate(target);
}

/// Seeds binom(x, p^j) on Z_p, digit base p (the coll construction).
inline BasisFamily digit_binomial_family(int p) {
    BasisFamily fam;
    const LocalField* f = LocalField::padic(p);
    fam.field = f;
    fam.digit_base = p;
    fam.subdeg = 1;
    fam.label = "digit-binomial";
    fam.default_mode = CertMode::General;
    fam.seed = [f, p](int j, const LocalElem& rep, int target) {
        if (!rep.is_exact())
            throw InputError("digit_binomial_family: seeds take exact representatives");
        long long pj = 1;
        for (int i = 0; i < j; ++i) pj *= p;
        return binom_elem(f, rep.to_exact_integer(), pj, target);
    };
    fam.loss = [p](int j) {
        long long pj = 1;
        for (int i = 0; i < j; ++i) pj *= p;
        return static_cast<int>(vp_factorial(pj, p));
    };
    return fam;
}

/// The digit product {x over m} = prod binom(x, p^j)^(c_j) mod p^target.
inline LocalElem digit_binomial_at(int p, long long x, long long m, int target) {
    auto fam = digit_binomial_family(p);
    return digit_extend(fam, m, LocalElem::from_integer(fam.field, x), target);
}

/// Transition data from the digit-binomial basis to the plain binomial
/// (Mahler) basis: the triangular transition has diagonal entries
/// i! / prod (p^j)!^(c_j), whose p-adic valuations are computed by
/// Legendre's formula.  The reduced Mahler family is certified orthonormal
/// by an independent rank check at the largest power-of-p level within the
/// bound.
struct MahlerTransition {
    std::vector<long long> diagonal_valuations;
    bool diagonal_all_units = true;
    bool mahler_certified = false;
    size_t rank = 0, points = 0;
};

inline MahlerTransition mahler_transition(int p, int bound) {
    MahlerTransition out;
    out.diagonal_valuations.reserve(bound);
    for (int i = 0; i < bound; ++i) {
        long long v = vp_factorial(i, p);
        long long pj = 1;
        for (long long m = i; m > 0; m /= p, pj *= p) v -= (m % p) * vp_factorial(pj, p);
        out.diagonal_valuations.push_back(v);
        if (v != 0) out.diagonal_all_units = false;
    }
    // Rank certificate for the binomial reductions at level L, p^L <= bound.
    int L = 0;
    long long pts = 1;
    while (pts * p <= bound) {
        pts *= p;
        ++L;
    }
    if (L == 0) {
        pts = p;
        L = 1;
    }
    const FqField* Fp = FqField::get(p, 1);
    ResidueMatrix m = ResidueMatrix::make(Fp, pts, pts);
    for (long long i = 0; i < pts; ++i)
        for (long long x = 0; x < pts; ++x)
            m.at(i, x) = Fp->elem(binom_mod_p(x, i, p));
    auto rk = rank_over_residue(m);
    out.rank = rk.rank;
    out.points = pts;
    out.mahler_certified = rk.invertible;
    return out;
}

}  // namespace digitbasis
