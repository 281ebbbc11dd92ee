#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "basis.hpp"
#include "binomial.hpp"
#include "local.hpp"

namespace digitbasis {

/// An F_r-linear q-polynomial: sum of coeff[k] * x^(r^k) with coefficients in
/// F_r[T].  This is the shape of the Carlitz polynomials e_j(x).
struct QPolynomial {
    const FqField* base = nullptr;
    std::vector<Poly> coeff;  // index k multiplies x^(r^k)

    Poly eval(const Poly& h) const {
        Poly acc = Poly::zero(base);
        Poly hp = h;
        for (size_t k = 0; k < coeff.size(); ++k) {
            if (!coeff[k].is_zero()) acc = acc + coeff[k] * hp;
            hp = hp.pow(base->q());
        }
        return acc;
    }
    /// Frobenius twist: (sum a_k x^(r^k))^r = sum a_k^r x^(r^(k+1)).
    QPolynomial frobenius_power() const {
        QPolynomial out;
        out.base = base;
        out.coeff.resize(coeff.size() + 1, Poly::zero(base));
        for (size_t k = 0; k < coeff.size(); ++k) out.coeff[k + 1] = coeff[k].pow(base->q());
        return out;
    }
    bool operator==(const QPolynomial& o) const {
        size_t n = std::max(coeff.size(), o.coeff.size());
        for (size_t k = 0; k < n; ++k) {
            Poly a = k < coeff.size() ? coeff[k] : Poly::zero(base);
            Poly b = k < o.coeff.size() ? o.coeff[k] : Poly::zero(base);
            if (a != b) return false;
        }
        return base == o.base;
    }
};

/// Carlitz objects over F_r[T]: the linear polynomials e_j, the monic-product
/// factorials D_j, the integral divided polynomials E_j = e_j / D_j, their
/// digit products, and the two basis-family instantiations.
///
/// Production values come from the recursions
///   D_j = (T^(r^j) - T) * D_(j-1)^r,     e_(j+1) = e_j^r - D_j^(r-1) * e_j,
/// which tests validate against the defining products (carlitz_e_product,
/// carlitz_D_product) for small j.  Convention at j = 0: e_0(x) = x, D_0 = 1,
/// so E_0(x) = x and script_E(r^j) = E_j throughout.
class CarlitzContext {
public:
    explicit CarlitzContext(const FqField* base) : base_(base) {}

    const FqField* base() const { return base_; }
    int r() const { return base_->q(); }

    QPolynomial e(int j) const {
        std::lock_guard<std::mutex> lock(mu_);
        while (static_cast<int>(e_.size()) <= j) {
            int k = static_cast<int>(e_.size());
            if (k == 0) {
                QPolynomial e0;
                e0.base = base_;
                e0.coeff = {Poly::one(base_)};
                e_.push_back(e0);
            } else {
                const QPolynomial& prev = e_[k - 1];
                Poly dk = D_locked(k - 1);
                QPolynomial next = prev.frobenius_power();
                Poly factor = dk.pow(r() - 1);
                for (size_t i = 0; i < prev.coeff.size(); ++i)
                    next.coeff[i] = next.coeff[i] - factor * prev.coeff[i];
                e_.push_back(next);
            }
        }
        return e_[j];
    }

    Poly D(int j) const {
        std::lock_guard<std::mutex> lock(mu_);
        return D_locked(j);
    }

    /// Carlitz factorial Pi(i) = prod D_j^(c_j) over the base-r digits of i.
    Poly factorial(long long i) const {
        Poly out = Poly::one(base_);
        auto digits = base_digits(i, r());
        for (size_t j = 0; j < digits.size(); ++j)
            if (digits[j] != 0) out = out * D(static_cast<int>(j)).pow(digits[j]);
        return out;
    }

    /// E_j(h) = e_j(h) / D_j; integral on F_r[T] (the division is exact).
    Poly E_at(int j, const Poly& h) const {
        Poly num = e(j).eval(h);
        if (j == 0) return num;
        return num / D(j);
    }

    /// script E_i(h) = prod E_j(h)^(c_j) over the base-r digits of i.
    Poly script_E_at(long long i, const Poly& h) const {
        Poly out = Poly::one(base_);
        auto digits = base_digits(i, r());
        for (size_t j = 0; j < digits.size(); ++j)
            if (digits[j] != 0) out = out * E_at(static_cast<int>(j), h).pow(digits[j]);
        return out;
    }

    /// Defining product e_j(x) = prod over all h of degree < j of (x - h);
    /// the independent route the recursion is checked against.
    QPolynomial e_product(int j) const {
        // Dense polynomial in x with Poly coefficients.
        std::vector<Poly> dense = {Poly::zero(base_), Poly::one(base_)};  // x
        long long count = 1;
        for (int k = 0; k < j; ++k) count *= r();
        for (long long idx = 1; idx < count; ++idx) {  // h = 0 is the initial factor x
            Poly h = poly_from_counter(idx);
            // dense *= (x - h)
            std::vector<Poly> next(dense.size() + 1, Poly::zero(base_));
            for (size_t i = 0; i < dense.size(); ++i) {
                next[i + 1] = next[i + 1] + dense[i];
                next[i] = next[i] - dense[i] * h;
            }
            dense = std::move(next);
        }
        QPolynomial out;
        out.base = base_;
        for (size_t deg = 0; deg < dense.size(); ++deg) {
            if (dense[deg].is_zero()) continue;
            long long rp = 1;
            int k = 0;
            while (rp < static_cast<long long>(deg)) {
                rp *= r();
                ++k;
            }
            if (rp != static_cast<long long>(deg))
                throw MathError("e_product: non-q-polynomial term (not F_r-linear?)");
            if (static_cast<int>(out.coeff.size()) <= k)
                out.coeff.resize(k + 1, Poly::zero(base_));
            out.coeff[k] = dense[deg];
        }
        return out;
    }

    /// Defining product D_j = prod of all monic h of degree j.
    Poly D_product(int j) const {
        Poly out = Poly::one(base_);
        long long count = 1;
        for (int k = 0; k < j; ++k) count *= r();
        for (long long idx = 0; idx < count; ++idx)
            out = out * (poly_from_counter(idx) + Poly::t_power(base_, j));
        return out;
    }

private:
    Poly D_locked(int j) const {
        while (static_cast<int>(Dcache_.size()) <= j) {
            int k = static_cast<int>(Dcache_.size());
            if (k == 0) {
                Dcache_.push_back(Poly::one(base_));
            } else {
                long long rk = 1;
                for (int i = 0; i < k; ++i) rk *= r();
                Poly lead = Poly::t_power(base_, static_cast<int>(rk)) - Poly::t_power(base_, 1);
                Dcache_.push_back(lead * Dcache_[k - 1].pow(r()));
            }
        }
        return Dcache_[j];
    }
    Poly poly_from_counter(long long idx) const {
        std::vector<FqElem> c;
        while (idx > 0) {
            c.push_back(base_->elem(static_cast<int>(idx % r())));
            idx /= r();
        }
        return Poly(base_, std::move(c));
    }

    const FqField* base_;
    mutable std::mutex mu_;
    mutable std::vector<QPolynomial> e_;
    mutable std::vector<Poly> Dcache_;
};

inline std::shared_ptr<const CarlitzContext> carlitz_context(const FqField* base) {
    static std::mutex mu;
    static std::map<const FqField*, std::shared_ptr<const CarlitzContext>>* cache =
        new std::map<const FqField*, std::shared_ptr<const CarlitzContext>>();
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache->find(base);
    if (it == cache->end())
        it = cache->emplace(base, std::make_shared<const CarlitzContext>(base)).first;
    return it->second;
}

/// Seeds E_{j,T,q} on F_q[[T]], digit base q.  Certification at level n finds
/// the matrix (Ebar_j(T^k)) unit triangular.
inline BasisFamily local_carlitz_family(const FqField* coeff_field) {
    BasisFamily fam;
    fam.field = LocalField::laurent(coeff_field);
    fam.digit_base = coeff_field->q();
    fam.subdeg = 1;
    fam.label = "carlitz";
    fam.default_mode = CertMode::Linear;
    auto ctx = carlitz_context(coeff_field);
    fam.seed = [ctx](int j, const LocalElem& rep, int) {
        return LocalElem::from_poly(rep.field(), ctx->E_at(j, rep.to_poly()));
    };
    fam.loss = [](int j) { return j; };
    return fam;
}

inline BasisFamily local_carlitz_family(int q) {
    int p = q, f = 1;
    for (int pp : {2, 3, 5, 7, 11, 13})
        if (q % pp == 0) {
            p = pp;
            f = 0;
            for (int t = q; t > 1; t /= pp) ++f;
            break;
        }
    return local_carlitz_family(FqField::get(p, f));
}

/// Seeds E_{j,T,r} on the completion at pi, digit base r; certified in
/// sublinear mode with the kernel condition realized by point separation.
inline BasisFamily global_carlitz_family(const Poly& pi) {
    BasisFamily fam;
    fam.field = LocalField::completion_at_pi(pi);
    fam.digit_base = pi.field()->q();
    fam.subdeg = pi.degree();
    fam.label = "carlitz-at-pi";
    fam.default_mode = CertMode::Sublinear;
    auto ctx = carlitz_context(pi.field());
    fam.seed = [ctx](int j, const LocalElem& rep, int) {
        return LocalElem::from_poly(rep.field(), ctx->E_at(j, rep.to_poly()));
    };
    int d = pi.degree();
    fam.loss = [d](int j) { return j / d; };
    return fam;
}

/// Check the Carlitz addition formula
///   script_E_i(x+y) = sum_{j+k=i} binom(i,j) script_E_j(x) script_E_k(y)
/// exactly on given polynomial inputs (binomials reduced mod p).
struct AdditionFormulaReport {
    bool ok = true;
    Poly lhs, rhs;
    long long index = -1;
};

inline AdditionFormulaReport addition_formula_check(const CarlitzContext& ctx, long long i,
                                                    const Poly& x, const Poly& y) {
    AdditionFormulaReport rep;
    rep.index = i;
    int p = ctx.base()->p();
    rep.lhs = ctx.script_E_at(i, x + y);
    rep.rhs = Poly::zero(ctx.base());
    for (long long j = 0; j <= i; ++j) {
        int b = binom_mod_p(i, j, p);
        if (b == 0) continue;
        rep.rhs = rep.rhs + ctx.script_E_at(j, x) * ctx.script_E_at(i - j, y) * ctx.base()->from_int(b);
    }
    rep.ok = rep.lhs == rep.rhs;
    return rep;
}

}  // namespace digitbasis
