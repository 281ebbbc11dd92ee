#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "fq.hpp"

namespace digitbasis {

/// Dense polynomial over a finite field, index = degree of the T-power.
/// Normalized: no trailing zero coefficients; the zero polynomial has an
/// empty coefficient vector and degree -1.
class Poly {
public:
    Poly() : fld_(nullptr) {}
    explicit Poly(const FqField* fld) : fld_(fld) {}
    Poly(const FqField* fld, std::vector<FqElem> coeffs) : fld_(fld), c_(std::move(coeffs)) {
        normalize();
    }
    /// From integer coefficient indices (index = degree).
    static Poly from_indices(const FqField* fld, const std::vector<int>& idx) {
        std::vector<FqElem> c;
        c.reserve(idx.size());
        for (int v : idx) c.push_back(fld->elem(v));
        return Poly(fld, std::move(c));
    }
    static Poly zero(const FqField* fld) { return Poly(fld); }
    static Poly constant(const FqField* fld, FqElem a) { return Poly(fld, {a}); }
    static Poly one(const FqField* fld) { return constant(fld, fld->one()); }
    /// c * T^k
    static Poly monomial(const FqField* fld, FqElem cc, int k) {
        std::vector<FqElem> v(k + 1, fld->zero());
        v[k] = cc;
        return Poly(fld, std::move(v));
    }
    static Poly t_power(const FqField* fld, int k) { return monomial(fld, fld->one(), k); }

    const FqField* field() const { return fld_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_monic() const { return !c_.empty() && c_.back() == fld_->one(); }
    FqElem coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : fld_->zero();
    }
    const std::vector<FqElem>& coeffs() const { return c_; }
    FqElem leading() const {
        if (c_.empty()) throw MathError("Poly: leading coefficient of zero");
        return c_.back();
    }
    std::vector<int> coeff_indices() const {
        std::vector<int> out;
        out.reserve(c_.size());
        for (auto& e : c_) out.push_back(e.index());
        return out;
    }

    Poly operator+(const Poly& o) const {
        check(o);
        std::vector<FqElem> r(std::max(c_.size(), o.c_.size()), fld_->zero());
        for (size_t i = 0; i < r.size(); ++i) {
            FqElem a = i < c_.size() ? c_[i] : fld_->zero();
            FqElem b = i < o.c_.size() ? o.c_[i] : fld_->zero();
            r[i] = a + b;
        }
        return Poly(fld_, std::move(r));
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator-() const {
        std::vector<FqElem> r = c_;
        for (auto& e : r) e = -e;
        return Poly(fld_, std::move(r));
    }
    Poly operator*(const Poly& o) const {
        check(o);
        if (is_zero() || o.is_zero()) return Poly(fld_);
        std::vector<FqElem> r(c_.size() + o.c_.size() - 1, fld_->zero());
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        }
        return Poly(fld_, std::move(r));
    }
    Poly operator*(FqElem s) const {
        std::vector<FqElem> r = c_;
        for (auto& e : r) e = e * s;
        return Poly(fld_, std::move(r));
    }

    /// Quotient and remainder; divisor must be nonzero.
    std::pair<Poly, Poly> divrem(const Poly& d) const {
        check(d);
        if (d.is_zero()) throw MathError("Poly: division by zero polynomial");
        Poly r = *this;
        int dd = d.degree();
        FqElem lead_inv = d.leading().inverse();
        std::vector<FqElem> q(std::max(0, degree() - dd + 1), fld_->zero());
        while (r.degree() >= dd) {
            int k = r.degree() - dd;
            FqElem cq = r.leading() * lead_inv;
            q[k] = cq;
            // r -= cq * T^k * d
            std::vector<FqElem> rc = r.c_;
            for (int i = 0; i <= dd; ++i) rc[k + i] -= cq * d.c_[i];
            r = Poly(fld_, std::move(rc));
        }
        return {Poly(fld_, std::move(q)), r};
    }
    /// Exact division; throws MathError if the remainder is nonzero.
    Poly operator/(const Poly& d) const {
        auto [q, r] = divrem(d);
        if (!r.is_zero()) throw MathError("Poly: non-exact division");
        return q;
    }
    Poly operator%(const Poly& d) const { return divrem(d).second; }

    Poly pow(long long e) const {
        Poly acc = one(fld_), base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    FqElem eval(FqElem x) const {
        FqElem acc = fld_->zero();
        for (int i = degree(); i >= 0; --i) acc = acc * x + c_[i];
        return acc;
    }
    Poly eval_poly(const Poly& x) const {  // composition this(x)
        Poly acc = Poly::zero(fld_);
        for (int i = degree(); i >= 0; --i) acc = acc * x + constant(fld_, c_[i]);
        return acc;
    }

    Poly derivative() const {
        if (degree() < 1) return Poly(fld_);
        std::vector<FqElem> r(degree(), fld_->zero());
        for (int i = 1; i <= degree(); ++i) r[i - 1] = c_[i] * fld_->from_int(i);
        return Poly(fld_, std::move(r));
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return *this * leading().inverse();
    }

    bool operator==(const Poly& o) const { return fld_ == o.fld_ && c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    /// Irreducibility by trial division over F_q (monic divisor candidates of
    /// degree 1..deg/2).  Degree 0 and the zero polynomial are not irreducible.
    bool is_irreducible() const {
        int n = degree();
        if (n < 1) return false;
        if (n == 1) return true;
        int q = fld_->q();
        for (int dd = 1; 2 * dd <= n; ++dd) {
            long long count = 1;
            for (int i = 0; i < dd; ++i) count *= q;
            for (long long idx = 0; idx < count; ++idx) {
                std::vector<FqElem> div(dd + 1, fld_->zero());
                long long t = idx;
                for (int i = 0; i < dd; ++i, t /= q) div[i] = fld_->elem(static_cast<int>(t % q));
                div[dd] = fld_->one();
                if ((*this % Poly(fld_, std::move(div))).is_zero()) return false;
            }
        }
        return true;
    }

    std::string to_string(const std::string& var = "T") const;

private:
    void check(const Poly& o) const {
        if (fld_ != o.fld_) throw InputError("Poly: mixed coefficient fields");
    }
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    const FqField* fld_;
    std::vector<FqElem> c_;
};

inline Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = b;
        b = r;
    }
    return a.is_zero() ? a : a.monic();
}

inline std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = 0; i <= degree(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!out.empty()) out += " + ";
        if (i == 0 || c_[i].index() != 1) out += std::to_string(c_[i].index());
        if (i > 0) {
            if (c_[i].index() != 1) out += "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

}  // namespace digitbasis
