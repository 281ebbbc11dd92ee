#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fq.hpp"
#include "poly.hpp"

namespace digitbasis {

enum class FieldKind { Laurent, CompletionAtPi, Padic };

/// Sentinel precision for exactly known elements.
inline constexpr int kExactPrec = 1 << 28;

inline int prec_add(int a, int b) {
    return (a >= kExactPrec || b >= kExactPrec) ? kExactPrec : a + b;
}
inline int prec_min(int a, int b) { return std::min(a, b); }

/// One of the three supported base settings:
///   Laurent          K = F_q((T)), O = F_q[[T]], uniformizer T
///   CompletionAtPi   K = completion of F_r(T) at a monic irreducible pi,
///                    r prime; O = F_pi[[pi]], residue field F_pi of size r^d
///   Padic            K = Q_p, O = Z_p, uniformizer p
///
/// Instances are interned and immutable; obtain them from the static
/// factories.  Elements of the completion are handled through their pi-adic
/// digit expansions, where a digit is encoded as an element of the residue
/// field F_pi = F_r[T]/(pi) (index encoding matches polynomial
/// representatives of degree < d).
class LocalField {
public:
    FieldKind kind() const { return kind_; }
    const FqField* residue() const { return residue_; }
    int residue_q() const { return residue_->q(); }
    int characteristic() const { return residue_->p(); }

    // CompletionAtPi accessors.
    const FqField* base_field() const { return base_; }
    const Poly& pi() const { return pi_; }
    int pi_degree() const { return d_; }

    int padic_p() const { return residue_->p(); }

    std::string uniformizer_name() const {
        switch (kind_) {
            case FieldKind::Laurent: return "T";
            case FieldKind::CompletionAtPi: return "pi";
            case FieldKind::Padic: return std::to_string(residue_->p());
        }
        return "?";
    }

    static const LocalField* laurent(const FqField* coeff_field);
    static const LocalField* laurent(int p, int f) { return laurent(FqField::get(p, f)); }
    /// Completion of F_r(T) at pi; r = pi.field()->q() must be prime and pi
    /// monic irreducible.
    static const LocalField* completion_at_pi(const Poly& pi);
    static const LocalField* padic(int p);

    /// Low/high parts of a digit product in the completion:
    /// a*b = lo + hi*pi as polynomials of degree < d.
    int digit_mul_lo(int a, int b) const { return lo_[static_cast<size_t>(a) * residue_q() + b]; }
    int digit_mul_hi(int a, int b) const { return hi_[static_cast<size_t>(a) * residue_q() + b]; }

    /// Polynomial (over the base/coefficient field) for a digit index.
    Poly digit_to_poly(int idx) const;
    int poly_to_digit(const Poly& rem) const;

    std::string describe() const;

private:
    LocalField(FieldKind k, const FqField* residue, const FqField* base, Poly pi, int d)
        : kind_(k), residue_(residue), base_(base), pi_(std::move(pi)), d_(d) {
        if (kind_ == FieldKind::CompletionAtPi) build_carry_tables();
    }
    void build_carry_tables();

    FieldKind kind_;
    const FqField* residue_;
    const FqField* base_;  // completion only (prime field F_r)
    Poly pi_;              // completion only
    int d_ = 1;
    std::vector<int> lo_, hi_;  // completion digit-product carry tables
};

inline Poly LocalField::digit_to_poly(int idx) const {
    const FqField* fb = (kind_ == FieldKind::CompletionAtPi) ? base_ : residue_;
    std::vector<FqElem> c;
    int p = fb->q();
    while (idx > 0) {
        c.push_back(fb->elem(idx % p));
        idx /= p;
    }
    return Poly(fb, std::move(c));
}

inline int LocalField::poly_to_digit(const Poly& rem) const {
    int p = rem.field()->q();
    int out = 0, mult = 1;
    for (int i = 0; i <= rem.degree(); ++i) {
        out += rem.coeff(i).index() * mult;
        mult *= p;
    }
    return out;
}

inline void LocalField::build_carry_tables() {
    int q = residue_q();
    lo_.resize(static_cast<size_t>(q) * q);
    hi_.resize(static_cast<size_t>(q) * q);
    for (int a = 0; a < q; ++a) {
        Poly pa = digit_to_poly(a);
        for (int b = 0; b < q; ++b) {
            Poly pb = digit_to_poly(b);
            auto [quot, rem] = (pa * pb).divrem(pi_);
            lo_[static_cast<size_t>(a) * q + b] = poly_to_digit(rem);
            hi_[static_cast<size_t>(a) * q + b] = poly_to_digit(quot);
        }
    }
}

inline const LocalField* LocalField::laurent(const FqField* coeff_field) {
    static std::mutex mu;
    static std::map<const FqField*, std::unique_ptr<LocalField>>* cache =
        new std::map<const FqField*, std::unique_ptr<LocalField>>();
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache->find(coeff_field);
    if (it == cache->end())
        it = cache
                 ->emplace(coeff_field, std::unique_ptr<LocalField>(new LocalField(
                                            FieldKind::Laurent, coeff_field, nullptr,
                                            Poly(), 1)))
                 .first;
    return it->second.get();
}

inline const LocalField* LocalField::completion_at_pi(const Poly& pi) {
    const FqField* fr = pi.field();
    if (fr->f() != 1)
        throw InputError("completion_at_pi: base field F_r must be a prime field");
    if (!pi.is_monic() || !pi.is_irreducible())
        throw InputError("completion_at_pi: pi must be monic irreducible over F_r");
    int d = pi.degree();
    static std::mutex mu;
    static std::map<std::pair<const FqField*, std::vector<int>>, std::unique_ptr<LocalField>>*
        cache = new std::map<std::pair<const FqField*, std::vector<int>>,
                             std::unique_ptr<LocalField>>();
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(fr, pi.coeff_indices());
    auto it = cache->find(key);
    if (it == cache->end()) {
        const FqField* res = (d == 1) ? FqField::get(fr->p(), 1)
                                      : FqField::get(fr->p(), d, pi.coeff_indices());
        it = cache
                 ->emplace(key, std::unique_ptr<LocalField>(new LocalField(
                                    FieldKind::CompletionAtPi, res, fr, pi, d)))
                 .first;
    }
    return it->second.get();
}

inline const LocalField* LocalField::padic(int p) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<LocalField>>* cache =
        new std::map<int, std::unique_ptr<LocalField>>();
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache->find(p);
    if (it == cache->end())
        it = cache
                 ->emplace(p, std::unique_ptr<LocalField>(new LocalField(
                                  FieldKind::Padic, FqField::get(p, 1), nullptr, Poly(), 1)))
                 .first;
    return it->second.get();
}

inline std::string LocalField::describe() const {
    switch (kind_) {
        case FieldKind::Laurent:
            return "F_" + std::to_string(residue_q()) + "((T))";
        case FieldKind::CompletionAtPi:
            return "completion of F_" + std::to_string(base_->q()) + "(T) at " + pi_.to_string();
        case FieldKind::Padic:
            return "Q_" + std::to_string(residue_->p());
    }
    return "?";
}

/// Truncated element of a local field K: x = sum of digit(i) * u^(val+i),
/// known modulo u^precN (precN == kExactPrec means exactly known).
///
/// Normal form: the digit window starts at the exact valuation (first digit
/// nonzero) and carries no trailing zeros; digits between the window end and
/// precN are known to be zero.  An element congruent to 0 at its precision
/// has an empty window and val == precN.
///
/// Digits are residue-field element indices.  For Laurent and the completion
/// these are the standard coefficient-field / polynomial-representative
/// digits (carry-free addition); for Q_p they are integers 0..p-1 with carry
/// arithmetic.
class LocalElem {
public:
    LocalElem() : fld_(nullptr), val_(kExactPrec), prec_(kExactPrec) {}

    static LocalElem zero(const LocalField* f) { return LocalElem(f, kExactPrec, kExactPrec, {}); }
    static LocalElem zero_at(const LocalField* f, int precN) {
        return LocalElem(f, precN, precN, {});
    }
    static LocalElem one(const LocalField* f) { return single_digit(f, 1, 0); }
    /// c * u^k for a residue digit index c (exact).
    static LocalElem single_digit(const LocalField* f, int digit_idx, int k) {
        if (digit_idx == 0) return zero(f);
        return LocalElem(f, k, kExactPrec, {digit_idx});
    }
    static LocalElem from_digits(const LocalField* f, int val, std::vector<int> digits,
                                 int precN) {
        return LocalElem(f, val, precN, std::move(digits));
    }
    /// Exact nonnegative integer (Padic), or the image of n in the prime
    /// subfield for the char-p settings.
    static LocalElem from_integer(const LocalField* f, long long n);
    /// Laurent / completion: exact element from a polynomial representative.
    static LocalElem from_poly(const LocalField* f, const Poly& g);

    const LocalField* field() const { return fld_; }
    int precN() const { return prec_; }
    bool is_exact() const { return prec_ >= kExactPrec; }
    /// True if the element is 0 modulo u^precN (all known digits vanish).
    bool is_zero_at_precision() const { return dig_.empty(); }
    bool is_exactly_zero() const { return dig_.empty() && is_exact(); }

    /// Exact valuation when some digit is nonzero; otherwise precN is a lower
    /// bound for the valuation.
    int valuation_lower_bound() const { return val_; }
    int valuation() const {
        if (dig_.empty() && !is_exact())
            throw MathError("LocalElem: valuation not determined at this precision");
        return val_;  // kExactPrec for exact zero
    }

    /// Digit (residue index) of u^m; m must lie below the precision.
    int digit_at(int m) const {
        if (m >= prec_) throw MathError("LocalElem: digit beyond precision");
        if (m < val_ || m >= val_ + static_cast<int>(dig_.size())) return 0;
        return dig_[m - val_];
    }
    const std::vector<int>& window_digits() const { return dig_; }

    LocalElem operator+(const LocalElem& o) const;
    LocalElem operator-(const LocalElem& o) const;
    LocalElem operator*(const LocalElem& o) const;
    LocalElem operator-() const;
    LocalElem& operator+=(const LocalElem& o) { return *this = *this + o; }
    LocalElem& operator-=(const LocalElem& o) { return *this = *this - o; }
    LocalElem& operator*=(const LocalElem& o) { return *this = *this * o; }

    /// Multiply by u^k.
    LocalElem shift(int k) const {
        if (dig_.empty() && is_exact()) return *this;
        return LocalElem(fld_, prec_add(val_, k), prec_add(prec_, k), dig_);
    }
    LocalElem truncate(int N) const {
        if (N >= prec_) return *this;
        std::vector<int> d;
        for (int m = val_; m < std::min(N, val_ + static_cast<int>(dig_.size())); ++m)
            d.push_back(dig_[m - val_]);
        return LocalElem(fld_, std::min(val_, N), N, std::move(d));
    }

    /// Inverse; the element must have a determined valuation, and (unless it
    /// is a single exact digit times u^k) finite precision.
    LocalElem inverse() const;
    LocalElem operator/(const LocalElem& o) const { return *this * o.inverse(); }
    LocalElem pow(long long e) const;

    /// Residue x mod m as an element of the residue field.  Requires val >= 0
    /// and precN >= 1.
    FqElem reduce() const {
        if (prec_ < 1) throw MathError("LocalElem: no precision for reduction");
        if (!dig_.empty() && val_ < 0) throw MathError("LocalElem: negative valuation in reduce");
        return fld_->residue()->elem(val_ == 0 && !dig_.empty() ? dig_[0] : 0);
    }

    bool congruent_mod(const LocalElem& o, int N) const {
        return (*this - o).truncate(N).is_zero_at_precision();
    }
    /// Exact equality of exactly known elements.
    bool operator==(const LocalElem& o) const {
        return fld_ == o.fld_ && val_ == o.val_ && prec_ == o.prec_ && dig_ == o.dig_;
    }
    bool operator!=(const LocalElem& o) const { return !(*this == o); }

    /// Polynomial representative (Laurent/completion, val >= 0): the exact
    /// polynomial carrying the digits below min(precN, window end).
    Poly to_poly() const;
    /// Padic, val >= 0: integer representative of x mod p^N.
    long long to_integer_mod(int N) const;
    /// Padic, val >= 0: the exactly known nonnegative integer value.
    long long to_exact_integer() const;

    std::string to_string() const;

private:
    LocalElem(const LocalField* f, int val, int prec, std::vector<int> digits)
        : fld_(f), val_(val), prec_(prec), dig_(std::move(digits)) {
        normalize();
    }
    void normalize();

    const LocalField* fld_;
    int val_;
    int prec_;
    std::vector<int> dig_;
};

inline void LocalElem::normalize() {
    size_t lead = 0;
    while (lead < dig_.size() && dig_[lead] == 0) ++lead;
    if (lead > 0) {
        dig_.erase(dig_.begin(), dig_.begin() + lead);
        val_ = prec_add(val_, static_cast<int>(lead));
    }
    while (!dig_.empty() && dig_.back() == 0) dig_.pop_back();
    if (static_cast<int>(dig_.size()) > prec_ - val_)
        dig_.resize(std::max(0, prec_ - val_));
    while (!dig_.empty() && dig_.back() == 0) dig_.pop_back();
    if (dig_.empty()) val_ = prec_;
}

inline LocalElem LocalElem::from_integer(const LocalField* f, long long n) {
    if (f->kind() == FieldKind::Padic) {
        if (n < 0) throw InputError("LocalElem: exact negative p-adic integer not representable");
        std::vector<int> d;
        int p = f->padic_p();
        while (n > 0) {
            d.push_back(static_cast<int>(n % p));
            n /= p;
        }
        return LocalElem(f, 0, kExactPrec, std::move(d));
    }
    // Char p: image in the prime subfield (a constant digit).
    int p = f->characteristic();
    long long r = n % p;
    if (r < 0) r += p;
    return single_digit(f, static_cast<int>(r), 0);
}

inline LocalElem LocalElem::from_poly(const LocalField* f, const Poly& g) {
    if (f->kind() == FieldKind::Laurent) {
        if (g.field() != f->residue()) throw InputError("from_poly: wrong coefficient field");
        std::vector<int> d = g.coeff_indices();
        return LocalElem(f, 0, kExactPrec, std::move(d));
    }
    if (f->kind() == FieldKind::CompletionAtPi) {
        if (g.field() != f->base_field()) throw InputError("from_poly: wrong base field");
        std::vector<int> d;
        Poly cur = g;
        while (!cur.is_zero()) {
            auto [quot, rem] = cur.divrem(f->pi());
            d.push_back(f->poly_to_digit(rem));
            cur = quot;
        }
        return LocalElem(f, 0, kExactPrec, std::move(d));
    }
    throw InputError("from_poly: not a polynomial-representative setting");
}

inline Poly LocalElem::to_poly() const {
    if (!dig_.empty() && val_ < 0) throw MathError("to_poly: negative valuation");
    if (fld_->kind() == FieldKind::Laurent) {
        std::vector<FqElem> c(val_ == prec_ ? 0 : val_ + dig_.size(), fld_->residue()->zero());
        for (size_t i = 0; i < dig_.size(); ++i) c[val_ + i] = fld_->residue()->elem(dig_[i]);
        return Poly(fld_->residue(), std::move(c));
    }
    if (fld_->kind() == FieldKind::CompletionAtPi) {
        Poly acc = Poly::zero(fld_->base_field());
        Poly pik = fld_->pi().pow(dig_.empty() ? 0 : val_);
        for (size_t i = 0; i < dig_.size(); ++i) {
            acc = acc + fld_->digit_to_poly(dig_[i]) * pik;
            pik = pik * fld_->pi();
        }
        return acc;
    }
    throw MathError("to_poly: not a polynomial-representative setting");
}

inline long long LocalElem::to_integer_mod(int N) const {
    if (fld_->kind() != FieldKind::Padic) throw MathError("to_integer_mod: not p-adic");
    if (N > prec_) throw MathError("to_integer_mod: beyond precision");
    if (!dig_.empty() && val_ < 0) throw MathError("to_integer_mod: negative valuation");
    long long out = 0, mult = 1;
    for (int m = 0; m < N; ++m, mult *= fld_->padic_p()) out += digit_at(m) * mult;
    return out;
}

inline long long LocalElem::to_exact_integer() const {
    if (fld_->kind() != FieldKind::Padic) throw MathError("to_exact_integer: not p-adic");
    if (!is_exact()) throw MathError("to_exact_integer: element not exactly known");
    if (!dig_.empty() && val_ < 0) throw MathError("to_exact_integer: negative valuation");
    if (dig_.empty()) return 0;
    int top = val_ + static_cast<int>(dig_.size());
    if (top > 60) throw MathError("to_exact_integer: overflow");
    return to_integer_mod(std::min(prec_, top));
}

inline LocalElem LocalElem::operator+(const LocalElem& o) const {
    if (fld_ != o.fld_) throw InputError("LocalElem: mixed fields in +");
    int prec = prec_min(prec_, o.prec_);
    int lo = std::min(val_, o.val_);
    if (lo >= prec) return zero_at(fld_, prec);
    int hi_this = dig_.empty() ? lo : val_ + static_cast<int>(dig_.size());
    int hi_o = o.dig_.empty() ? lo : o.val_ + static_cast<int>(o.dig_.size());
    int hi = std::min(std::max(hi_this, hi_o), prec);
    std::vector<int> out(std::max(0, hi - lo), 0);
    if (fld_->kind() == FieldKind::Padic) {
        int p = fld_->padic_p();
        long long carry = 0;
        for (int m = lo; m < hi || (carry != 0 && m < prec); ++m) {
            if (m - lo >= static_cast<int>(out.size())) out.resize(m - lo + 1, 0);
            long long s = carry;
            if (m < prec_) s += digit_at(m);
            if (m < o.prec_) s += o.digit_at(m);
            out[m - lo] = static_cast<int>(s % p);
            carry = s / p;
        }
    } else {
        const FqField* R = fld_->residue();
        for (int m = lo; m < hi; ++m)
            out[m - lo] = R->add(m < prec_ ? digit_at(m) : 0, m < o.prec_ ? o.digit_at(m) : 0);
    }
    return LocalElem(fld_, lo, prec, std::move(out));
}

inline LocalElem LocalElem::operator-() const {
    if (dig_.empty()) return *this;
    if (fld_->kind() != FieldKind::Padic) {
        std::vector<int> out = dig_;
        const FqField* R = fld_->residue();
        for (auto& d : out) d = R->neg(d);
        return LocalElem(fld_, val_, prec_, std::move(out));
    }
    if (is_exact())
        throw MathError("LocalElem: negation of an exact p-adic integer is not finitely "
                        "representable; truncate first");
    // p^prec - x within the window [val, prec).
    int p = fld_->padic_p();
    std::vector<int> out(prec_ - val_, 0);
    int borrow = 0;
    for (int m = val_; m < prec_; ++m) {
        int s = -digit_at(m) - borrow;
        borrow = 0;
        while (s < 0) {
            s += p;
            borrow = 1;
        }
        out[m - val_] = s;
    }
    return LocalElem(fld_, val_, prec_, std::move(out));
}

inline LocalElem LocalElem::operator-(const LocalElem& o) const {
    if (fld_ != o.fld_) throw InputError("LocalElem: mixed fields in -");
    if (fld_->kind() != FieldKind::Padic) return *this + (-o);
    if (o.dig_.empty()) return truncate(prec_min(prec_, o.prec_));
    if (is_exact() && o.is_exact()) {
        // Exact subtraction of nonnegative integers; the result must be >= 0.
        long long a = 0, b = 0, mult = 1;
        int top = std::max(val_ + static_cast<int>(dig_.size()),
                           o.val_ + static_cast<int>(o.dig_.size()));
        if (top > 60) throw MathError("LocalElem: exact p-adic subtraction overflow");
        for (int m = 0; m < top; ++m, mult *= fld_->padic_p()) {
            a += digit_at(m) * mult;
            b += o.digit_at(m) * mult;
        }
        if (a < b)
            throw MathError("LocalElem: negative exact p-adic result is not finitely "
                            "representable; truncate first");
        return from_integer(fld_, a - b);
    }
    int prec = prec_min(prec_, o.prec_);
    return truncate(prec) + (-o.truncate(prec));
}

inline LocalElem LocalElem::operator*(const LocalElem& o) const {
    if (fld_ != o.fld_) throw InputError("LocalElem: mixed fields in *");
    int prec = prec_min(prec_add(prec_, o.val_), prec_add(o.prec_, val_));
    if (dig_.empty() || o.dig_.empty()) return zero_at(fld_, prec);
    int base = val_ + o.val_;
    // Convolution length plus room for the top carry; a digit product carries
    // at most one level in the completion and a few in the p-adic case.
    int conv = static_cast<int>(dig_.size() + o.dig_.size()) - 1;
    int room = conv + 8;
    if (prec < kExactPrec) room = std::min(room, prec - base);
    if (room <= 0) return zero_at(fld_, prec);
    std::vector<int> out(room, 0);
    if (fld_->kind() == FieldKind::Padic) {
        int p = fld_->padic_p();
        std::vector<long long> col(room, 0);
        for (size_t i = 0; i < dig_.size(); ++i) {
            if (dig_[i] == 0) continue;
            for (size_t j = 0; j < o.dig_.size(); ++j) {
                size_t k = i + j;
                if (k < col.size()) col[k] += static_cast<long long>(dig_[i]) * o.dig_[j];
            }
        }
        long long carry = 0;
        for (size_t k = 0; k < col.size(); ++k) {
            long long s = col[k] + carry;
            out[k] = static_cast<int>(s % p);
            carry = s / p;
        }
        while (carry > 0 && prec >= kExactPrec) {
            out.push_back(static_cast<int>(carry % p));
            carry /= p;
        }
        return LocalElem(fld_, base, prec, std::move(out));
    }
    const FqField* R = fld_->residue();
    bool carries = fld_->kind() == FieldKind::CompletionAtPi;
    for (size_t i = 0; i < dig_.size(); ++i) {
        if (dig_[i] == 0) continue;
        for (size_t j = 0; j < o.dig_.size(); ++j) {
            if (o.dig_[j] == 0) continue;
            size_t k = i + j;
            if (k < out.size())
                out[k] = R->add(out[k], carries ? fld_->digit_mul_lo(dig_[i], o.dig_[j])
                                                : R->mul(dig_[i], o.dig_[j]));
            if (carries) {
                int hi = fld_->digit_mul_hi(dig_[i], o.dig_[j]);
                if (hi != 0 && k + 1 < out.size()) out[k + 1] = R->add(out[k + 1], hi);
            }
        }
    }
    return LocalElem(fld_, base, prec, std::move(out));
}

inline LocalElem LocalElem::inverse() const {
    if (dig_.empty())
        throw MathError("LocalElem: inverse of (apparent) zero");
    if (dig_.size() == 1 && is_exact()) {
        // c * u^k inverts exactly in every setting except p-adic digits > 1.
        if (fld_->kind() != FieldKind::Padic || dig_[0] == 1) {
            int c = fld_->kind() == FieldKind::Padic ? 1 : fld_->residue()->inv(dig_[0]);
            return single_digit(fld_, c, -val_);
        }
    }
    if (is_exact())
        throw MathError("LocalElem: inverse of an exact element needs a precision cap; "
                        "truncate first");
    int v = val_;
    int m = prec_ - v;  // digits of the unit part we know
    if (m <= 0) throw MathError("LocalElem: no precision left for inverse");
    LocalElem w = shift(-v);  // unit, known mod u^m
    // Newton iteration z <- z(2 - w z), doubling correct digits each round.
    int z0;
    if (fld_->kind() == FieldKind::Padic) {
        int p = fld_->padic_p();
        int a = w.digit_at(0), inv = 1;
        for (int c = 1; c < p; ++c)
            if (a * c % p == 1) inv = c;
        z0 = inv;
    } else {
        z0 = fld_->residue()->inv(w.digit_at(0));
    }
    LocalElem z = single_digit(fld_, z0, 0).truncate(1);
    LocalElem two = from_integer(fld_, 2).truncate(m);
    int have = 1;
    while (have < m) {
        have = std::min(2 * have, m);
        LocalElem zz = LocalElem(fld_, z.val_, have, z.dig_);  // lift the known digits
        z = (zz * (two - w.truncate(have) * zz)).truncate(have);
    }
    return z.shift(-v);
}

inline LocalElem LocalElem::pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    LocalElem acc = one(fld_);
    LocalElem base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    // A bare product chain over-reports precision for e == 0 on inexact
    // inputs; the constant 1 is exact regardless.
    return acc;
}

inline std::string LocalElem::to_string() const {
    std::string u = fld_->uniformizer_name();
    if (fld_->kind() == FieldKind::Padic) u = "p";
    std::string out;
    for (size_t i = 0; i < dig_.size(); ++i) {
        if (dig_[i] == 0) continue;
        if (!out.empty()) out += " + ";
        int m = val_ + static_cast<int>(i);
        out += std::to_string(dig_[i]);
        if (m != 0) out += "*" + u + "^" + std::to_string(m);
    }
    if (out.empty()) out = "0";
    if (!is_exact()) out += " (mod " + u + "^" + std::to_string(prec_) + ")";
    return out;
}

/// The q^n canonical representatives of O/m^n: index i corresponds to the
/// base-q digits of i (q = residue field size), realized as exact O-elements.
/// Laurent: polynomials of degree < n over F_q; completion: polynomials of
/// degree < dn over F_r; p-adic: the integers 0..p^n-1.
inline LocalElem canonical_rep(const LocalField* f, long long index, int level) {
    int q = f->residue_q();
    std::vector<int> d;
    long long i = index;
    for (int m = 0; m < level; ++m, i /= q) d.push_back(static_cast<int>(i % q));
    if (i != 0) throw InputError("canonical_rep: index out of range for level");
    return LocalElem::from_digits(f, 0, std::move(d), kExactPrec);
}

inline std::vector<LocalElem> canonical_reps(const LocalField* f, int level) {
    if (level < 0) throw InputError("canonical_reps: negative level");
    long long count = 1;
    for (int m = 0; m < level; ++m) {
        count *= f->residue_q();
        if (count > 2'000'000) throw InputError("canonical_reps: level too large");
    }
    std::vector<LocalElem> out;
    out.reserve(count);
    for (long long i = 0; i < count; ++i) out.push_back(canonical_rep(f, i, level));
    return out;
}

/// Index of the class of x modulo m^level in canonical order.  Requires
/// x integral and known modulo m^level.
inline long long class_index(const LocalElem& x, int level) {
    if (x.precN() < level) throw MathError("class_index: insufficient precision");
    if (!x.is_zero_at_precision() && x.valuation() < 0)
        throw MathError("class_index: not integral");
    long long out = 0, mult = 1;
    for (int m = 0; m < level; ++m, mult *= x.field()->residue_q())
        out += x.digit_at(m) * mult;
    return out;
}

/// Teichmuller lift of a residue-field element, to precision `target`:
/// the unique z with z^q = z reducing to the given residue, computed by
/// iterating z -> z^q until stable.
inline LocalElem teichmuller_lift(const LocalField* f, FqElem residue, int target) {
    if (residue.field() != f->residue()) throw InputError("teichmuller_lift: wrong residue field");
    if (residue.is_zero()) return LocalElem::zero_at(f, target);
    int q = f->residue_q();
    LocalElem z = LocalElem::single_digit(f, residue.index(), 0).truncate(target);
    for (int it = 0; it < target + 2; ++it) {
        LocalElem zn = z.pow(q).truncate(target);
        if ((zn - z).is_zero_at_precision()) return zn;
        z = zn;
    }
    return z;  // converged below the ceiling in every supported setting
}

/// The j-th Teichmuller digit of x: x = sum omega_j(x) u^j with
/// omega_j(x)^q = omega_j(x).  Requires x integral and precN > j; the result
/// is computed to precision `target`.
inline LocalElem teichmuller_digit(const LocalElem& x, int j, int target) {
    if (x.precN() <= j) throw MathError("teichmuller_digit: insufficient precision");
    if (!x.is_zero_at_precision() && x.valuation() < 0)
        throw MathError("teichmuller_digit: not integral");
    const LocalField* f = x.field();
    int work = std::max(target, x.is_exact() ? j + 1 : x.precN());
    LocalElem cur = x.truncate(work);
    for (int i = 0; i < j; ++i) {
        LocalElem w = teichmuller_lift(f, cur.reduce(), cur.precN());
        cur = (cur - w).shift(-1);
    }
    return teichmuller_lift(f, cur.reduce(), target);
}

/// All Teichmuller digits omega_0..omega_{count-1} of x, each to precision
/// `target`.  Digits are extracted once along the chain, so this is the
/// preferred bulk interface.
inline std::vector<LocalElem> teichmuller_digits(const LocalElem& x, int count, int target) {
    if (x.precN() < count) throw MathError("teichmuller_digits: insufficient precision");
    const LocalField* f = x.field();
    int work = std::max(target + count, x.is_exact() ? count + 1 : x.precN());
    LocalElem cur = x.truncate(work);
    std::vector<LocalElem> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        // Lift at the full current precision so the chain loses exactly one
        // digit per extraction.
        LocalElem w = teichmuller_lift(f, cur.reduce(), std::max(target, cur.precN()));
        out.push_back(w.truncate(std::max(target, 1)));
        cur = (cur - w.truncate(cur.precN())).shift(-1);
    }
    return out;
}

}  // namespace digitbasis
