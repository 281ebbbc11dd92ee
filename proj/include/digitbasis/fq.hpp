#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace digitbasis {

class FqField;

/// Thrown when an input violates a documented precondition (bad field spec,
/// mixed fields, malformed payload).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an operation cannot deliver the requested result at the
/// available precision or integrality (non-unit division, negative valuation
/// where integrality is required, precision exhausted).
struct MathError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Element of a finite field, encoded as an index into its field's tables.
///
/// Index encoding: for F_q = F_p[y]/(modulus) with q = p^f, the element
/// c_0 + c_1 y + ... + c_{f-1} y^{f-1} has index sum c_i p^i.  The prime
/// subfield is exactly the indices 0..p-1.
class FqElem {
public:
    FqElem() : fld_(nullptr), v_(0) {}
    FqElem(const FqField* fld, int v) : fld_(fld), v_(v) {}

    const FqField* field() const { return fld_; }
    int index() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    FqElem operator+(FqElem o) const;
    FqElem operator-(FqElem o) const;
    FqElem operator*(FqElem o) const;
    FqElem operator/(FqElem o) const;
    FqElem operator-() const;
    FqElem inverse() const;
    FqElem pow(long long e) const;

    FqElem& operator+=(FqElem o) { return *this = *this + o; }
    FqElem& operator-=(FqElem o) { return *this = *this - o; }
    FqElem& operator*=(FqElem o) { return *this = *this * o; }

    bool operator==(FqElem o) const { return fld_ == o.fld_ && v_ == o.v_; }
    bool operator!=(FqElem o) const { return !(*this == o); }

private:
    const FqField* fld_;
    int v_;
};

/// A finite field F_q = F_p[y]/(modulus), q = p^f, with full arithmetic
/// tables.  Instances are immutable after construction and are obtained from
/// FqField::get, which caches one instance per (p, f, modulus).
///
/// The default modulus for given (p, f) is the smallest monic irreducible of
/// degree f, where candidates y^f + c_{f-1}y^{f-1} + ... + c_0 are enumerated
/// by the integer sum c_i p^i in increasing order.
class FqField {
public:
    int p() const { return p_; }
    int f() const { return f_; }
    int q() const { return q_; }
    /// Monic modulus, length f+1, coefficients in 0..p-1 (index = degree).
    const std::vector<int>& modulus() const { return modulus_; }

    FqElem zero() const { return FqElem(this, 0); }
    FqElem one() const { return FqElem(this, 1); }
    FqElem elem(int idx) const {
        if (idx < 0 || idx >= q_) throw InputError("FqField: element index out of range");
        return FqElem(this, idx);
    }
    /// Image of the integer n under Z -> F_q (lands in the prime subfield).
    FqElem from_int(long long n) const {
        long long r = n % p_;
        if (r < 0) r += p_;
        return FqElem(this, static_cast<int>(r));
    }

    int add(int a, int b) const { return add_[a * q_ + b]; }
    int sub(int a, int b) const { return add_[a * q_ + neg_[b]]; }
    int mul(int a, int b) const { return mul_[a * q_ + b]; }
    int neg(int a) const { return neg_[a]; }
    int inv(int a) const {
        if (a == 0) throw MathError("FqField: inverse of zero");
        return inv_[a];
    }

    /// Coefficient of y^i in the polynomial representation of index a.
    int coeff_of(int a, int i) const {
        for (int k = 0; k < i; ++k) a /= p_;
        return a % p_;
    }

    /// The field with the deterministic smallest-modulus choice.
    static const FqField* get(int p, int f);
    /// The field with an explicit monic modulus (checked irreducible).
    static const FqField* get(int p, int f, const std::vector<int>& modulus);

    /// Smallest monic irreducible of degree f over F_p in the enumeration
    /// order described above.
    static std::vector<int> default_modulus(int p, int f);
    static bool is_prime(int p);
    /// Irreducibility over F_p by trial division (monic input, degree >= 1).
    static bool is_irreducible_mod_p(const std::vector<int>& poly, int p);

    std::string describe() const;

private:
    FqField(int p, int f, std::vector<int> modulus);

    int p_, f_, q_;
    std::vector<int> modulus_;
    std::vector<int> add_, mul_;  // q*q flat tables
    std::vector<int> neg_, inv_;  // size q

    static int poly_index_mul(int a, int b, int p, int f, const std::vector<int>& modulus);
    static int poly_index_add(int a, int b, int p);
};

inline FqElem FqElem::operator+(FqElem o) const {
    if (fld_ != o.fld_) throw InputError("FqElem: mixed fields in +");
    return FqElem(fld_, fld_->add(v_, o.v_));
}
inline FqElem FqElem::operator-(FqElem o) const {
    if (fld_ != o.fld_) throw InputError("FqElem: mixed fields in -");
    return FqElem(fld_, fld_->sub(v_, o.v_));
}
inline FqElem FqElem::operator*(FqElem o) const {
    if (fld_ != o.fld_) throw InputError("FqElem: mixed fields in *");
    return FqElem(fld_, fld_->mul(v_, o.v_));
}
inline FqElem FqElem::operator/(FqElem o) const {
    if (fld_ != o.fld_) throw InputError("FqElem: mixed fields in /");
    return FqElem(fld_, fld_->mul(v_, fld_->inv(o.v_)));
}
inline FqElem FqElem::operator-() const { return FqElem(fld_, fld_->neg(v_)); }
inline FqElem FqElem::inverse() const { return FqElem(fld_, fld_->inv(v_)); }
inline FqElem FqElem::pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    FqElem acc = fld_->one();
    FqElem base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

inline bool FqField::is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline int FqField::poly_index_add(int a, int b, int p) {
    int out = 0, mult = 1;
    while (a > 0 || b > 0) {
        out += ((a % p + b % p) % p) * mult;
        a /= p;
        b /= p;
        mult *= p;
    }
    return out;
}

inline int FqField::poly_index_mul(int a, int b, int p, int f, const std::vector<int>& modulus) {
    // Schoolbook product of the coefficient vectors, then reduction mod the
    // monic modulus, all coefficients mod p.
    std::vector<int> ca(f, 0), cb(f, 0);
    for (int i = 0; i < f; ++i, a /= p) ca[i] = a % p;
    for (int i = 0; i < f; ++i, b /= p) cb[i] = b % p;
    std::vector<int> prod(2 * f - 1, 0);
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
    for (int d = 2 * f - 2; d >= f; --d) {
        int c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (int i = 0; i < f; ++i) {
            int t = prod[d - f + i] - c * modulus[i];
            t %= p;
            if (t < 0) t += p;
            prod[d - f + i] = t;
        }
    }
    int out = 0, mult = 1;
    for (int i = 0; i < f; ++i) {
        out += prod[i] * mult;
        mult *= p;
    }
    return out;
}

inline bool FqField::is_irreducible_mod_p(const std::vector<int>& poly, int p) {
    int f = static_cast<int>(poly.size()) - 1;
    if (f < 1 || poly[f] != 1) return false;
    if (f == 1) return true;
    // Trial division by every monic divisor candidate of degree 1..f/2.
    auto rem_by = [&](const std::vector<int>& div) {
        std::vector<int> r = poly;
        int dd = static_cast<int>(div.size()) - 1;
        for (int d = f; d >= dd; --d) {
            int c = r[d] % p;
            if (c == 0) continue;
            for (int i = 0; i <= dd; ++i) {
                int t = (r[d - dd + i] - c * div[i]) % p;
                if (t < 0) t += p;
                r[d - dd + i] = t;
            }
        }
        for (int i = 0; i < dd; ++i)
            if (r[i] % p != 0) return false;
        return true;  // divides exactly
    };
    for (int dd = 1; 2 * dd <= f; ++dd) {
        int count = 1;
        for (int i = 0; i < dd; ++i) count *= p;
        for (int idx = 0; idx < count; ++idx) {
            std::vector<int> div(dd + 1, 0);
            int t = idx;
            for (int i = 0; i < dd; ++i, t /= p) div[i] = t % p;
            div[dd] = 1;
            if (rem_by(div)) return false;
        }
    }
    return true;
}

inline std::vector<int> FqField::default_modulus(int p, int f) {
    if (f == 1) return {0, 1};  // y itself; arithmetic is plain mod p
    int count = 1;
    for (int i = 0; i < f; ++i) count *= p;
    for (int idx = 0; idx < count; ++idx) {
        std::vector<int> cand(f + 1, 0);
        int t = idx;
        for (int i = 0; i < f; ++i, t /= p) cand[i] = t % p;
        cand[f] = 1;
        if (is_irreducible_mod_p(cand, p)) return cand;
    }
    throw MathError("FqField: no irreducible modulus found");  // unreachable
}

inline FqField::FqField(int p, int f, std::vector<int> modulus)
    : p_(p), f_(f), modulus_(std::move(modulus)) {
    if (!is_prime(p)) throw InputError("FqField: characteristic must be prime");
    if (f < 1) throw InputError("FqField: extension degree must be >= 1");
    long long q = 1;
    for (int i = 0; i < f; ++i) {
        q *= p;
        if (q > 65536) throw InputError("FqField: field too large for table arithmetic");
    }
    q_ = static_cast<int>(q);
    if (static_cast<int>(modulus_.size()) != f + 1 || modulus_[f] != 1)
        throw InputError("FqField: modulus must be monic of degree f");
    if (f > 1 && !is_irreducible_mod_p(modulus_, p))
        throw InputError("FqField: modulus is reducible");

    add_.resize(static_cast<size_t>(q_) * q_);
    mul_.resize(static_cast<size_t>(q_) * q_);
    neg_.resize(q_);
    inv_.assign(q_, 0);
    for (int a = 0; a < q_; ++a)
        for (int b = 0; b < q_; ++b) {
            add_[static_cast<size_t>(a) * q_ + b] = poly_index_add(a, b, p_);
            mul_[static_cast<size_t>(a) * q_ + b] =
                (f_ == 1) ? (a * b) % p_ : poly_index_mul(a, b, p_, f_, modulus_);
        }
    for (int a = 0; a < q_; ++a) {
        for (int b = 0; b < q_; ++b)
            if (add_[static_cast<size_t>(a) * q_ + b] == 0) {
                neg_[a] = b;
                break;
            }
        if (a != 0)
            for (int b = 1; b < q_; ++b)
                if (mul_[static_cast<size_t>(a) * q_ + b] == 1) {
                    inv_[a] = b;
                    break;
                }
    }
    for (int a = 1; a < q_; ++a)
        if (inv_[a] == 0) throw MathError("FqField: element without inverse (modulus reducible?)");
}

inline const FqField* FqField::get(int p, int f) { return get(p, f, default_modulus(p, f)); }

inline const FqField* FqField::get(int p, int f, const std::vector<int>& modulus) {
    struct Key {
        int p, f;
        std::vector<int> m;
        bool operator<(const Key& o) const {
            if (p != o.p) return p < o.p;
            if (f != o.f) return f < o.f;
            return m < o.m;
        }
    };
    static std::mutex mu;
    static std::map<Key, std::unique_ptr<FqField>>* cache =
        new std::map<Key, std::unique_ptr<FqField>>();
    std::lock_guard<std::mutex> lock(mu);
    Key k{p, f, modulus};
    auto it = cache->find(k);
    if (it == cache->end())
        it = cache->emplace(std::move(k), std::unique_ptr<FqField>(new FqField(p, f, modulus)))
                 .first;
    return it->second.get();
}

inline std::string FqField::describe() const {
    return "F_" + std::to_string(q_) + (f_ > 1 ? " = F_" + std::to_string(p_) + "[y]/(modulus)" : "");
}

}  // namespace digitbasis
