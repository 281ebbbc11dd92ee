#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "basis.hpp"
#include "binomial.hpp"
#include "local.hpp"

namespace digitbasis {

/// Seeds omega_{j,pi} (Teichmuller digits) with digit base q; the extension
/// B_m = prod omega_j^(c_j) works in all three base settings.
inline BasisFamily baker_family(const LocalField* field) {
    BasisFamily fam;
    fam.field = field;
    fam.digit_base = field->residue_q();
    fam.subdeg = 1;
    fam.label = "baker";
    fam.default_mode = CertMode::General;
    fam.seed = [](int j, const LocalElem& rep, int target) {
        LocalElem x = rep;
        if (x.precN() <= j) x = x.truncate(j + 1);  // exact reps extend freely
        return teichmuller_digit(x, j, target);
    };
    fam.loss = [](int) { return 0; };  // omega_j is locally constant
    return fam;
}

/// Sparse monomial: (variable index, exponent) pairs, sorted by index,
/// exponents >= 1.  The empty monomial is the constant term.
using Monomial = std::vector<std::pair<int, int>>;

inline int monomial_degree(const Monomial& m) {
    int d = 0;
    for (auto& [idx, e] : m) d += e;
    return d;
}

/// Graded lexicographic: total degree first, then exponents compared
/// variable by variable from X_0 up.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = monomial_degree(a), db = monomial_degree(b);
        if (da != db) return da < db;
        size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            int ia = i < a.size() ? a[i].first : 1 << 30;
            int ib = j < b.size() ? b[j].first : 1 << 30;
            if (ia != ib) return ia < ib ? a[i].second > 0 : !(b[j].second > 0);
            if (a[i].second != b[j].second) return a[i].second > b[j].second;
            ++i;
            ++j;
        }
        return false;
    }
};

/// Element of the q-simplified model of T_inf(K)/I_q(K): finitely many
/// monomials in X_0, X_1, ... with every exponent <= q-1, and K-coefficients.
/// Multiplication reduces exponents by the rule X^q = X.
class QSimplifiedSeries {
public:
    explicit QSimplifiedSeries(const LocalField* field) : field_(field) {}

    static QSimplifiedSeries constant(const LocalField* field, const LocalElem& c) {
        QSimplifiedSeries s(field);
        s.add_term({}, c);
        return s;
    }
    static QSimplifiedSeries variable(const LocalField* field, int idx) {
        QSimplifiedSeries s(field);
        s.add_term({{idx, 1}}, LocalElem::one(field));
        return s;
    }

    const LocalField* field() const { return field_; }
    int q() const { return field_->residue_q(); }
    const std::map<Monomial, LocalElem, MonomialOrder>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int max_variable() const {
        int m = -1;
        for (auto& [mon, c] : terms_)
            if (!mon.empty()) m = std::max(m, mon.back().first);
        return m;
    }

    /// Add c * X^mon with exponent reduction X^q = X (e >= 1 maps into
    /// 1..q-1 by e = ((e-1) mod (q-1)) + 1); zero coefficients are dropped.
    void add_term(Monomial mon, const LocalElem& c) {
        if (c.is_zero_at_precision() && c.is_exact()) return;
        Monomial red;
        for (auto& [idx, e] : mon) {
            if (e == 0) continue;
            if (idx < 0) throw InputError("QSimplifiedSeries: negative variable index");
            int er = e <= q() - 1 ? e : ((e - 1) % (q() - 1)) + 1;
            if (q() == 2) er = 1;  // only exponent 1 survives
            red.emplace_back(idx, er);
        }
        auto it = terms_.find(red);
        if (it == terms_.end()) {
            if (!c.is_zero_at_precision()) terms_.emplace(std::move(red), c);
        } else {
            LocalElem sum = it->second + c;
            if (sum.is_zero_at_precision())
                terms_.erase(it);
            else
                it->second = sum;
        }
    }

    QSimplifiedSeries operator+(const QSimplifiedSeries& o) const {
        check(o);
        QSimplifiedSeries out = *this;
        for (auto& [mon, c] : o.terms_) out.add_term(mon, c);
        return out;
    }
    QSimplifiedSeries operator-() const {
        QSimplifiedSeries out(field_);
        for (auto& [mon, c] : terms_) out.add_term(mon, -c);
        return out;
    }
    QSimplifiedSeries operator-(const QSimplifiedSeries& o) const { return *this + (-o); }
    QSimplifiedSeries operator*(const QSimplifiedSeries& o) const {
        check(o);
        QSimplifiedSeries out(field_);
        for (auto& [ma, ca] : terms_)
            for (auto& [mb, cb] : o.terms_) {
                Monomial prod;
                size_t i = 0, j = 0;
                while (i < ma.size() || j < mb.size()) {
                    int ia = i < ma.size() ? ma[i].first : 1 << 30;
                    int ib = j < mb.size() ? mb[j].first : 1 << 30;
                    if (ia < ib) prod.push_back(ma[i++]);
                    else if (ib < ia) prod.push_back(mb[j++]);
                    else {
                        prod.emplace_back(ia, ma[i].second + mb[j].second);
                        ++i;
                        ++j;
                    }
                }
                out.add_term(std::move(prod), ca * cb);
            }
        return out;
    }
    QSimplifiedSeries operator*(const LocalElem& s) const {
        QSimplifiedSeries out(field_);
        for (auto& [mon, c] : terms_) out.add_term(mon, c * s);
        return out;
    }

    /// Max coefficient norm as a valuation report.
    NormValue norm() const {
        NormValue n;
        for (auto& [mon, c] : terms_) {
            if (!c.is_zero_at_precision()) {
                n.zero_at_prec = false;
                n.val = std::min(n.val, c.valuation());
            } else {
                n.val = std::min(n.val, c.precN());
            }
        }
        return n;
    }

    bool structurally_equal(const QSimplifiedSeries& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        auto it = terms_.begin(), jt = o.terms_.begin();
        for (; it != terms_.end(); ++it, ++jt) {
            if (it->first != jt->first) return false;
            if (!(it->second == jt->second)) return false;
        }
        return true;
    }

private:
    void check(const QSimplifiedSeries& o) const {
        if (field_ != o.field_) throw InputError("QSimplifiedSeries: mixed fields");
    }
    const LocalField* field_;
    std::map<Monomial, LocalElem, MonomialOrder> terms_;
};

/// Evaluate at a point of O by substituting X_j -> omega_j(x).  The point
/// must be known past every variable index used.
inline LocalElem evaluate_at_point(const QSimplifiedSeries& s, const LocalElem& x, int target) {
    const LocalField* f = s.field();
    if (x.field() != f) throw InputError("evaluate_at_point: wrong field");
    int nv = s.max_variable() + 1;
    LocalElem xe = x;
    if (x.is_exact() && x.precN() <= nv) xe = x.truncate(nv + 1);
    if (!x.is_exact() && x.precN() < nv)
        throw MathError("evaluate_at_point: point precision below variable span");
    std::vector<LocalElem> omegas =
        nv > 0 ? teichmuller_digits(xe, nv, target) : std::vector<LocalElem>{};
    LocalElem acc = LocalElem::zero_at(f, target);
    for (auto& [mon, c] : s.terms()) {
        LocalElem term = c;
        for (auto& [idx, e] : mon) term = term * omegas[idx].pow(e);
        acc = acc + term;
    }
    return acc.truncate(target);
}

/// Forward half of the Tate-model isomorphism: substitute X_j -> omega_j and
/// tabulate on O/m^level.
inline FunctionTable series_to_function(const QSimplifiedSeries& s, int level, int precN) {
    if (s.max_variable() >= level)
        throw InputError("series_to_function: variable index at or above the level");
    return FunctionTable::tabulate(s.field(), level, precN, [&](const LocalElem& rep) {
        return evaluate_at_point(s, rep, precN);
    });
}

/// Backward half: expand the table in the Baker basis and send B_m to the
/// monomial whose exponent vector is the base-q digit string of m.
inline QSimplifiedSeries function_to_series(const FunctionTable& t) {
    const LocalField* f = t.field;
    auto fam = baker_family(f);
    Expansion ex = expand(t, fam);
    QSimplifiedSeries s(f);
    int q = f->residue_q();
    for (size_t m = 0; m < ex.coeffs.size(); ++m) {
        if (ex.coeffs[m].is_zero_at_precision()) continue;
        Monomial mon;
        long long mm = static_cast<long long>(m);
        for (int j = 0; mm > 0; ++j, mm /= q)
            if (mm % q != 0) mon.emplace_back(j, static_cast<int>(mm % q));
        s.add_term(std::move(mon), ex.coeffs[m]);
    }
    return s;
}

/// The series prod_{j<n} (1 - (X_j - omega_j(a))^(q-1)) attached to the ball
/// a + pi^n O.
///
/// In characteristic p the Teichmuller representatives form the subfield
/// F_q of O, so each factor takes the exact values 1 / 0 and the series is
/// the exact characteristic function of the ball.  Over Q_p a difference of
/// distinct Teichmuller representatives need not be a (q-1)-st root of
/// unity, so there the values agree with the indicator modulo p only; the
/// exact indicator series can be produced with function_to_series instead.
inline QSimplifiedSeries ball_indicator_series(const LocalElem& a, int n, int precN) {
    const LocalField* f = a.field();
    if (!a.is_exact() && a.precN() < n)
        throw MathError("ball_indicator_series: insufficient precision for the ball");
    QSimplifiedSeries acc = QSimplifiedSeries::constant(f, LocalElem::one(f).truncate(precN));
    if (n == 0) return acc;
    LocalElem ae = a.is_exact() && a.precN() <= n ? a.truncate(n + 1) : a;
    auto omegas = teichmuller_digits(ae, n, precN);
    int q = f->residue_q();
    for (int j = 0; j < n; ++j) {
        // (X_j - w)^(q-1) expanded by exact binomials, then 1 - (...); all
        // coefficients live at the requested precision.
        QSimplifiedSeries pow(f);
        for (int k = 0; k <= q - 1; ++k) {
            LocalElem coeff = LocalElem::from_integer(f, binom_exact(q - 1, k)).truncate(precN);
            LocalElem wpow = (-omegas[j].truncate(precN)).pow(q - 1 - k);
            Monomial mon;
            if (k > 0) mon.emplace_back(j, k);
            pow.add_term(std::move(mon), coeff * wpow);
        }
        QSimplifiedSeries factor =
            QSimplifiedSeries::constant(f, LocalElem::one(f).truncate(precN)) - pow;
        acc = acc * factor;
    }
    return acc;
}

/// q_simplify(Y_pi^k) truncated to the variables X_0..X_(n-1), where
/// Y_pi = sum pi^j X_j is the image of the identity function.
inline QSimplifiedSeries analytic_power(const LocalField* f, int k, int n, int precN) {
    QSimplifiedSeries y(f);
    for (int j = 0; j < n; ++j)
        y.add_term({{j, 1}}, LocalElem::single_digit(f, 1, j).truncate(precN));
    QSimplifiedSeries acc = QSimplifiedSeries::constant(f, LocalElem::one(f).truncate(precN));
    for (int i = 0; i < k; ++i) acc = acc * y;
    return acc;
}

}  // namespace digitbasis
