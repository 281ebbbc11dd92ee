#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quotient.hpp"

namespace digitbasis {

enum class CertMode { Linear, Sublinear, General };

inline std::string to_string(CertMode m) {
    switch (m) {
        case CertMode::Linear: return "linear";
        case CertMode::Sublinear: return "sublinear";
        case CertMode::General: return "general";
    }
    return "?";
}

/// An indexed family of seed functions e_j on O, evaluable exactly on
/// canonical representatives, together with its digit base.
///
/// With q the residue size and b the digit base, q = b^subdeg; level n uses
/// the seeds j < subdeg*n, and the extended family is
/// f_i = prod_j e_j^{c_j} for the base-b digits c_j of i.
struct BasisFamily {
    const LocalField* field = nullptr;
    int digit_base = 0;
    int subdeg = 1;
    std::string label;
    CertMode default_mode = CertMode::General;
    /// Evaluate e_j at an exact representative; the result is exact where the
    /// seed permits and is always known at least modulo u^target.
    std::function<LocalElem(int j, const LocalElem& rep, int target)> seed;
    /// Declared precision-loss profile l(j): evaluating e_j on a level-n
    /// class (rather than an exact representative) determines the value only
    /// modulo u^(n - l(j)).  Informational; evaluation here always routes
    /// through exact representatives.
    std::function<int(int j)> loss = [](int) { return 0; };

    void validate() const {
        if (!field || !seed) throw InputError("BasisFamily: incomplete");
        long long q = 1;
        for (int i = 0; i < subdeg; ++i) q *= digit_base;
        if (q != field->residue_q())
            throw InputError("BasisFamily: digit base " + std::to_string(digit_base) +
                             "^" + std::to_string(subdeg) + " != residue size");
    }
    int seeds_at_level(int n) const { return subdeg * n; }
};

inline std::vector<int> base_digits(long long i, int b, int min_len = 0) {
    std::vector<int> d;
    while (i > 0) {
        d.push_back(static_cast<int>(i % b));
        i /= b;
    }
    while (static_cast<int>(d.size()) < min_len) d.push_back(0);
    return d;
}

/// f_i evaluated at an exact representative: the pointwise product of seed
/// powers over the base-b digits of i.  f_0 is identically 1 even when some
/// seed vanishes.
inline LocalElem digit_extend(const BasisFamily& fam, long long i, const LocalElem& rep,
                              int target) {
    if (i < 0) throw InputError("digit_extend: negative index");
    if (i == 0) return LocalElem::one(fam.field);
    LocalElem acc = LocalElem::one(fam.field);
    auto digits = base_digits(i, fam.digit_base);
    for (size_t j = 0; j < digits.size(); ++j) {
        if (digits[j] == 0) continue;
        acc = acc * fam.seed(static_cast<int>(j), rep, target).pow(digits[j]);
    }
    return acc;
}

/// Finite-level certificate for the digit-principle hypotheses.
struct Certificate {
    std::string family_label;
    CertMode mode = CertMode::General;
    int level = 0;
    bool pass = false;
    /// Linear/sublinear: the matrix of reduced seeds against the canonical
    /// module basis.  General: the bijection table, rows = points, cols =
    /// reduced seed values.
    ResidueMatrix evidence;
    std::optional<Witness> witness;
};

namespace detail {

/// Reduced values of seed j at every canonical representative of level n.
inline std::vector<FqElem> reduced_seed_table(const BasisFamily& fam, int j, int level) {
    auto reps = canonical_reps(fam.field, level);
    std::vector<FqElem> out;
    out.reserve(reps.size());
    for (auto& r : reps) {
        LocalElem v = fam.seed(j, r, 1);
        if (!v.is_zero_at_precision() && v.valuation() < 0)
            throw MathError("seed value not integral");
        out.push_back(v.reduce());
    }
    return out;
}

/// The canonical O/m^n module basis used for the evidence matrix: T^k for
/// Laurent, T^k (k < dn) for the sublinear completion matrix, pi^k for the
/// linear completion matrix.
inline std::vector<LocalElem> evidence_basis(const LocalField* f, CertMode mode, int count) {
    std::vector<LocalElem> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        if (f->kind() == FieldKind::Laurent) {
            out.push_back(LocalElem::single_digit(f, 1, k));
        } else if (f->kind() == FieldKind::CompletionAtPi) {
            if (mode == CertMode::Sublinear)
                out.push_back(LocalElem::from_poly(f, Poly::t_power(f->base_field(), k)));
            else
                out.push_back(LocalElem::single_digit(f, 1, k));
        } else {
            throw InputError("evidence_basis: no module basis in the p-adic setting");
        }
    }
    return out;
}

}  // namespace detail

/// Certify the digit-principle hypotheses at a finite level.
///
/// All modes check that the reduced seeds are constant on cosets of m^level
/// (probed one level deeper).  Then:
///   General   — x -> (e_0(x),...,e_{n-1}(x)) mod m is a bijection onto F^n.
///   Linear    — reductions are F-linear and form a basis of (O/m^n)^*;
///               evidence is the invertible matrix against T^k resp. pi^k.
///   Sublinear — reductions are F'-linear (F' the prime subfield), the
///               matrix against T^k (k < dn) is invertible, and the dn seeds
///               separate the points of O/m^n.
inline Certificate certify(const BasisFamily& fam, int level, CertMode mode) {
    fam.validate();
    Certificate cert;
    cert.family_label = fam.label;
    cert.mode = mode;
    cert.level = level;
    const LocalField* f = fam.field;
    const FqField* F = f->residue();
    int nseeds = fam.seeds_at_level(level);
    if (mode != CertMode::Sublinear && fam.subdeg != 1)
        throw InputError("certify: this family requires sublinear mode");
    if (mode == CertMode::Linear && f->kind() == FieldKind::Padic)
        throw InputError("certify: no linear functions in the characteristic-0 setting");

    long long npts = 1;
    for (int i = 0; i < level; ++i) npts *= F->q();

    // Reduced seed tables at this level and one deeper.
    std::vector<std::vector<FqElem>> red(nseeds), red_deep(nseeds);
    for (int j = 0; j < nseeds; ++j) {
        red[j] = detail::reduced_seed_table(fam, j, level);
        red_deep[j] = detail::reduced_seed_table(fam, j, level + 1);
    }

    // Coset constancy, probed one level deeper: the class of a level-(n+1)
    // representative modulo m^n is the representative with index mod q^n.
    for (int j = 0; j < nseeds; ++j)
        for (long long k = 0; k < npts * F->q(); ++k)
            if (red_deep[j][k] != red[j][k % npts]) {
                cert.witness = Witness{"constancy", k, k % npts, j,
                                       "reduced seed differs across a coset of m^level"};
                return cert;
            }

    if (mode == CertMode::General) {
        cert.evidence = ResidueMatrix::make(F, npts, nseeds);
        for (long long x = 0; x < npts; ++x)
            for (int j = 0; j < nseeds; ++j) cert.evidence.at(x, j) = red[j][x];
        for (long long x = 0; x < npts; ++x)
            for (long long y = x + 1; y < npts; ++y) {
                bool same = true;
                for (int j = 0; j < nseeds && same; ++j) same = red[j][x] == red[j][y];
                if (same) {
                    cert.witness = Witness{"collision", x, y, -1,
                                           "reduced seed tuple does not separate the pair"};
                    return cert;
                }
            }
        cert.pass = true;
        return cert;
    }

    // Linearity of reductions.  Scalars run over F for linear mode and over
    // the prime subfield for sublinear mode; in the completion, F-scalar
    // action is multiplication by the Teichmuller lift.
    auto reduced_at_class = [&](int j, const LocalElem& x) {
        return red[j][class_index(x, level)];
    };
    auto reps = canonical_reps(f, level);
    for (int j = 0; j < nseeds; ++j) {
        for (long long x = 0; x < npts; ++x)
            for (long long y = 0; y < npts; ++y) {
                LocalElem s = (reps[x] + reps[y]).truncate(level);
                if (reduced_at_class(j, s) != red[j][x] + red[j][y]) {
                    cert.witness = Witness{"linearity", x, y, j, "additivity fails"};
                    return cert;
                }
            }
        int scalar_count = (mode == CertMode::Linear) ? F->q() : F->p();
        for (int c = 0; c < scalar_count; ++c) {
            LocalElem lift = (mode == CertMode::Linear)
                                 ? teichmuller_lift(f, F->elem(c), level)
                                 : LocalElem::from_integer(f, c).truncate(level);
            FqElem cbar = lift.is_zero_at_precision() ? F->zero() : lift.reduce();
            for (long long x = 0; x < npts; ++x) {
                LocalElem cx = (lift * reps[x]).truncate(level);
                if (reduced_at_class(j, cx) != cbar * red[j][x]) {
                    cert.witness = Witness{"linearity", x, c, j, "scalar homogeneity fails"};
                    return cert;
                }
            }
        }
    }

    // Evidence matrix against the canonical module basis.
    auto basis = detail::evidence_basis(f, mode, nseeds);
    cert.evidence = ResidueMatrix::make(F, nseeds, nseeds);
    for (int j = 0; j < nseeds; ++j) {
        cert.evidence.row_labels.push_back("ebar_" + std::to_string(j));
        for (int k = 0; k < nseeds; ++k) {
            LocalElem v = fam.seed(j, basis[k].truncate(kExactPrec), 1);
            if (!v.is_zero_at_precision() && v.valuation() < 0)
                throw MathError("seed value not integral");
            cert.evidence.at(j, k) = v.reduce();
        }
    }
    auto rk = rank_over_residue(cert.evidence);
    if (!rk.invertible) {
        cert.witness = Witness{"dependency", -1, -1, -1, "evidence matrix is singular"};
        return cert;
    }

    if (mode == CertMode::Sublinear) {
        // Point separation by the dn reduced seeds.
        for (long long x = 0; x < npts; ++x)
            for (long long y = x + 1; y < npts; ++y) {
                bool same = true;
                for (int j = 0; j < nseeds && same; ++j) same = red[j][x] == red[j][y];
                if (same) {
                    cert.witness = Witness{"collision", x, y, -1,
                                           "seeds do not separate the points"};
                    return cert;
                }
            }
    }
    cert.pass = true;
    return cert;
}

inline Certificate certify(const BasisFamily& fam, int level) {
    return certify(fam, level, fam.default_mode);
}

/// Independent span oracle for the digit principle's conclusion: the q^n
/// reduced digit products f_i (i < q^n) have rank q^n in Maps(O/m^n, F).
struct SpanResult {
    bool ok = false;
    size_t rank = 0;
    std::vector<FqElem> dependency;  // witness when not ok
};

inline SpanResult span_check(const BasisFamily& fam, int level) {
    fam.validate();
    const FqField* F = fam.field->residue();
    int nseeds = fam.seeds_at_level(level);
    long long npts = 1;
    for (int i = 0; i < level; ++i) npts *= F->q();
    std::vector<std::vector<FqElem>> red(nseeds);
    for (int j = 0; j < nseeds; ++j) red[j] = detail::reduced_seed_table(fam, j, level);

    ResidueMatrix m = ResidueMatrix::make(F, npts, npts);  // rows = functions, cols = points
    for (long long i = 0; i < npts; ++i) {
        auto digits = base_digits(i, fam.digit_base);
        for (long long x = 0; x < npts; ++x) {
            FqElem v = F->one();
            for (size_t j = 0; j < digits.size(); ++j)
                if (digits[j] != 0) v *= red[j][x].pow(digits[j]);
            m.at(i, x) = v;
        }
    }
    auto rk = rank_over_residue(m);
    SpanResult out;
    out.rank = rk.rank;
    out.ok = rk.rank == static_cast<size_t>(npts);
    out.dependency = rk.dependency;
    return out;
}

/// Valuation-style norm report: |x| = q^(-val); zero_at_prec means only the
/// bound |x| <= q^(-precN) is known.
struct NormValue {
    int val = kExactPrec;
    bool zero_at_prec = true;
    bool operator==(const NormValue& o) const {
        return val == o.val && zero_at_prec == o.zero_at_prec;
    }
};

inline NormValue sup_norm(const FunctionTable& t) {
    NormValue n;
    for (auto& v : t.values)
        if (!v.is_zero_at_precision()) {
            n.zero_at_prec = false;
            n.val = std::min(n.val, v.valuation());
        } else {
            n.val = std::min(n.val, v.precN());
        }
    return n;
}

inline NormValue coeff_norm(const std::vector<LocalElem>& coeffs) {
    NormValue n;
    for (auto& v : coeffs)
        if (!v.is_zero_at_precision()) {
            n.zero_at_prec = false;
            n.val = std::min(n.val, v.valuation());
        } else {
            n.val = std::min(n.val, v.precN());
        }
    return n;
}

/// Expansion of a tabulated function in a certified family: coefficients a_i
/// (i < q^level) with the precision actually delivered.
struct Expansion {
    std::vector<LocalElem> coeffs;
    int precN = 0;
};

/// One-time factorization of the evaluation matrix (f_i(x_v)) modulo
/// u^precN, reusable across many tables at the same (level, precN).
///
/// Solves by Gauss-Jordan with first-unit-pivot-in-row-major-order; pivots
/// are units exactly when the family's reduced products are independent, so
/// a missing unit pivot is reported as an uncertified basis.
class ExpansionPlan {
public:
    ExpansionPlan(const BasisFamily& fam, int level, int precN)
        : field_(fam.field), level_(level), precN_(precN) {
        fam.validate();
        long long npts = 1;
        for (int i = 0; i < level; ++i) npts *= fam.field->residue_q();
        n_ = npts;
        auto reps = canonical_reps(fam.field, level);
        // inv_ starts as [M | I] and ends as [I | M^-1], flattened rows of 2n.
        std::vector<LocalElem> w;
        w.reserve(n_ * 2 * n_);
        for (long long v = 0; v < n_; ++v) {
            for (long long i = 0; i < n_; ++i)
                w.push_back(digit_extend(fam, i, reps[v], precN).truncate(precN));
            for (long long i = 0; i < n_; ++i)
                w.push_back(v == i ? LocalElem::one(field_).truncate(precN)
                                   : LocalElem::zero_at(field_, precN));
        }
        size_t C = 2 * n_;
        for (long long col = 0; col < n_; ++col) {
            long long piv = -1;
            for (long long r = col; r < n_; ++r) {
                const LocalElem& e = w[r * C + col];
                if (!e.is_zero_at_precision() && e.valuation() == 0) {
                    piv = r;
                    break;
                }
            }
            if (piv < 0)
                throw MathError("expand: no unit pivot (basis not certified at this level)");
            if (piv != col)
                for (size_t j = 0; j < C; ++j) std::swap(w[piv * C + j], w[col * C + j]);
            LocalElem pinv = w[col * C + col].truncate(precN).inverse();
            for (size_t j = 0; j < C; ++j) w[col * C + j] = (w[col * C + j] * pinv).truncate(precN);
            for (long long r = 0; r < n_; ++r) {
                if (r == col) continue;
                LocalElem factor = w[r * C + col];
                if (factor.is_zero_at_precision()) continue;
                for (size_t j = 0; j < C; ++j)
                    w[r * C + j] = (w[r * C + j] - factor * w[col * C + j]).truncate(precN);
            }
        }
        inv_.reserve(n_ * n_);
        for (long long r = 0; r < n_; ++r)
            for (long long j = 0; j < n_; ++j) inv_.push_back(w[r * C + n_ + j]);
    }

    /// Coefficients of the table in the family; the table must match the
    /// plan's field and level.  Non-integral tables are scaled by a power of
    /// the uniformizer before solving and the coefficients scaled back.
    Expansion expand(const FunctionTable& t) const {
        if (t.field != field_ || t.level != level_)
            throw InputError("expand: table does not match plan");
        t.check_shape();
        int shift = std::min(0, t.min_valuation());  // scale by u^(-shift) >= 1
        int sprec = std::min(precN_, prec_add(t.precN, -shift));
        for (auto& v : t.values) sprec = std::min(sprec, prec_add(v.precN(), -shift));
        if (sprec <= 0) throw MathError("expand: precision exhausted by scaling");
        Expansion out;
        out.precN = sprec + shift;
        out.coeffs.reserve(n_);
        for (long long i = 0; i < n_; ++i) {
            LocalElem acc = LocalElem::zero_at(field_, sprec);
            for (long long v = 0; v < n_; ++v)
                acc = acc + inv_[i * n_ + v] * t.values[v].shift(-shift);
            out.coeffs.push_back(acc.truncate(sprec).shift(shift));
        }
        return out;
    }

    long long points() const { return n_; }

private:
    const LocalField* field_;
    int level_, precN_;
    long long n_ = 0;
    std::vector<LocalElem> inv_;
};

inline Expansion expand(const FunctionTable& t, const BasisFamily& fam) {
    int prec = t.precN;
    for (auto& v : t.values) prec = std::min(prec, v.precN());
    if (prec >= kExactPrec)
        throw InputError("expand: exact tables need an explicit precision; truncate first");
    int shift = std::min(0, t.min_valuation());
    ExpansionPlan plan(fam, t.level, prec - shift);  // shift <= 0 widens the working window
    return plan.expand(t);
}

/// Re-evaluate an expansion at an exact representative.
inline LocalElem evaluate_expansion(const BasisFamily& fam, const std::vector<LocalElem>& coeffs,
                                    const LocalElem& rep, int target) {
    LocalElem acc = LocalElem::zero_at(fam.field, target);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i].is_zero_at_precision()) continue;
        acc = acc + coeffs[i] * digit_extend(fam, static_cast<long long>(i), rep, target);
    }
    return acc;
}

}  // namespace digitbasis
