#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "local.hpp"

namespace digitbasis {

/// A continuous function represented by its values on the canonical
/// representatives of O/m^level, all known modulo u^precN (or exactly).
/// Values are stored in canonical point order (index = base-q digits).
struct FunctionTable {
    const LocalField* field = nullptr;
    int level = 0;
    int precN = kExactPrec;
    std::vector<LocalElem> values;

    static FunctionTable tabulate(const LocalField* f, int level, int precN,
                                  const std::function<LocalElem(const LocalElem&)>& fn) {
        FunctionTable t;
        t.field = f;
        t.level = level;
        t.precN = precN;
        auto reps = canonical_reps(f, level);
        t.values.reserve(reps.size());
        for (auto& r : reps) t.values.push_back(fn(r).truncate(precN));
        return t;
    }

    size_t size() const { return values.size(); }
    void check_shape() const {
        long long n = 1;
        for (int i = 0; i < level; ++i) n *= field->residue_q();
        if (static_cast<long long>(values.size()) != n)
            throw InputError("FunctionTable: wrong number of values");
    }
    /// True when every value lies in O (valuation >= 0 as far as known).
    bool is_integral() const {
        for (auto& v : values)
            if (!v.is_zero_at_precision() && v.valuation() < 0) return false;
        return true;
    }
    /// Minimum valuation over the table; 0 for an empty/zero table.
    int min_valuation() const {
        int mv = 0;
        for (auto& v : values)
            if (!v.is_zero_at_precision()) mv = std::min(mv, v.valuation());
        return mv;
    }
    FunctionTable operator+(const FunctionTable& o) const {
        if (field != o.field || level != o.level)
            throw InputError("FunctionTable: shape mismatch in +");
        FunctionTable t;
        t.field = field;
        t.level = level;
        t.precN = prec_min(precN, o.precN);
        t.values.reserve(values.size());
        for (size_t i = 0; i < values.size(); ++i) t.values.push_back(values[i] + o.values[i]);
        return t;
    }
};

/// Rectangular matrix over a residue field with optional row/column labels.
struct ResidueMatrix {
    const FqField* field = nullptr;
    size_t rows = 0, cols = 0;
    std::vector<FqElem> a;  // row-major
    std::vector<std::string> row_labels, col_labels;

    static ResidueMatrix make(const FqField* f, size_t r, size_t c) {
        ResidueMatrix m;
        m.field = f;
        m.rows = r;
        m.cols = c;
        m.a.assign(r * c, f->zero());
        return m;
    }
    FqElem& at(size_t i, size_t j) { return a[i * cols + j]; }
    FqElem at(size_t i, size_t j) const { return a[i * cols + j]; }
    bool is_square() const { return rows == cols; }
};

struct RankResult {
    size_t rank = 0;
    bool invertible = false;  // meaningful for square input
    /// Columns of a kernel vector witnessing a dependency (empty if full
    /// column rank): coefficients c with M c = 0, c != 0.
    std::vector<FqElem> dependency;
};

/// Rank via reduced row echelon form with deterministic pivoting: columns in
/// order, first row with a nonzero entry.  When the columns are dependent,
/// one kernel vector is read off the RREF as a witness.
inline RankResult rank_over_residue(const ResidueMatrix& m) {
    RankResult out;
    if (m.rows == 0 || m.cols == 0) {
        out.invertible = m.rows == m.cols;
        return out;
    }
    const FqField* F = m.field;
    std::vector<FqElem> w = m.a;
    size_t R = m.rows, C = m.cols;
    std::vector<size_t> pivot_row_of_col(C, R);  // R = no pivot
    size_t rank = 0;
    for (size_t col = 0; col < C && rank < R; ++col) {
        size_t piv = R;
        for (size_t i = rank; i < R; ++i)
            if (!w[i * C + col].is_zero()) {
                piv = i;
                break;
            }
        if (piv == R) continue;
        if (piv != rank)
            for (size_t j = 0; j < C; ++j) std::swap(w[piv * C + j], w[rank * C + j]);
        FqElem pinv = w[rank * C + col].inverse();
        for (size_t j = 0; j < C; ++j) w[rank * C + j] *= pinv;
        for (size_t i = 0; i < R; ++i) {
            if (i == rank || w[i * C + col].is_zero()) continue;
            FqElem factor = w[i * C + col];
            for (size_t j = 0; j < C; ++j) w[i * C + j] -= factor * w[rank * C + j];
        }
        pivot_row_of_col[col] = rank;
        ++rank;
    }
    out.rank = rank;
    out.invertible = m.is_square() && rank == m.rows;
    if (rank < C) {
        size_t freeCol = C;
        for (size_t j = 0; j < C; ++j)
            if (pivot_row_of_col[j] == R) {
                freeCol = j;
                break;
            }
        out.dependency.assign(C, F->zero());
        out.dependency[freeCol] = F->one();
        for (size_t j = 0; j < C; ++j)
            if (pivot_row_of_col[j] != R)
                out.dependency[j] = -w[pivot_row_of_col[j] * C + freeCol];
    }
    return out;
}

/// Reduce an integral FunctionTable modulo m, yielding residue-field values
/// in canonical point order.  Throws MathError on a non-integral value.
inline std::vector<FqElem> reduce_table(const FunctionTable& t) {
    std::vector<FqElem> out;
    out.reserve(t.values.size());
    for (auto& v : t.values) {
        if (!v.is_zero_at_precision() && v.valuation() < 0)
            throw MathError("reduce_table: value with negative valuation");
        out.push_back(v.reduce());
    }
    return out;
}

/// Failure witness for point-separation / linearity / constancy checks.
struct Witness {
    std::string kind;  // "collision", "linearity", "constancy", "dependency"
    long long i = -1, j = -1;  // point indices involved
    int seed = -1;             // seed index involved, if any
    std::string detail;
};

/// The indicator h_v(w) = prod_j (1 - (seed_j(w) - seed_j(v))^(q-1)) built
/// from residue-valued seed tables (each of size q^n, canonical order).
/// Returns the table of h_v, or a witness if the seeds fail to separate v
/// from some other point.
struct IndicatorResult {
    bool ok = false;
    std::vector<FqElem> values;  // size q^n when ok
    Witness witness;
    /// Factored description: exponent of each seed stays <= q-1.
    std::string factored;
};

inline IndicatorResult build_indicator(long long v,
                                       const std::vector<std::vector<FqElem>>& seeds,
                                       const FqField* F) {
    IndicatorResult out;
    if (seeds.empty()) throw InputError("build_indicator: no seeds");
    size_t npts = seeds[0].size();
    int q = F->q();
    out.values.assign(npts, F->one());
    for (size_t j = 0; j < seeds.size(); ++j) {
        if (seeds[j].size() != npts) throw InputError("build_indicator: ragged seed tables");
        for (size_t w = 0; w < npts; ++w) {
            FqElem d = seeds[j][w] - seeds[j][static_cast<size_t>(v)];
            out.values[w] = out.values[w] * (F->one() - d.pow(q - 1));
        }
    }
    for (size_t w = 0; w < npts; ++w) {
        bool should_be_one = static_cast<long long>(w) == v;
        if (out.values[w] == (should_be_one ? F->one() : F->zero())) continue;
        out.witness = Witness{"collision", v, static_cast<long long>(w), -1,
                              "seeds do not separate the pair"};
        return out;
    }
    out.ok = true;
    out.factored = "prod_j (1 - (e_j(w) - e_j(v))^" + std::to_string(q - 1) + ")";
    return out;
}

}  // namespace digitbasis
