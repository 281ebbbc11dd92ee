#pragma once

#include <string>

#include <json.hpp>

#include "baker_tate.hpp"
#include "basis.hpp"
#include "carlitz.hpp"
#include "charzero.hpp"
#include "hyperdiff.hpp"
#include "measures.hpp"

namespace digitbasis {

using Json = nlohmann::ordered_json;

// ---- fields ----------------------------------------------------------------

inline Json fieldspec_to_json(const FqField* F) {
    return Json{{"p", F->p()}, {"f", F->f()}, {"modulus", F->modulus()}};
}

inline const FqField* fieldspec_from_json(const Json& j) {
    int p = j.at("p").get<int>();
    int f = j.value("f", 1);
    if (j.contains("modulus")) return FqField::get(p, f, j.at("modulus").get<std::vector<int>>());
    return FqField::get(p, f);
}

inline Json local_field_to_json(const LocalField* L) {
    switch (L->kind()) {
        case FieldKind::Laurent:
            return Json{{"kind", "laurent"},
                        {"q", L->residue_q()},
                        {"residue_field", fieldspec_to_json(L->residue())}};
        case FieldKind::CompletionAtPi:
            return Json{{"kind", "completion_at_pi"},
                        {"r", L->base_field()->q()},
                        {"pi", L->pi().coeff_indices()},
                        {"residue_field", fieldspec_to_json(L->residue())}};
        case FieldKind::Padic:
            return Json{{"kind", "padic"}, {"p", L->padic_p()}};
    }
    throw InputError("local_field_to_json: bad kind");
}

inline const LocalField* local_field_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "laurent") {
        if (j.contains("residue_field"))
            return LocalField::laurent(fieldspec_from_json(j.at("residue_field")));
        int q = j.at("q").get<int>();
        int p = q, f = 1;
        for (int pp : {2, 3, 5, 7, 11, 13})
            if (q % pp == 0) {
                p = pp;
                f = 0;
                for (int t = q; t > 1; t /= pp) ++f;
                break;
            }
        return LocalField::laurent(p, f);
    }
    if (kind == "completion_at_pi") {
        int r = j.at("r").get<int>();
        const FqField* Fr = FqField::get(r, 1);
        Poly pi = Poly::from_indices(Fr, j.at("pi").get<std::vector<int>>());
        return LocalField::completion_at_pi(pi);
    }
    if (kind == "padic") return LocalField::padic(j.at("p").get<int>());
    throw InputError("local field: unknown kind '" + kind + "'");
}

// ---- elements --------------------------------------------------------------

inline Json elem_to_json(const LocalElem& x) {
    Json out;
    out["val"] = x.is_zero_at_precision() && x.is_exact() ? 0 : x.valuation_lower_bound();
    out["digits"] = x.window_digits();
    if (x.is_exact())
        out["precN"] = "exact";
    else
        out["precN"] = x.precN();
    return out;
}

inline LocalElem elem_from_json(const LocalField* L, const Json& j) {
    int val = j.value("val", 0);
    std::vector<int> digits = j.value("digits", std::vector<int>{});
    int prec = kExactPrec;
    if (j.contains("precN") && !j.at("precN").is_string()) prec = j.at("precN").get<int>();
    for (int d : digits)
        if (d < 0 || d >= L->residue_q()) throw InputError("element digit out of range");
    return LocalElem::from_digits(L, val, std::move(digits), prec);
}

// ---- tables, measures, certificates, coefficients ---------------------------

inline Json table_to_json(const FunctionTable& t) {
    Json vals = Json::array();
    for (auto& v : t.values) vals.push_back(elem_to_json(v));
    return Json{{"field", local_field_to_json(t.field)},
                {"level", t.level},
                {"precN", t.precN >= kExactPrec ? Json("exact") : Json(t.precN)},
                {"values", vals}};
}

inline FunctionTable table_from_json(const Json& j) {
    FunctionTable t;
    t.field = local_field_from_json(j.at("field"));
    t.level = j.at("level").get<int>();
    t.precN = kExactPrec;
    if (j.contains("precN") && !j.at("precN").is_string()) t.precN = j.at("precN").get<int>();
    for (auto& v : j.at("values")) t.values.push_back(elem_from_json(t.field, v));
    t.check_shape();
    return t;
}

inline Json measure_to_json(const Measure& m) {
    Json vals = Json::array();
    for (auto& v : m.values) vals.push_back(elem_to_json(v));
    return Json{{"field", local_field_to_json(m.field)},
                {"level", m.level},
                {"precN", m.precN >= kExactPrec ? Json("exact") : Json(m.precN)},
                {"values", vals}};
}

inline Measure measure_from_json(const Json& j) {
    Measure m;
    m.field = local_field_from_json(j.at("field"));
    m.level = j.at("level").get<int>();
    m.precN = kExactPrec;
    if (j.contains("precN") && !j.at("precN").is_string()) m.precN = j.at("precN").get<int>();
    for (auto& v : j.at("values")) m.values.push_back(elem_from_json(m.field, v));
    long long expect = 1;
    for (int i = 0; i < m.level; ++i) expect *= m.field->residue_q();
    if (static_cast<long long>(m.values.size()) != expect)
        throw InputError("measure: wrong number of balls");
    return m;
}

inline Json matrix_to_json(const ResidueMatrix& m) {
    Json rows = Json::array();
    for (size_t i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (size_t j = 0; j < m.cols; ++j) row.push_back(m.at(i, j).index());
        rows.push_back(row);
    }
    return rows;
}

inline Json witness_to_json(const Witness& w) {
    return Json{{"kind", w.kind}, {"i", w.i}, {"j", w.j}, {"seed", w.seed}, {"detail", w.detail}};
}

inline Json certificate_to_json(const Certificate& c) {
    Json out{{"family", c.family_label},
             {"mode", to_string(c.mode)},
             {"level", c.level},
             {"pass", c.pass}};
    if (c.evidence.rows > 0) out["evidence_matrix"] = matrix_to_json(c.evidence);
    if (c.witness) out["witness"] = witness_to_json(*c.witness);
    return out;
}

inline Json expansion_to_json(const std::string& basis_label, const Expansion& e) {
    Json coeffs = Json::array();
    for (size_t i = 0; i < e.coeffs.size(); ++i) {
        if (e.coeffs[i].truncate(e.precN).is_zero_at_precision()) continue;
        coeffs.push_back(Json{{"index", i}, {"coeff", elem_to_json(e.coeffs[i])}});
    }
    return Json{{"basis_label", basis_label}, {"precN", e.precN}, {"coeffs", coeffs}};
}

// ---- q-simplified series ----------------------------------------------------

inline Json series_to_json(const QSimplifiedSeries& s) {
    Json terms = Json::array();
    for (auto& [mon, c] : s.terms()) {
        Json exps = Json::array();
        for (auto& [idx, e] : mon) exps.push_back(Json::array({idx, e}));
        terms.push_back(Json{{"exponents", exps}, {"coeff", elem_to_json(c)}});
    }
    return Json{{"q", s.q()}, {"terms", terms}};
}

inline QSimplifiedSeries series_from_json(const LocalField* L, const Json& j) {
    QSimplifiedSeries s(L);
    if (j.contains("q") && j.at("q").get<int>() != L->residue_q())
        throw InputError("series: q does not match the field");
    for (auto& t : j.at("terms")) {
        Monomial mon;
        for (auto& pair : t.at("exponents"))
            mon.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
        std::sort(mon.begin(), mon.end());
        s.add_term(std::move(mon), elem_from_json(L, t.at("coeff")));
    }
    return s;
}

// ---- polynomials ------------------------------------------------------------

inline Json poly_to_json(const Poly& g) { return Json(g.coeff_indices()); }

inline Poly poly_from_json(const FqField* F, const Json& j) {
    return Poly::from_indices(F, j.get<std::vector<int>>());
}

// ---- families ---------------------------------------------------------------

/// Build the named family over the given base setting.  The lubin-tate
/// selector uses the standard Frobenius series X^q + pi X truncated to
/// max(q^level, degree_hint).
inline BasisFamily family_from_name(const std::string& name, const LocalField* L,
                                    int level_hint = 2, int degree_hint = 0) {
    auto need = [&](FieldKind k, const char* what) {
        if (L->kind() != k)
            throw InputError(std::string("family '") + what + "' needs a different base setting");
    };
    if (name == "carlitz") {
        need(FieldKind::Laurent, "carlitz");
        return local_carlitz_family(L->residue());
    }
    if (name == "carlitz-at-pi") {
        need(FieldKind::CompletionAtPi, "carlitz-at-pi");
        return global_carlitz_family(L->pi());
    }
    if (name == "hyperdiff") {
        need(FieldKind::Laurent, "hyperdiff");
        return local_hyperdiff_family(L->residue());
    }
    if (name == "hyperdiff-at-pi") {
        need(FieldKind::CompletionAtPi, "hyperdiff-at-pi");
        return completion_hyperdiff_family(L->pi());
    }
    if (name == "digit-binomial") {
        need(FieldKind::Padic, "digit-binomial");
        return digit_binomial_family(L->padic_p());
    }
    if (name == "baker") return baker_family(L);
    if (name == "lubin-tate") {
        if (L->kind() == FieldKind::CompletionAtPi)
            throw InputError("family 'lubin-tate' needs a p-adic or Laurent base");
        long long M = 1;
        for (int i = 0; i < level_hint; ++i) M *= L->residue_q();
        M = std::max(M, static_cast<long long>(degree_hint));
        return lubin_tate_family(
            LubinTateGroup::standard(L, static_cast<int>(M)));
    }
    throw InputError("unknown family '" + name + "'");
}

}  // namespace digitbasis
