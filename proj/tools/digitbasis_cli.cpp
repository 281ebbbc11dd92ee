// Command-line front end: every module exposed as a subcommand with a single
// JSON I/O schema.  Results go to stdout, diagnostics to stderr.  Exit codes:
// 0 success, 1 mathematical failure (failed certificate, precision
// exhaustion), 2 input/schema error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "digitbasis/json_io.hpp"

using namespace digitbasis;

namespace {

Json read_payload(const std::string& spec) {
    if (spec.empty()) throw InputError("missing --json payload");
    std::string text;
    if (spec == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else if (!spec.empty() && (spec[0] == '{' || spec[0] == '[')) {
        text = spec;  // inline JSON
    } else {
        std::ifstream in(spec);
        if (!in) throw InputError("cannot open payload file: " + spec);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed JSON payload: ") + e.what());
    }
}

Json parse_inline(const std::string& text, const char* what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed ") + what + ": " + e.what());
    }
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

CertMode mode_from_name(const std::string& m) {
    if (m == "linear") return CertMode::Linear;
    if (m == "sublinear") return CertMode::Sublinear;
    if (m == "general") return CertMode::General;
    throw InputError("unknown mode '" + m + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"digitbasis: orthonormal bases of continuous functions on local-field "
                 "integer rings via digit expansions"};
    app.require_subcommand(1);

    std::string field_json, family = "carlitz", mode, json_payload, what = "e";
    std::string frobenius_json, a_json, input_json;
    int level = 2, precN = 4, jidx = 0;
    long long index = 0;
    int degree = 0;

    auto* certify_cmd = app.add_subcommand("certify", "certify a family at a finite level");
    certify_cmd->add_option("--family", family)->required();
    certify_cmd->add_option("--field", field_json)->required();
    certify_cmd->add_option("--level", level)->required();
    certify_cmd->add_option("--mode", mode, "linear|sublinear|general (default: family's mode)");

    auto* expand_cmd = app.add_subcommand("expand", "expand a tabulated function in a family");
    expand_cmd->add_option("--family", family)->required();
    expand_cmd->add_option("--json", json_payload, "FunctionTable payload (path, inline, or -)")
        ->required();

    auto* eval_cmd = app.add_subcommand("eval", "evaluate the digit-extended f_i at a point");
    eval_cmd->add_option("--family", family)->required();
    eval_cmd->add_option("--field", field_json)->required();
    eval_cmd->add_option("--index", index)->required();
    eval_cmd->add_option("--precN", precN);
    eval_cmd->add_option("--json", json_payload, "point (LocalElem payload)")->required();

    auto* carlitz_cmd = app.add_subcommand("carlitz", "emit Carlitz objects over F_r[T]");
    int rsize = 2;
    carlitz_cmd->add_option("--r", rsize)->required();
    carlitz_cmd->add_option("--what", what, "e|D|E|script-E|factorial");
    carlitz_cmd->add_option("--j", jidx);
    carlitz_cmd->add_option("--i", index);

    auto* hyper_cmd = app.add_subcommand("hyperdiff", "hyperdifferential operators");
    auto* hyper_apply = hyper_cmd->add_subcommand("apply", "apply D_j to a polynomial or element");
    hyper_apply->add_option("--j", jidx)->required();
    hyper_apply->add_option("--field", field_json)->required();
    hyper_apply->add_option("--input", input_json, "{\"poly\": [...]} or a LocalElem payload")
        ->required();

    auto* lt_cmd = app.add_subcommand("lubin-tate", "Lubin-Tate endomorphism series");
    lt_cmd->add_option("--field", field_json)->required();
    lt_cmd->add_option("--frobenius", frobenius_json,
                       "coefficient array (ints or LocalElem payloads); default X^q + pi X");
    lt_cmd->add_option("--a", a_json, "the multiplier a (LocalElem payload or integer)")
        ->required();
    lt_cmd->add_option("--degree", degree, "truncation degree M")->required();
    lt_cmd->add_option("--precN", precN);

    auto* baker_cmd = app.add_subcommand("baker", "evaluate the Baker basis function B_m");
    baker_cmd->add_option("--field", field_json)->required();
    baker_cmd->add_option("--m", index)->required();
    baker_cmd->add_option("--precN", precN);
    baker_cmd->add_option("--json", json_payload, "point (LocalElem payload)")->required();

    auto* tate_cmd = app.add_subcommand("tate", "the q-simplified Tate-series model");
    std::string tate_op;
    auto* tate_simplify = tate_cmd->add_subcommand("simplify", "q-simplify a series");
    tate_simplify->add_option("--field", field_json)->required();
    tate_simplify->add_option("--json", json_payload)->required();
    auto* tate_eval = tate_cmd->add_subcommand("eval", "evaluate a series at a point");
    tate_eval->add_option("--field", field_json)->required();
    tate_eval->add_option("--json", json_payload, "{\"series\": ..., \"point\": ...}")->required();
    tate_eval->add_option("--precN", precN);
    auto* tate_tofn = tate_cmd->add_subcommand("to-function", "tabulate a series on O/m^level");
    tate_tofn->add_option("--field", field_json)->required();
    tate_tofn->add_option("--json", json_payload)->required();
    tate_tofn->add_option("--level", level)->required();
    tate_tofn->add_option("--precN", precN);
    auto* tate_fromfn = tate_cmd->add_subcommand("from-function", "Baker-expand a table");
    tate_fromfn->add_option("--json", json_payload, "FunctionTable payload")->required();

    auto* measure_cmd = app.add_subcommand("measure", "measures and the divided-power transform");
    auto* measure_transform_cmd =
        measure_cmd->add_subcommand("transform", "divided power series of a measure");
    measure_transform_cmd->add_option("--family", family, "default: carlitz");
    measure_transform_cmd->add_option("--json", json_payload, "Measure payload")->required();
    auto* measure_convolve_cmd = measure_cmd->add_subcommand("convolve", "convolve two measures");
    measure_convolve_cmd->add_option("--json", json_payload, "{\"nu\": ..., \"mu\": ...}")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (certify_cmd->parsed()) {
            const LocalField* L = local_field_from_json(parse_inline(field_json, "--field"));
            BasisFamily fam = family_from_name(family, L, level);
            Certificate cert =
                mode.empty() ? certify(fam, level) : certify(fam, level, mode_from_name(mode));
            emit(certificate_to_json(cert));
            if (!cert.pass) {
                std::cerr << "certification failed (witness reported)\n";
                return 1;
            }
            return 0;
        }
        if (expand_cmd->parsed()) {
            FunctionTable t = table_from_json(read_payload(json_payload));
            BasisFamily fam = family_from_name(family, t.field, t.level);
            Expansion ex = expand(t, fam);
            emit(expansion_to_json(fam.label, ex));
            return 0;
        }
        if (eval_cmd->parsed()) {
            const LocalField* L = local_field_from_json(parse_inline(field_json, "--field"));
            BasisFamily fam = family_from_name(family, L, level);
            LocalElem x = elem_from_json(L, read_payload(json_payload));
            emit(elem_to_json(digit_extend(fam, index, x, precN)));
            return 0;
        }
        if (carlitz_cmd->parsed()) {
            const FqField* Fr = FqField::get(rsize == 4 ? 2 : rsize, rsize == 4 ? 2 : 1);
            if (rsize != Fr->q()) throw InputError("unsupported r");
            CarlitzContext ctx(Fr);
            Json out;
            out["r"] = rsize;
            if (what == "e") {
                QPolynomial e = ctx.e(jidx);
                Json coeffs = Json::array();
                for (auto& c : e.coeff) coeffs.push_back(poly_to_json(c));
                out["what"] = "e";
                out["j"] = jidx;
                out["coeff_of_x_power_r^k"] = coeffs;
            } else if (what == "D") {
                out["what"] = "D";
                out["j"] = jidx;
                out["coeffs"] = poly_to_json(ctx.D(jidx));
            } else if (what == "E") {
                QPolynomial e = ctx.e(jidx);
                Json coeffs = Json::array();
                for (auto& c : e.coeff) coeffs.push_back(poly_to_json(c));
                out["what"] = "E";
                out["j"] = jidx;
                out["numerator_coeff_of_x_power_r^k"] = coeffs;
                out["denominator"] = poly_to_json(ctx.D(jidx));
            } else if (what == "script-E") {
                out["what"] = "script-E";
                out["i"] = index;
                Json factors = Json::array();
                auto digits = base_digits(index, rsize);
                for (size_t j = 0; j < digits.size(); ++j)
                    if (digits[j] != 0)
                        factors.push_back(Json{{"j", j}, {"exponent", digits[j]}});
                out["factors"] = factors;
                out["factorial"] = poly_to_json(ctx.factorial(index));
            } else if (what == "factorial") {
                out["what"] = "factorial";
                out["i"] = index;
                out["coeffs"] = poly_to_json(ctx.factorial(index));
            } else {
                throw InputError("carlitz: --what must be e|D|E|script-E|factorial");
            }
            emit(out);
            return 0;
        }
        if (hyper_apply->parsed()) {
            const LocalField* L = local_field_from_json(parse_inline(field_json, "--field"));
            Json payload = read_payload(input_json);
            if (payload.contains("poly")) {
                const FqField* F = L->kind() == FieldKind::CompletionAtPi ? L->base_field()
                                                                          : L->residue();
                Poly g = poly_from_json(F, payload.at("poly"));
                emit(Json{{"poly", poly_to_json(hyperdiff_poly(jidx, g))}});
            } else {
                LocalElem x = elem_from_json(L, payload);
                emit(elem_to_json(hyperdiff_local(jidx, x)));
            }
            return 0;
        }
        if (lt_cmd->parsed()) {
            const LocalField* L = local_field_from_json(parse_inline(field_json, "--field"));
            std::shared_ptr<LubinTateGroup> G;
            if (frobenius_json.empty()) {
                G = LubinTateGroup::standard(L, degree);
            } else {
                Json fj = parse_inline(frobenius_json, "--frobenius");
                std::vector<LocalElem> coeffs;
                for (auto& c : fj) {
                    if (c.is_number_integer())
                        coeffs.push_back(LocalElem::from_integer(L, c.get<long long>()));
                    else
                        coeffs.push_back(elem_from_json(L, c));
                }
                G = std::make_shared<LubinTateGroup>(L, std::move(coeffs), degree);
            }
            Json aj = parse_inline(a_json, "--a");
            LocalElem a = aj.is_number_integer()
                              ? LocalElem::from_integer(L, aj.get<long long>())
                              : elem_from_json(L, aj);
            PowerSeries u = G->endomorphism(a, degree, precN);
            Json coeffs = Json::array();
            for (int n = 0; n <= u.truncation(); ++n) coeffs.push_back(elem_to_json(u.coeff(n)));
            emit(Json{{"degree", degree}, {"precN", precN}, {"coeffs", coeffs}});
            return 0;
        }
        if (baker_cmd->parsed()) {
            const LocalField* L = local_field_from_json(parse_inline(field_json, "--field"));
            BasisFamily fam = baker_family(L);
            LocalElem x = elem_from_json(L, read_payload(json_payload));
            emit(elem_to_json(digit_extend(fam, index, x, precN)));
            return 0;
        }
        if (tate_simplify->parsed()) {
            const LocalField* L = local_field_from_json(parse_inline(field_json, "--field"));
            emit(series_to_json(series_from_json(L, read_payload(json_payload))));
            return 0;
        }
        if (tate_eval->parsed()) {
            const LocalField* L = local_field_from_json(parse_inline(field_json, "--field"));
            Json payload = read_payload(json_payload);
            QSimplifiedSeries s = series_from_json(L, payload.at("series"));
            LocalElem x = elem_from_json(L, payload.at("point"));
            emit(elem_to_json(evaluate_at_point(s, x, precN)));
            return 0;
        }
        if (tate_tofn->parsed()) {
            const LocalField* L = local_field_from_json(parse_inline(field_json, "--field"));
            QSimplifiedSeries s = series_from_json(L, read_payload(json_payload));
            emit(table_to_json(series_to_function(s, level, precN)));
            return 0;
        }
        if (tate_fromfn->parsed()) {
            FunctionTable t = table_from_json(read_payload(json_payload));
            emit(series_to_json(function_to_series(t)));
            return 0;
        }
        if (measure_transform_cmd->parsed()) {
            Measure nu = measure_from_json(read_payload(json_payload));
            BasisFamily fam = family_from_name(family, nu.field, nu.level);
            DividedPowerSeries s = measure_transform(nu, fam);
            Json coeffs = Json::array();
            for (auto& c : s.c) coeffs.push_back(elem_to_json(c));
            emit(Json{{"basis_label", fam.label}, {"coeffs", coeffs}});
            return 0;
        }
        if (measure_convolve_cmd->parsed()) {
            Json payload = read_payload(json_payload);
            Measure nu = measure_from_json(payload.at("nu"));
            Measure mu = measure_from_json(payload.at("mu"));
            emit(measure_to_json(convolve(nu, mu)));
            return 0;
        }
        std::cerr << "input error: no subcommand action\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const MathError& e) {
        std::cerr << "math failure: " << e.what() << "\n";
        return 1;
    }
}
