#pragma once

// Refit suite: recomputes reference constants from the exact diagonalizations and
// compares each with its documented tolerance.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "stql/entangle.hpp"
#include "stql/hyperfine.hpp"

namespace stql {

struct CheckResult {
    std::string name;
    double reference = 0.0;
    double value = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool relative = true;  // tolerance is relative to |reference|, else absolute
    bool pass = false;
};

inline CheckResult make_check(std::string name, double reference, double value, double residual, double tol,
                              bool relative) {
    const double err = std::abs(value - reference);
    const bool ok = relative ? err <= tol * std::abs(reference) : err <= tol;
    return {std::move(name), reference, value, residual, tol, relative, ok};
}

/// Slope through the origin of the fitted mixing coefficient over w in [0.005, 0.1].
inline LeastSquaresFit mixing_slope(int J, int sign = +1) {
    std::vector<double> ws, cs;
    for (int k = 0; k < 20; ++k) {
        const double w = 0.005 + 0.005 * k;
        ws.push_back(w);
        cs.push_back(strong_field_mixing(J, w, sign).coefficient);
    }
    return fit_basis(ws, cs, {[](double w) { return w; }});
}

struct CosineReference {
    QubitType type;
    const char* element;
    double c0, c1, c2;
};

inline std::array<CosineReference, 6> table1_reference() {
    return {{{QubitType::I, "C0", -0.5, -0.00168, 0.0418},
             {QubitType::I, "C1", -1.0 / 6.0, 0.00526, 0.0218},
             {QubitType::I, "CX", std::sqrt(15.0) / 10.0, -0.00658, -0.0437},
             {QubitType::II, "C0", 0.5, -0.00347, -0.0213},
             {QubitType::II, "C1", -0.5, -0.00168, 0.0418},
             {QubitType::II, "CX", 0.0, 0.153, -0.0108}}};
}

inline std::vector<CheckResult> run_verification() {
    std::vector<CheckResult> out;

    const auto a = mixing_slope(1);
    const auto b = mixing_slope(2);
    out.push_back(make_check("mixing a/w", 0.1522, a.coefficients[0], a.residual_norm, 0.01, true));
    out.push_back(make_check("mixing b/w", 0.1789, b.coefficients[0], b.residual_norm, 0.01, true));

    const auto grid = table1_default_grid();
    const auto fits_i = refit_table1(QubitType::I, grid);
    const auto fits_ii = refit_table1(QubitType::II, grid);
    for (const auto& ref : table1_reference()) {
        const auto& fits = ref.type == QubitType::I ? fits_i : fits_ii;
        const Table1Fit* f = nullptr;
        for (const auto& x : fits)
            if (x.element == ref.element) f = &x;
        const std::string tag = std::string("cosines ") + to_string(ref.type) + ":" + ref.element;
        out.push_back(make_check(tag + " c0", ref.c0, f->c0, f->residual, 1e-6, false));
        const double tol = (ref.type == QubitType::I && std::string(ref.element) == "CX") ? 0.15 : 0.05;
        out.push_back(make_check(tag + " c1", ref.c1, f->c1, f->residual, tol, true));
    }

    for (const auto& k : refit_k_law(linear_grid(0.0, 1.0, 21)))
        out.push_back(make_check("k_law " + k.name, k.reference, k.fitted, k.residual, 0.05, true));

    for (auto type : {QubitType::I, QubitType::II})
        for (const auto& f : refit_appendixB(type, appendixB_default_grid(type))) {
            if (f.name == "I.d1_x") continue;  // informational
            if (f.name == "II.d1_w_exponent") {
                out.push_back(make_check("coefficients " + f.name, f.reference, f.fitted, f.residual, 0.05, false));
                continue;
            }
            // Signs differ between tables and eigenvector conventions; magnitudes are compared.
            const double tol = f.name.rfind("I.", 0) == 0 ? 0.05 : 0.10;
            out.push_back(make_check("coefficients " + f.name, std::abs(f.reference), std::abs(f.fitted), f.residual, tol, true));
        }
    return out;
}

}  // namespace stql
