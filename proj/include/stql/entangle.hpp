#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stql/linalg.hpp"
#include "stql/pair.hpp"

namespace stql {

/// Pure-state concurrence 2|ad - bc| of a normalized quadruple (a, b, c, d).
inline double concurrence_pure(const std::array<double, 4>& q) {
    const double n2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-8) throw std::invalid_argument("concurrence_pure: state not normalized");
    return std::clamp(2.0 * std::abs(q[0] * q[3] - q[1] * q[2]), 0.0, 1.0);
}

inline double concurrence_pure(const std::array<std::complex<double>, 4>& q) {
    double n2 = 0.0;
    for (const auto& c : q) n2 += std::norm(c);
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-8) throw std::invalid_argument("concurrence_pure: state not normalized");
    return std::clamp(2.0 * std::abs(q[0] * q[3] - q[1] * q[2]), 0.0, 1.0);
}

inline double k_law(double x) { return 0.03752 + 0.00312 * x + 0.00029 * x * x; }

inline double k_law(double x, double x_prime) { return std::sqrt(k_law(x) * k_law(x_prime)); }

struct TwoLevelResult {
    double c12 = 0.0;
    double alpha_plus = 0.0;
    double alpha_minus = 0.0;
    std::array<double, 2> psi_plus{};   // (|01>, |10>) coefficients
    std::array<double, 2> psi_minus{};
    bool degenerate = false;            // delta = 0: the model has no coupling
};

/// Antidiagonal two-level model for the middle pair; C12 is the same on both branches.
inline TwoLevelResult two_level_concurrence(double e2, double e3, double delta) {
    TwoLevelResult r;
    if (delta == 0.0) {
        r.degenerate = true;
        r.psi_plus = {0.0, 1.0};
        r.psi_minus = {1.0, 0.0};
        return r;
    }
    const double d = e3 - e2;
    const double root = std::hypot(d, 2.0 * delta);
    // Each root computed without cancellation; alpha_+ alpha_- = -1.
    if (d >= 0.0) {
        r.alpha_plus = (d + root) / (2.0 * delta);
        r.alpha_minus = -1.0 / r.alpha_plus;
    } else {
        r.alpha_minus = (d - root) / (2.0 * delta);
        r.alpha_plus = -1.0 / r.alpha_minus;
    }
    auto psi = [](double a) {
        const double n = std::sqrt(1.0 + a * a);
        return std::array<double, 2>{-a / n, 1.0 / n};
    };
    r.psi_plus = psi(r.alpha_plus);
    r.psi_minus = psi(r.alpha_minus);
    const double a = std::abs(r.alpha_plus);
    r.c12 = a > 1.0 ? 2.0 / (a + 1.0 / a) : 2.0 * a / (1.0 + a * a);
    return r;
}

struct ConcurrenceScanRow {
    double ratio = 0.0;       // (E3 - E2)/Delta of the uncoupled middle pair, as realized
    double c12_exact = 0.0;   // eigenstate 2 of the full 4x4 problem
    double c12_exact_3 = 0.0; // eigenstate 3
    double c12_model = 0.0;
    double delta_x = 0.0;
    QubitType encoding = QubitType::I;
};

/// Sets x' = x + dx so that the middle-pair splitting is `ratio` times Delta = CX CX' y,
/// with (E3 - E2)/B = dx/3 (type I) or dx (type II).
inline std::vector<ConcurrenceScanRow> fig2_scan(QubitType type, const ReducedVars& base,
                                                 const std::vector<double>& ratios, const PairOptions& opt = {}) {
    const double w1 = opt.use_quadrupole ? dressing_ratio(base.x, base.z) : 0.0;
    const CosineElements c = dressed_cosines(type, w1, opt.mixing_sign);
    const double delta_nominal = c.cx * c.cx * base.y;
    if (delta_nominal == 0.0) throw std::invalid_argument("fig2_scan: zero antidiagonal coupling");
    const double slope = type == QubitType::I ? 1.0 / 3.0 : 1.0;

    std::vector<ConcurrenceScanRow> rows;
    rows.reserve(ratios.size());
    for (double ratio : ratios) {
        if (!(ratio >= 0.0)) throw std::invalid_argument("fig2_scan: ratios must be >= 0");
        const double dx = ratio * std::abs(delta_nominal) / slope;
        if (!(dx >= 0.0 && dx <= 0.1)) throw std::invalid_argument("fig2_scan: ratio needs delta x outside [0, 0.1]");
        ReducedVars rv = base;
        rv.x_prime = base.x + dx;
        const PairHamiltonian h = build_pair_hamiltonian(type, rv, opt);
        const PairEigensystem es = diagonalize_pair(h);
        const Matrix hm = h.total();
        const double split = hm(2, 2) - hm(1, 1);
        const double coupling = hm(1, 2);
        ConcurrenceScanRow row;
        row.encoding = type;
        row.delta_x = rv.x_prime - rv.x;
        row.ratio = std::abs(split / coupling);
        row.c12_exact = concurrence_pure(es.coeffs[1]);
        row.c12_exact_3 = concurrence_pure(es.coeffs[2]);
        row.c12_model = two_level_concurrence(0.0, split, coupling).c12;
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
    if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

inline std::vector<double> linear_grid(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("linear_grid: need lo < hi and n >= 2");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}

inline void write_fig2_csv(std::ostream& os, const std::vector<ConcurrenceScanRow>& rows, bool header = true) {
    if (header) os << "ratio,c12_exact,c12_model,encoding\n";
    for (const auto& r : rows)
        os << format_g12(r.ratio) << ',' << format_g12(r.c12_exact) << ',' << format_g12(r.c12_model) << ','
           << to_string(r.encoding) << '\n';
}

struct FittedConstant {
    std::string name;
    double reference = 0.0;
    double fitted = 0.0;
    double residual = 0.0;
};

/// Refits K(x) = k0 + k1 x + k2 x^2 from the exact eigenstate-1 concurrence per unit y.
inline std::array<FittedConstant, 3> refit_k_law(const std::vector<double>& x_grid, double y = 1e-7) {
    if (x_grid.size() < 3) throw std::invalid_argument("refit_k_law: need at least 3 x values");
    std::vector<double> ks;
    for (double x : x_grid) {
        const ReducedVars rv{x, x, y, 0.0, 0.0};
        const auto es = diagonalize_pair(build_pair_hamiltonian(QubitType::I, rv, {false, +1}));
        ks.push_back(concurrence_pure(es.coeffs[0]) / y);
    }
    const auto fit = polyfit(x_grid, ks, 2);
    return {{{"K0", 0.03752, fit.coefficients[0], fit.residual_norm},
             {"K1", 0.00312, fit.coefficients[1], fit.residual_norm},
             {"K2", 0.00029, fit.coefficients[2], fit.residual_norm}}};
}

struct AppendixBGrid {
    std::vector<double> x;
    std::vector<double> dx;
    std::vector<double> y;
    std::vector<double> z;  // type II only; type I ignores quadrupole terms
};

inline AppendixBGrid appendixB_default_grid(QubitType type) {
    AppendixBGrid g;
    if (type == QubitType::I) {
        g.x = linear_grid(0.0, 1.0, 5);
        g.dx = log_grid(1e-4, 1e-2, 5);
        g.y = log_grid(1e-8, 1e-6, 5);
        g.z = {0.0};
    } else {
        g.x = linear_grid(0.1, 0.9, 5);
        g.dx = log_grid(1e-4, 1e-2, 3);
        g.y = log_grid(1e-8, 1e-6, 3);
        g.z = log_grid(1e-4, 4e-3, 4);
    }
    return g;
}

namespace detail {

inline double slope_through_origin(const std::vector<double>& xs, const std::vector<double>& ys, double* resid) {
    const auto fit = fit_basis(xs, ys, {[](double v) { return v; }});
    if (resid) *resid = fit.residual_norm;
    return fit.coefficients[0];
}

inline void require_spread(const std::vector<double>& v, const char* what) {
    if (std::set<double>(v.begin(), v.end()).size() < 2)
        throw std::invalid_argument(std::string("refit_appendixB: degenerate grid in ") + what);
}

}  // namespace detail

/// Fits the functional forms of the eigenfunction coefficient tables to exact eigenvectors.
/// Type I: c2 = k y/dx and d1 = (k0 + k1 x) y.  Type II: b2 = -k w^2 y/dx, d1 = -k w^3 y/z
/// and the exponent n of d1 ~ w^n at fixed z. Magnitudes are compared; type II regressors
/// use w at the mean field (x + x')/2.
inline std::vector<FittedConstant> refit_appendixB(QubitType type, const AppendixBGrid& g) {
    detail::require_spread(g.dx, "dx");
    detail::require_spread(g.y, "y");
    for (double dx : g.dx)
        for (double y : g.y)
            if (!(dx >= 10.0 * std::abs(y))) throw std::invalid_argument("refit_appendixB: grid must satisfy dx >> y");
    std::vector<FittedConstant> out;

    if (type == QubitType::I) {
        detail::require_spread(g.x, "x");
        std::vector<double> ratio, c2, xs, d1;
        for (double x : g.x)
            for (double dx : g.dx)
                for (double y : g.y) {
                    const ReducedVars rv{x, x + dx, y, 0.0, 0.0};
                    const auto es = diagonalize_pair(build_pair_hamiltonian(type, rv, {false, +1}));
                    ratio.push_back(y / dx);
                    c2.push_back(es.coeffs[1][2]);
                    xs.push_back(x);
                    d1.push_back(std::abs(es.coeffs[0][3]) / y);
                }
        double r = 0.0;
        const double k = detail::slope_through_origin(ratio, c2, &r);
        out.push_back({"I.c2_slope", -0.454, k, r});
        const auto lin = polyfit(xs, d1, 1);
        out.push_back({"I.d1_const", 0.019, lin.coefficients[0], lin.residual_norm});
        out.push_back({"I.d1_x", 0.0017, lin.coefficients[1], lin.residual_norm});
        return out;
    }

    detail::require_spread(g.z, "z");
    std::vector<double> b2_reg, b2, d1_reg, d1;
    for (double x : g.x)
        for (double z : g.z) {
            const double w = std::abs(z) / x;
            if (!(w < 0.1)) continue;
            for (double dx : g.dx)
                for (double y : g.y) {
                    const ReducedVars rv{x, x + dx, y, z, w};
                    const auto es = diagonalize_pair(build_pair_hamiltonian(type, rv, {true, +1}));
                    const double wm = std::abs(z) / (x + 0.5 * dx);  // w at the mean field of the pair
                    b2_reg.push_back(wm * wm * y / dx);
                    b2.push_back(std::abs(es.coeffs[1][1]));
                    d1_reg.push_back(wm * wm * wm * y / std::abs(z));
                    d1.push_back(std::abs(es.coeffs[0][3]));
                }
        }
    if (b2_reg.size() < 2) throw std::invalid_argument("refit_appendixB: no grid points with w < 0.1");
    double r = 0.0;
    out.push_back({"II.b2_coeff", 0.0225, detail::slope_through_origin(b2_reg, b2, &r), r});
    out.push_back({"II.d1_coeff", 0.0118, detail::slope_through_origin(d1_reg, d1, &r), r});

    // Exponent: log|d1| against log w at the median z, smallest dx and y.
    const double z = g.z[g.z.size() / 2];
    std::vector<double> lw, ld;
    for (double x : g.x) {
        const double w = std::abs(z) / x;
        if (!(w < 0.1)) continue;
        const ReducedVars rv{x, x + g.dx.front(), g.y.front(), z, w};
        const auto es = diagonalize_pair(build_pair_hamiltonian(type, rv, {true, +1}));
        lw.push_back(std::log(w));
        ld.push_back(std::log(std::abs(es.coeffs[0][3])));
    }
    if (lw.size() < 3) throw std::invalid_argument("refit_appendixB: too few x values for the w exponent");
    const auto lin = polyfit(lw, ld, 1);
    out.push_back({"II.d1_w_exponent", 3.0, lin.coefficients[1], lin.residual_norm});
    return out;
}

}  // namespace stql
