#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <sstream>

#include "stql/entangle.hpp"
#include "stql/registry.hpp"

using namespace stql;

using Quad = std::array<double, 4>;

namespace {

ReducedVars defaults() {
    const auto m = find_molecule(builtin_molecules(), "CH3CN");
    FieldGeometry g;
    g.field_prime_v_cm = field_for_delta_x(m, g.field_v_cm, 1e-3);
    return reduced_vars(m, g);
}

}  // namespace

TEST(Concurrence, Examples) {
    EXPECT_EQ(concurrence_pure(Quad{1.0, 0.0, 0.0, 0.0}), 0.0);
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(concurrence_pure(Quad{h, 0.0, 0.0, h}), 1.0, 1e-15);
    EXPECT_NEAR(concurrence_pure(Quad{0.0, h, -h, 0.0}), 1.0, 1e-15);
    EXPECT_NEAR(concurrence_pure(Quad{0.5, 0.5, 0.5, 0.5}), 0.0, 1e-15);
}

TEST(Concurrence, Invariances) {
    const std::array<double, 4> q{0.8, 0.36, -0.3, 0.3708};
    double n = 0.0;
    for (double c : q) n += c * c;
    std::array<double, 4> u;
    for (int i = 0; i < 4; ++i) u[i] = q[i] / std::sqrt(n);
    const double c = concurrence_pure(u);
    EXPECT_NEAR(concurrence_pure(Quad{-u[0], -u[1], -u[2], -u[3]}), c, 1e-15);
    EXPECT_NEAR(concurrence_pure(Quad{u[1], u[0], u[3], u[2]}), c, 1e-15);
    const std::complex<double> ph = std::polar(1.0, 0.7);
    EXPECT_NEAR(concurrence_pure(std::array<std::complex<double>, 4>{ph * u[0], ph * u[1], ph * u[2], ph * u[3]}), c,
                1e-15);
}

TEST(Concurrence, RejectsUnnormalized) {
    EXPECT_THROW(concurrence_pure(Quad{1.0, 1.0, 0.0, 0.0}), std::invalid_argument);
    EXPECT_NO_THROW(concurrence_pure(Quad{1.0 + 1e-9, 0.0, 0.0, 0.0}));
}

TEST(Concurrence, EigenstateOneAtDefaults) {
    const auto rv = defaults();
    const auto es = diagonalize_pair(build_pair_hamiltonian(QubitType::I, rv));
    const double c = concurrence_pure(es.coeffs[0]);
    EXPECT_NEAR(c / (k_law(rv.x, rv.x_prime) * rv.y), 1.0, 0.05);
    EXPECT_NEAR(c, 7.6e-8, 0.1e-8);
}

TEST(KLaw, Examples) {
    EXPECT_DOUBLE_EQ(k_law(0.0), 0.03752);
    for (double x : {0.0, 0.3, 0.9}) EXPECT_NEAR(k_law(x, x), k_law(x), 1e-16);
}

TEST(KLaw, RefitWithinFivePercent) {
    const auto k = refit_k_law(linear_grid(0.0, 1.0, 21));
    for (const auto& f : k) EXPECT_NEAR(f.fitted / f.reference, 1.0, 0.05) << f.name;
    EXPECT_THROW(refit_k_law({0.1, 0.2}), std::invalid_argument);
}

TEST(KLaw, LinearInY) {
    for (double x : {0.0, 0.5, 1.0}) {
        double ref = 0.0;
        for (double y : log_grid(1e-8, 1e-5, 7)) {
            const ReducedVars rv{x, x + 1e-3, y, 0.0, 0.0};
            const auto es = diagonalize_pair(build_pair_hamiltonian(QubitType::I, rv, {false, +1}));
            const double per_y = concurrence_pure(es.coeffs[0]) / y;
            if (ref == 0.0) ref = per_y;
            EXPECT_NEAR(per_y / ref, 1.0, 1e-3) << x << ' ' << y;
        }
    }
}

TEST(KLaw, CornerCoefficientsCarryConcurrence) {
    const auto rv = defaults();
    for (auto t : {QubitType::I, QubitType::II}) {
        const auto es = diagonalize_pair(build_pair_hamiltonian(t, rv));
        const double c1 = concurrence_pure(es.coeffs[0]);
        const double c4 = concurrence_pure(es.coeffs[3]);
        EXPECT_NEAR(c1, 2 * std::abs(es.coeffs[0][3]), 1e-3 * c1) << to_string(t);
        EXPECT_NEAR(c4, 2 * std::abs(es.coeffs[3][0]), 1e-3 * c4) << to_string(t);
    }
}

TEST(TwoLevel, Examples) {
    const auto deg = two_level_concurrence(1.0, 1.0, 0.3);
    EXPECT_NEAR(deg.alpha_plus, 1.0, 1e-15);
    EXPECT_NEAR(deg.alpha_minus, -1.0, 1e-15);
    EXPECT_NEAR(deg.c12, 1.0, 1e-15);
    const auto one = two_level_concurrence(0.0, 1.0, 1.0);
    EXPECT_NEAR(one.alpha_minus, (1 - std::sqrt(5.0)) / 2, 1e-15);
    EXPECT_NEAR(one.c12, 2 / std::sqrt(5.0), 1e-15);
    EXPECT_NEAR(one.c12, 0.894, 5e-4);
    const auto far = two_level_concurrence(0.0, 100.0, 1.0);
    EXPECT_NEAR(far.c12, 0.02, 1e-5);
    const auto none = two_level_concurrence(0.0, 1.0, 0.0);
    EXPECT_TRUE(none.degenerate);
    EXPECT_EQ(none.c12, 0.0);
}

TEST(TwoLevel, BranchSymmetry) {
    for (double d : {-3.0, -0.2, 0.0, 0.5, 40.0}) {
        const auto r = two_level_concurrence(0.0, d, 0.7);
        EXPECT_NEAR(r.alpha_plus * r.alpha_minus, -1.0, 1e-14);
        const double cp = 2 * std::abs(r.alpha_plus) / (1 + r.alpha_plus * r.alpha_plus);
        const double cm = 2 * std::abs(r.alpha_minus) / (1 + r.alpha_minus * r.alpha_minus);
        EXPECT_NEAR(cp, cm, 1e-14);
        EXPECT_NEAR(r.c12, cp, 1e-14);
        EXPECT_NEAR(r.psi_plus[0] * r.psi_minus[0] + r.psi_plus[1] * r.psi_minus[1], 0.0, 1e-14);
    }
}

TEST(MiddlePairScan, AgreementAndAsymptotes) {
    const auto ratios = log_grid(1e-2, 1e2, 41);
    for (auto t : {QubitType::I, QubitType::II}) {
        const auto rows = fig2_scan(t, defaults(), ratios);
        ASSERT_EQ(rows.size(), ratios.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            EXPECT_LE(std::abs(rows[i].c12_exact - rows[i].c12_model), 1e-3) << rows[i].ratio;
            EXPECT_NEAR(rows[i].ratio / ratios[i], 1.0, 0.02);
            EXPECT_GE(rows[i].c12_exact, 0.0);
            EXPECT_LE(rows[i].c12_exact, 1.0);
            if (i > 0) {
                EXPECT_LE(rows[i].c12_exact, rows[i - 1].c12_exact + 1e-12);
            }
        }
        EXPECT_GE(rows.front().c12_exact, 0.999);
        EXPECT_NEAR(rows.back().c12_exact, 0.02, 1e-3);
    }
}

TEST(MiddlePairScan, RejectsOutOfRange) {
    EXPECT_THROW(fig2_scan(QubitType::I, defaults(), {1e9}), std::invalid_argument);
    EXPECT_THROW(fig2_scan(QubitType::I, defaults(), {-1.0}), std::invalid_argument);
}

TEST(MiddlePairScan, Csv) {
    std::ostringstream os;
    write_fig2_csv(os, fig2_scan(QubitType::II, defaults(), {1.0}));
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "ratio,c12_exact,c12_model,encoding");
    EXPECT_NE(os.str().find(",II\n"), std::string::npos);
}

TEST(Grids, Shapes) {
    const auto g = log_grid(1e-2, 1e2, 5);
    EXPECT_NEAR(g[2], 1.0, 1e-15);
    EXPECT_EQ(linear_grid(0, 1, 3)[1], 0.5);
    EXPECT_THROW(log_grid(0.0, 1.0, 3), std::invalid_argument);
    EXPECT_THROW(linear_grid(1.0, 1.0, 3), std::invalid_argument);
}

TEST(CoefficientRefit, TypeI) {
    const auto f = refit_appendixB(QubitType::I, appendixB_default_grid(QubitType::I));
    ASSERT_EQ(f.size(), 3u);
    EXPECT_NEAR(f[0].fitted / f[0].reference, 1.0, 0.05);
    EXPECT_NEAR(std::abs(f[1].fitted) / f[1].reference, 1.0, 0.05);
    EXPECT_NEAR(std::abs(f[2].fitted), 0.0017, 0.0002);
}

TEST(CoefficientRefit, TypeII) {
    const auto f = refit_appendixB(QubitType::II, appendixB_default_grid(QubitType::II));
    ASSERT_EQ(f.size(), 3u);
    EXPECT_NEAR(f[0].fitted / f[0].reference, 1.0, 0.10);
    EXPECT_NEAR(f[1].fitted / f[1].reference, 1.0, 0.10);
    EXPECT_NEAR(f[2].fitted, 3.0, 0.05);
}

TEST(CoefficientRefit, RejectsDegenerateGrids) {
    auto g = appendixB_default_grid(QubitType::I);
    g.dx = {1e-3, 1e-3};
    EXPECT_THROW(refit_appendixB(QubitType::I, g), std::invalid_argument);
    g = appendixB_default_grid(QubitType::I);
    g.y = {1e-4, 1e-3};
    EXPECT_THROW(refit_appendixB(QubitType::I, g), std::invalid_argument);
    g = appendixB_default_grid(QubitType::II);
    g.z = {1e-3};
    EXPECT_THROW(refit_appendixB(QubitType::II, g), std::invalid_argument);
}
