#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "stql/pair.hpp"
#include "stql/registry.hpp"

using namespace stql;

namespace {

MoleculeParams ch3cn() { return find_molecule(builtin_molecules(), "CH3CN"); }

ReducedVars defaults() {
    const auto m = ch3cn();
    FieldGeometry g;
    g.field_prime_v_cm = field_for_delta_x(m, g.field_v_cm, 1e-3);
    return reduced_vars(m, g);
}

ReducedVars simple(double x, double dx, double y, double z) {
    ReducedVars rv;
    rv.x = x;
    rv.x_prime = x + dx;
    rv.y = y;
    rv.z = z;
    rv.w = x > 0 ? std::abs(z) / x : 0.0;
    return rv;
}

}  // namespace

TEST(Encoding, ExactStates) {
    const auto i = encoding(QubitType::I);
    EXPECT_EQ(i.state0.J, 1);
    EXPECT_EQ(i.state0.MJ, -1);
    EXPECT_EQ(i.state0.MI, 1);
    EXPECT_EQ(i.state1.J, 2);
    const auto ii = encoding(QubitType::II);
    EXPECT_EQ(ii.state0.MJ, 1);
    EXPECT_EQ(ii.state0.MI, -1);
    EXPECT_EQ(ii.state1.MJ, -1);
    EXPECT_EQ(ii.state1.MI, 1);
}

TEST(BuildPair, TypeICornerElement) {
    const auto h = build_pair_hamiltonian(QubitType::I, simple(0.1, 1e-3, 1e-6, 0.0));
    EXPECT_NEAR(h.vdd(0, 3), 0.15e-6, 1e-18);
    EXPECT_NEAR(h.vdd(0, 0), 0.25e-6, 1e-18);
    EXPECT_TRUE(h.total().is_symmetric(0.0));
}

TEST(BuildPair, ZeroCouplingGivesZeroVdd) {
    for (auto t : {QubitType::I, QubitType::II}) {
        const auto h = build_pair_hamiltonian(t, simple(0.1, 1e-3, 0.0, 4e-4));
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) EXPECT_EQ(h.vdd(r, c), 0.0);
    }
}

TEST(BuildPair, TypeIIDiagonalWithoutQuadrupole) {
    const double y = 1e-6;
    const auto h = build_pair_hamiltonian(QubitType::II, simple(0.1, 1e-3, y, 0.0));
    const double expected[4] = {0.25 * y, -0.25 * y, -0.25 * y, 0.25 * y};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) EXPECT_NEAR(h.vdd(r, c), r == c ? expected[r] : 0.0, 1e-20);
    const auto es = diagonalize_pair(h);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(es.coeffs[i][0]) + std::abs(es.coeffs[i][1]) +
                                                std::abs(es.coeffs[i][2]) + std::abs(es.coeffs[i][3]),
                                            1.0, 1e-15);
}

TEST(BuildPair, DiagonalSums) {
    const auto rv = simple(0.1, 1e-3, 1e-6, -4.6e-4);
    const auto h = build_pair_hamiltonian(QubitType::I, rv);
    const auto enc = encoding(QubitType::I);
    EXPECT_DOUBLE_EQ(h.diag[1], site_energy(enc.state0, rv.x, rv.z, true) + site_energy(enc.state1, rv.x_prime, rv.z, true));
    EXPECT_NEAR(site_energy(enc.state0, 0.0, 0.0, false), 1.0, 0.0);
    EXPECT_NEAR(site_energy(enc.state1, 0.0, 0.0, false), 5.0, 0.0);
}

TEST(BuildPair, DressingDomain) {
    EXPECT_THROW(dressing_ratio(0.0, 1e-3), std::domain_error);
    EXPECT_THROW(dressing_ratio(1e-3, 1e-3), std::domain_error);
    EXPECT_EQ(dressing_ratio(0.0, 0.0), 0.0);
}

TEST(Diagonalize, UncoupledEqualsDiagonal) {
    const auto h = build_pair_hamiltonian(QubitType::I, simple(0.3, 1e-3, 0.0, 0.0));
    const auto es = diagonalize_pair(h);
    std::array<double, 4> d = h.diag;
    std::sort(d.begin(), d.end());
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(es.energies[i], d[i], 1e-14);
}

TEST(Diagonalize, NormalizedWithSignConvention) {
    const auto es = diagonalize_pair(build_pair_hamiltonian(QubitType::I, defaults()));
    for (const auto& q : es.coeffs) {
        double n = 0.0, big = 0.0;
        for (double c : q) {
            n += c * c;
            if (std::abs(c) > std::abs(big)) big = c;
        }
        EXPECT_NEAR(n, 1.0, 1e-12);
        EXPECT_GT(big, 0.0);
    }
}

TEST(Diagonalize, TraceAndEigenOracle) {
    for (auto t : {QubitType::I, QubitType::II}) {
        const auto h = build_pair_hamiltonian(t, simple(0.4, 2e-3, 5e-6, -1e-3));
        const auto es = diagonalize_pair(h);
        const Matrix m = h.total();
        double s = 0.0;
        for (double e : es.energies) s += e;
        EXPECT_NEAR(s / m.trace(), 1.0, 1e-12);
        Eigen::Matrix4d e;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) e(r, c) = m(r, c);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> ref(e);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(es.energies[i], ref.eigenvalues()(i), 1e-12);
    }
}

TEST(Diagonalize, SiteSwapSymmetry) {
    // Type II at x' < x keeps the energy ordering of the middle pair reversed.
    const auto a = simple(0.3, 2e-3, 1e-6, -4e-4);
    ReducedVars b = a;
    std::swap(b.x, b.x_prime);
    for (auto t : {QubitType::I, QubitType::II}) {
        const auto ea = diagonalize_pair(build_pair_hamiltonian(t, a));
        const auto eb = diagonalize_pair(build_pair_hamiltonian(t, b));
        EXPECT_NEAR(ea.energies[0], eb.energies[0], 1e-14);
        EXPECT_NEAR(ea.energies[3], eb.energies[3], 1e-14);
        EXPECT_NEAR(ea.energies[1] + ea.energies[2], eb.energies[1] + eb.energies[2], 1e-14);
        for (int i : {0, 3}) {
            EXPECT_NEAR(ea.coeffs[i][1], eb.coeffs[i][2], 1e-10);
            EXPECT_NEAR(ea.coeffs[i][2], eb.coeffs[i][1], 1e-10);
        }
    }
}

TEST(Diagonalize, NearDegenerateUsesOverlapOrdering) {
    const auto h = build_pair_hamiltonian(QubitType::I, simple(0.3, 0.0, 1e-6, 0.0));
    const auto es = diagonalize_pair(h);
    EXPECT_EQ(es.ordering, StateOrdering::ByOverlap);
    EXPECT_GE(std::abs(es.coeffs[1][1]), std::abs(es.coeffs[2][1]));
}

TEST(EigenvalueFormula, Examples) {
    const auto rv = simple(0.1, 1e-3, 1e-6, -4.6e-4);
    EXPECT_DOUBLE_EQ(eigenvalue_formula(QubitType::I, rv, 4).value,
                     10 + rv.x / 6 + rv.x_prime / 6 + rv.y / 36 + rv.z / 28);
    const ReducedVars zero{};
    const double expected[4] = {2, 6, 6, 10};
    for (int i = 1; i <= 4; ++i) EXPECT_EQ(eigenvalue_formula(QubitType::I, zero, i).value, expected[i - 1]);
    EXPECT_THROW(eigenvalue_formula(QubitType::I, zero, 5), std::out_of_range);
    EXPECT_TRUE(eigenvalue_formula(QubitType::I, simple(2.0, 0.0, 0.0, 0.0), 1).out_of_regime);
}

TEST(EigenvalueFormula, MatchesExactAtDefaults) {
    const auto rv = defaults();
    for (auto t : {QubitType::I, QubitType::II}) {
        const auto es = diagonalize_pair(build_pair_hamiltonian(t, rv));
        for (int i = 1; i <= 4; ++i) {
            EXPECT_NEAR(eigenvalue_formula(t, rv, i).value, es.energies[i - 1], 1e-9) << to_string(t) << i;
        }
    }
}

TEST(Transitions, ConsistencyAndClosedForms) {
    const auto rv = defaults();
    const auto m = ch3cn();
    for (auto t : {QubitType::I, QubitType::II}) {
        const auto r = transition_frequencies(t, rv);
        // Same four eigenvalues combined in two orders: equal up to rounding of O(10) numbers.
        EXPECT_NEAR(r.exact.delta_omega, r.delta_omega_alt, 1e-14);
        EXPECT_NEAR(r.exact.delta_omega / r.closed_form.delta_omega, 1.0, 1e-3);
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(r.exact.omega[k], r.closed_form.omega[k], 1e-8);
    }
    const double y_khz = rv.y * m.b_mhz * 1e3;
    EXPECT_NEAR(transition_frequencies(QubitType::II, rv).exact.delta_omega * m.b_mhz * 1e3, 18.5, 0.1);
    EXPECT_NEAR(transition_frequencies(QubitType::I, rv).exact.delta_omega * m.b_mhz * 1e3, y_khz / 9, 1e-3);
}

TEST(Transitions, SiteSeparation) {
    const auto m = ch3cn();
    EXPECT_NEAR(site_separation(QubitType::I, 1e-3) * m.b_mhz, 3.07, 0.03);
    EXPECT_NEAR(site_separation(QubitType::II, 1e-3) * m.b_mhz, 9.20, 0.09);
    const auto r = transition_frequencies(QubitType::II, defaults());
    EXPECT_NEAR((r.exact.omega[2] - r.exact.omega[0]) * m.b_mhz, 9.2, 0.1);
}

TEST(DeltaOmega, Examples) {
    EXPECT_NEAR(delta_omega(dressed_cosines(QubitType::I, 0), dressed_cosines(QubitType::I, 0), 9.0), 1.0, 1e-14);
    EXPECT_NEAR(delta_omega(dressed_cosines(QubitType::II, 0), dressed_cosines(QubitType::II, 0), 1.0), 1.0, 1e-15);
    EXPECT_EQ(delta_omega({0.3, 0.3, 0.1}, {0.1, 0.2, 0.0}, 5.0), 0.0);
}

TEST(SwitchableDipole, RatioAt1kV) {
    const auto s = switchable_dipole_ratio(ch3cn(), 1000.0);
    EXPECT_NEAR(s.mu_pm, 1.96, 0.0098);
    EXPECT_GE(s.ratio, 500.0);
    EXPECT_LE(s.ratio, 560.0);
    EXPECT_NEAR(std::pow(1.96 / 0.084, 2), 544.4, 0.1);
    EXPECT_GT(switchable_dipole_ratio(ch3cn(), 10.0).ratio, 1e6);
    EXPECT_THROW(switchable_dipole_ratio(ch3cn(), 0.0), std::invalid_argument);
}

TEST(FrequencyCsv, Format) {
    std::ostringstream os;
    write_frequency_csv_header(os);
    write_frequency_csv_row(os, "II/exact", transition_frequencies(QubitType::II, defaults()).exact, 9198.9);
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
              "encoding,omega1_MHz,omega2_MHz,omega3_MHz,omega4_MHz,delta_omega_kHz");
    EXPECT_NE(os.str().find("II/exact,"), std::string::npos);
}
