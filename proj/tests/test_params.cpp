#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "stql/params.hpp"
#include "stql/registry.hpp"

using namespace stql;

namespace {

MoleculeParams ch3cn() { return find_molecule(builtin_molecules(), "CH3CN"); }

}  // namespace

TEST(StarkFrequency, Ch3cnAt500VcmMatchesQuotedValue) {
    const double f = stark_frequency(3.92, 500.0);
    EXPECT_NEAR(f, 986.7, 0.05);
    EXPECT_LT(std::abs(f / 988.0 - 1.0), 0.002);
}

TEST(StarkFrequency, ZeroFieldGivesZero) { EXPECT_EQ(stark_frequency(2.5, 0.0), 0.0); }

TEST(StarkFrequency, UnitConversionFromSiConstants) {
    // mu eps / h with 1 D = 1e-21/c C m and 1 V/cm = 100 V/m.
    const double hz = 1e-21 / 299792458.0 * 1000.0 * 100.0 / 6.62607015e-34;
    EXPECT_NEAR(stark_frequency(1.0, 1000.0), hz * 1e-6, 1e-9);
    EXPECT_NEAR(stark_frequency(1.0, 1000.0), 503.412, 5e-4);
}

TEST(StarkFrequency, RejectsBadInput) {
    EXPECT_THROW(stark_frequency(std::numeric_limits<double>::quiet_NaN(), 1.0), std::invalid_argument);
    EXPECT_THROW(stark_frequency(1.0, std::numeric_limits<double>::infinity()), std::invalid_argument);
    EXPECT_THROW(stark_frequency(1.0, -1.0), std::invalid_argument);
}

TEST(DipoleDipole, Ch3cnAtHalfMicron) { EXPECT_NEAR(dipole_dipole_strength(3.92, 0.5, 90.0), 18.55, 0.01); }

TEST(DipoleDipole, MagicAngleVanishes) {
    const double magic = std::acos(1.0 / std::sqrt(3.0)) / units::deg_to_rad;
    EXPECT_NEAR(dipole_dipole_strength(3.0, 0.7, magic), 0.0, 1e-12);
}

TEST(DipoleDipole, HeadToTailIsNegative) {
    // mu^2 / (4 pi eps0 r^3) / h for 1 D at 1 um, times (1 - 3).
    const double debye = 1e-21 / 299792458.0;
    const double hz = debye * debye / (4.0 * M_PI * 8.8541878128e-12 * 1e-18) / 6.62607015e-34;
    EXPECT_NEAR(dipole_dipole_strength(1.0, 1.0, 0.0), -2.0 * hz * 1e-3, 1e-9);
    EXPECT_NEAR(dipole_dipole_strength(1.0, 1.0, 0.0), -0.30184, 1e-4);
}

TEST(DipoleDipole, AngularFactorRange) {
    const double base = dipole_dipole_strength(2.0, 1.0, 90.0);
    for (double a = 0.0; a <= 180.0; a += 7.5) {
        const double r = dipole_dipole_strength(2.0, 1.0, a) / base;
        EXPECT_GE(r, -2.0 - 1e-12);
        EXPECT_LE(r, 1.0 + 1e-12);
    }
    EXPECT_NEAR(dipole_dipole_strength(2.0, 1.0, 0.0) / base, -2.0, 1e-12);
    EXPECT_NEAR(dipole_dipole_strength(2.0, 1.0, 180.0) / base, -2.0, 1e-12);
}

TEST(DipoleDipole, RejectsNonPositiveSpacing) {
    EXPECT_THROW(dipole_dipole_strength(1.0, 0.0, 90.0), std::invalid_argument);
    EXPECT_THROW(dipole_dipole_strength(1.0, -1.0, 90.0), std::invalid_argument);
}

TEST(ReducedVars, Ch3cnDefaults) {
    const auto rv = reduced_vars(ch3cn(), FieldGeometry{});
    EXPECT_NEAR(rv.x, 0.1073, 1e-4);
    EXPECT_NEAR(rv.x_prime, rv.x, 0.0);
    EXPECT_NEAR(rv.y, 2.0e-6, 0.05e-6);
    EXPECT_NEAR(rv.z, -4.6e-4, 0.05e-4);
    EXPECT_LT(rv.z, 0.0);
    EXPECT_NEAR(rv.w, 4.3e-3, 0.05e-3);
}

TEST(ReducedVars, YMatchesRoundedConstant) {
    // y = 1.51e-4 mu^2 / r^3 / B with r in um and B in MHz.
    const auto rv = reduced_vars(ch3cn(), FieldGeometry{});
    const double y_rounded = 1.51e-4 * 3.92 * 3.92 / 0.125 / 9198.8;
    EXPECT_NEAR(rv.y / y_rounded, 1.0, 0.002);
}

TEST(ReducedVars, ZeroFieldZeroQuadrupole) {
    MoleculeParams m = ch3cn();
    m.eqq_mhz = 0.0;
    FieldGeometry g;
    g.field_v_cm = g.field_prime_v_cm = 0.0;
    const auto rv = reduced_vars(m, g);
    EXPECT_EQ(rv.x, 0.0);
    EXPECT_EQ(rv.z, 0.0);
    EXPECT_EQ(rv.w, 0.0);
}

TEST(ReducedVars, ZeroFieldWithQuadrupoleIsAnError) {
    FieldGeometry g;
    g.field_v_cm = 0.0;
    EXPECT_THROW(reduced_vars(ch3cn(), g), std::domain_error);
}

TEST(ReducedVars, Homogeneity) {
    const auto m = ch3cn();
    FieldGeometry g;
    const auto a = reduced_vars(m, g);
    g.field_v_cm *= 2.0;
    g.field_prime_v_cm *= 2.0;
    const auto b = reduced_vars(m, g);
    EXPECT_DOUBLE_EQ(b.x, 2.0 * a.x);
    EXPECT_DOUBLE_EQ(b.w, 0.5 * a.w);

    MoleculeParams m2 = m;
    m2.b_mhz *= 4.0;
    const auto c = reduced_vars(m2, FieldGeometry{});
    EXPECT_DOUBLE_EQ(c.x, a.x / 4.0);
    EXPECT_DOUBLE_EQ(c.y, a.y / 4.0);
    EXPECT_DOUBLE_EQ(c.z, a.z / 4.0);
}

TEST(ReducedVars, NegativeYBeyondMagicAngle) {
    FieldGeometry g;
    g.alpha_deg = 10.0;
    EXPECT_LT(reduced_vars(ch3cn(), g).y, 0.0);
}

TEST(ReducedVars, FieldForDeltaX) {
    const auto m = ch3cn();
    FieldGeometry g;
    g.field_prime_v_cm = field_for_delta_x(m, g.field_v_cm, 1e-3);
    EXPECT_NEAR(reduced_vars(m, g).delta_x(), 1e-3, 1e-15);
}

TEST(ReducedVars, WPrime) {
    ReducedVars rv{0.1, 0.2, 1e-6, -4e-4, 4e-3};
    EXPECT_DOUBLE_EQ(rv.w_prime(), 2e-3);
    rv.x_prime = 0.0;
    EXPECT_THROW((void)rv.w_prime(), std::domain_error);
}

TEST(Validation, MoleculeInvariants) {
    MoleculeParams m = ch3cn();
    EXPECT_NO_THROW(m.validate());
    m.mu_debye = 0.0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m = ch3cn();
    m.spin_i = 0.7;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m.spin_i = 1.5;
    EXPECT_NO_THROW(m.validate());
}

TEST(Validation, GeometryInvariants) {
    FieldGeometry g;
    g.alpha_deg = 181.0;
    EXPECT_THROW(g.validate(), std::invalid_argument);
    g = FieldGeometry{};
    g.spacing_um = 0.0;
    EXPECT_THROW(g.validate(), std::invalid_argument);
    g = FieldGeometry{};
    g.field_prime_v_cm = -1.0;
    EXPECT_THROW(g.validate(), std::invalid_argument);
}
