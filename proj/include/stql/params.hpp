#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "stql/units.hpp"

namespace stql {

/// Body-frame constants of one polar symmetric top. Frequencies are E/h in MHz.
struct MoleculeParams {
    std::string name;
    double mu_debye = 0.0;
    double a_mhz = 0.0;
    double b_mhz = 0.0;
    double eqq_mhz = 0.0;
    double spin_i = 0.0;

    void validate() const {
        if (name.empty()) throw std::invalid_argument("molecule: empty name");
        if (!(mu_debye > 0.0) || !std::isfinite(mu_debye))
            throw std::invalid_argument("molecule " + name + ": mu must be > 0");
        if (!(a_mhz > 0.0) || !std::isfinite(a_mhz))
            throw std::invalid_argument("molecule " + name + ": A must be > 0");
        if (!(b_mhz > 0.0) || !std::isfinite(b_mhz))
            throw std::invalid_argument("molecule " + name + ": B must be > 0");
        if (!std::isfinite(eqq_mhz)) throw std::invalid_argument("molecule " + name + ": eqQ not finite");
        if (!(spin_i >= 0.0) || std::fmod(2.0 * spin_i, 1.0) != 0.0)
            throw std::invalid_argument("molecule " + name + ": spin_I must be a non-negative half-integer");
    }
};

/// Field strengths at the two sites, their spacing, and the angle between r12 and the field.
struct FieldGeometry {
    double field_v_cm = 500.0;
    double field_prime_v_cm = 500.0;
    double spacing_um = 0.5;
    double alpha_deg = 90.0;

    void validate() const {
        if (!(field_v_cm >= 0.0) || !std::isfinite(field_v_cm))
            throw std::invalid_argument("geometry: field must be >= 0");
        if (!(field_prime_v_cm >= 0.0) || !std::isfinite(field_prime_v_cm))
            throw std::invalid_argument("geometry: field' must be >= 0");
        if (!(spacing_um > 0.0) || !std::isfinite(spacing_um))
            throw std::invalid_argument("geometry: spacing must be > 0");
        if (!(alpha_deg >= 0.0 && alpha_deg <= 180.0))
            throw std::invalid_argument("geometry: alpha must lie in [0, 180] degrees");
    }
};

/// Dimensionless knobs: x = mu eps/B, x' = mu eps'/B, y = Omega_alpha/B, z = eqQ/B, w = |eqQ|/mu eps.
struct ReducedVars {
    double x = 0.0;
    double x_prime = 0.0;
    double y = 0.0;
    double z = 0.0;
    double w = 0.0;

    [[nodiscard]] double delta_x() const { return x_prime - x; }

    /// Quadrupole ratio at site 2, |z| / x'.
    [[nodiscard]] double w_prime() const {
        if (x_prime == 0.0) {
            if (z != 0.0) throw std::domain_error("w' undefined: zero Stark energy with nonzero eqQ");
            return 0.0;
        }
        return std::abs(z) / x_prime;
    }
};

/// Stark frequency mu*eps/h in MHz.
inline double stark_frequency(double mu_debye, double field_v_cm) {
    if (!std::isfinite(mu_debye) || !std::isfinite(field_v_cm))
        throw std::invalid_argument("stark_frequency: non-finite input");
    if (mu_debye < 0.0 || field_v_cm < 0.0)
        throw std::invalid_argument("stark_frequency: mu and eps must be non-negative");
    return mu_debye * field_v_cm * units::stark_mhz_per_debye_v_cm;
}

/// Azimuthally averaged dipole-dipole coupling Omega_alpha/h in kHz; negative when
/// 1 - 3 cos^2(alpha) < 0.
inline double dipole_dipole_strength(double mu_debye, double spacing_um, double alpha_deg) {
    if (!std::isfinite(mu_debye) || !std::isfinite(spacing_um) || !std::isfinite(alpha_deg))
        throw std::invalid_argument("dipole_dipole_strength: non-finite input");
    if (!(spacing_um > 0.0)) throw std::invalid_argument("dipole_dipole_strength: r12 must be > 0");
    const double c = std::cos(alpha_deg * units::deg_to_rad);
    const double angular = 1.0 - 3.0 * c * c;
    const double omega_hz = mu_debye * mu_debye / (spacing_um * spacing_um * spacing_um) *
                            units::dipolar_hz_per_debye2_um3;
    return omega_hz * angular * 1e-3;
}

inline ReducedVars reduced_vars(const MoleculeParams& mol, const FieldGeometry& geom) {
    mol.validate();
    geom.validate();
    const double stark = stark_frequency(mol.mu_debye, geom.field_v_cm);
    const double stark_prime = stark_frequency(mol.mu_debye, geom.field_prime_v_cm);
    ReducedVars rv;
    rv.x = stark / mol.b_mhz;
    rv.x_prime = stark_prime / mol.b_mhz;
    rv.y = dipole_dipole_strength(mol.mu_debye, geom.spacing_um, geom.alpha_deg) * 1e-3 / mol.b_mhz;
    rv.z = mol.eqq_mhz / mol.b_mhz;
    if (stark == 0.0) {
        if (mol.eqq_mhz != 0.0)
            throw std::domain_error("reduced_vars: w undefined for zero Stark energy with nonzero eqQ");
        rv.w = 0.0;
    } else {
        rv.w = std::abs(mol.eqq_mhz) / stark;
    }
    return rv;
}

/// Site-2 field that realizes a given x' - x for this molecule.
inline double field_for_delta_x(const MoleculeParams& mol, double field_v_cm, double delta_x) {
    return field_v_cm + delta_x * mol.b_mhz / (mol.mu_debye * units::stark_mhz_per_debye_v_cm);
}

}  // namespace stql
