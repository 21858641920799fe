#pragma once

// Two dipoles in fields eps (site 1) and eps' (site 2), coupled by the averaged
// dipole-dipole interaction. Energies are in units of B with the 2A offset removed;
// basis order is |00>, |01>, |10>, |11> with the site-1 qubit first.

#include <array>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "stql/hyperfine.hpp"
#include "stql/linalg.hpp"
#include "stql/params.hpp"
#include "stql/rotor.hpp"

namespace stql {

struct SiteState {
    int J = 1;
    int K = 1;
    int MJ = 0;
    int MI = 0;
};

struct QubitEncoding {
    QubitType kind = QubitType::I;
    SiteState state0;
    SiteState state1;
};

inline QubitEncoding encoding(QubitType t) {
    if (t == QubitType::I) return {t, {1, 1, -1, +1}, {2, 1, -1, +1}};
    return {t, {1, 1, +1, -1}, {1, 1, -1, +1}};
}

struct PairHamiltonian {
    QubitType kind = QubitType::I;
    std::array<double, 4> diag{};  // site-energy sums
    Matrix vdd{4, 4};              // y * cos(1) (x) cos(2)
    CosineElements site1, site2;

    [[nodiscard]] Matrix total() const {
        Matrix h = vdd;
        for (int i = 0; i < 4; ++i) h(i, i) += diag[i];
        return h;
    }
};

struct PairOptions {
    bool use_quadrupole = true;
    int mixing_sign = +1;  // sign of eqQ used when dressing the cosine elements
};

/// Site energy (W - A)/B of one qubit state at reduced field x.
inline double site_energy(const SiteState& s, double x, double z, bool use_quadrupole) {
    const double jj = s.J * (s.J + 1.0);
    double e = jj - static_cast<double>(s.K) * s.K - x * s.MJ * s.K / jj;
    if (use_quadrupole) e += quad_diagonal_energy(s.J, s.K, 1.0, s.MJ, s.MI, z);
    return e;
}

inline double dressing_ratio(double x, double z) {
    if (z == 0.0) return 0.0;
    if (x == 0.0) throw std::domain_error("pair: w undefined at zero field with nonzero eqQ");
    const double w = std::abs(z) / x;
    if (w >= 1.0) throw std::domain_error("pair: w = |z|/x must be < 1 for the strong-field dressing");
    return w;
}

inline PairHamiltonian build_pair_hamiltonian(QubitType type, const ReducedVars& rv, const PairOptions& opt = {}) {
    const QubitEncoding enc = encoding(type);
    PairHamiltonian h;
    h.kind = type;
    const double w1 = opt.use_quadrupole ? dressing_ratio(rv.x, rv.z) : 0.0;
    const double w2 = opt.use_quadrupole ? dressing_ratio(rv.x_prime, rv.z) : 0.0;
    h.site1 = dressed_cosines(type, w1, opt.mixing_sign);
    h.site2 = dressed_cosines(type, w2, opt.mixing_sign);

    const std::array<double, 2> e1{site_energy(enc.state0, rv.x, rv.z, opt.use_quadrupole),
                                   site_energy(enc.state1, rv.x, rv.z, opt.use_quadrupole)};
    const std::array<double, 2> e2{site_energy(enc.state0, rv.x_prime, rv.z, opt.use_quadrupole),
                                   site_energy(enc.state1, rv.x_prime, rv.z, opt.use_quadrupole)};
    const double m1[2][2] = {{h.site1.c0, h.site1.cx}, {h.site1.cx, h.site1.c1}};
    const double m2[2][2] = {{h.site2.c0, h.site2.cx}, {h.site2.cx, h.site2.c1}};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            h.diag[2 * a + b] = e1[a] + e2[b];
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) h.vdd(2 * a + b, 2 * c + d) = rv.y * m1[a][c] * m2[b][d];
        }
    return h;
}

inline PairHamiltonian build_pair_hamiltonian(QubitType type, const MoleculeParams& mol, const FieldGeometry& geom,
                                              const PairOptions& opt = {}) {
    return build_pair_hamiltonian(type, reduced_vars(mol, geom), opt);
}

struct PairEigensystem {
    std::array<double, 4> energies{};                 // ascending
    std::array<std::array<double, 4>, 4> coeffs{};    // coeffs[i] = (a, b, c, d) of eigenstate i+1
    StateOrdering ordering = StateOrdering::ByEnergy;
};

inline PairEigensystem diagonalize_pair(const PairHamiltonian& h) {
    const EigenSystem sys = symmetric_eigen_shifted(h.total());
    PairEigensystem out;
    for (int i = 0; i < 4; ++i) {
        out.energies[i] = sys.values[i];
        for (int k = 0; k < 4; ++k) out.coeffs[i][k] = sys.vectors(k, i);
    }
    // Eigenvalues repel by at least 2|anti|, so near-degeneracy is judged on the bare splitting.
    const Matrix m = h.total();
    const double anti = std::abs(m(1, 2));
    if (anti > 0.0 && std::abs(m(2, 2) - m(1, 1)) < 1e-3 * anti) {
        out.ordering = StateOrdering::ByOverlap;
        // Middle pair: the state closer to |01> takes slot 2.
        if (std::abs(out.coeffs[2][1]) > std::abs(out.coeffs[1][1])) {
            std::swap(out.coeffs[1], out.coeffs[2]);
            std::swap(out.energies[1], out.energies[2]);
        }
    }
    return out;
}

/// Pertinent regime: x < 1, |y| < 1e-5, |z| < 5e-3.
inline bool in_pertinent_regime(const ReducedVars& rv) {
    return rv.x < 1.0 && rv.x_prime < 1.0 && std::abs(rv.y) < 1e-5 && std::abs(rv.z) < 5e-3;
}

struct FormulaValue {
    double value = 0.0;
    bool out_of_regime = false;
};

/// Closed-form linear eigenvalue (E_i - 2A)/B, i = 1..4.
inline FormulaValue eigenvalue_formula(QubitType type, const ReducedVars& rv, int i) {
    const double x = rv.x, xp = rv.x_prime, y = rv.y, z = rv.z;
    FormulaValue f;
    f.out_of_regime = !in_pertinent_regime(rv);
    if (type == QubitType::I) {
        switch (i) {
            case 1: f.value = 2 + x / 2 + xp / 2 + y / 4 + z / 20; break;
            case 2: f.value = 6 + x / 2 + xp / 6 + y / 12 + 3 * z / 70; break;
            case 3: f.value = 6 + xp / 2 + x / 6 + y / 12 + 3 * z / 70; break;
            case 4: f.value = 10 + x / 6 + xp / 6 + y / 36 + z / 28; break;
            default: throw std::out_of_range("eigenvalue_formula: i must be 1..4");
        }
    } else {
        switch (i) {
            case 1: f.value = 2 - x / 2 - xp / 2 + y / 4 + z / 20; break;
            case 2: f.value = 2 + x / 2 - xp / 2 - y / 4 + z / 20; break;
            case 3: f.value = 2 + xp / 2 - x / 2 - y / 4 + z / 20; break;
            case 4: f.value = 2 + x / 2 + xp / 2 + y / 4 + z / 20; break;
            default: throw std::out_of_range("eigenvalue_formula: i must be 1..4");
        }
    }
    return f;
}

/// Conditional frequency shift Omega (C1 - C0)(C1' - C0').
inline double delta_omega(const CosineElements& s1, const CosineElements& s2, double omega_alpha) {
    return omega_alpha * (s1.c1 - s1.c0) * (s2.c1 - s2.c0);
}

struct TransitionSet {
    std::array<double, 4> omega{};  // omega1..omega4
    double delta_omega = 0.0;       // omega4 - omega1
};

struct TransitionReport {
    TransitionSet exact;        // eigenvalue differences
    double delta_omega_alt = 0.0;  // omega2 - omega3 from exact eigenvalues
    TransitionSet closed_form;  // linear formulas
    double delta_omega_eq = 0.0;   // Omega (C1 - C0)(C1' - C0') with the site elements used
};

/// omega1 = E2-E1, omega2 = E4-E2, omega3 = E3-E1, omega4 = E4-E3 (units of B).
inline TransitionReport transition_frequencies(QubitType type, const ReducedVars& rv, const PairOptions& opt = {}) {
    const PairHamiltonian h = build_pair_hamiltonian(type, rv, opt);
    const PairEigensystem es = diagonalize_pair(h);
    const auto& e = es.energies;
    TransitionReport r;
    r.exact.omega = {e[1] - e[0], e[3] - e[1], e[2] - e[0], e[3] - e[2]};
    r.exact.delta_omega = r.exact.omega[3] - r.exact.omega[0];
    r.delta_omega_alt = r.exact.omega[1] - r.exact.omega[2];

    const double x = rv.x, xp = rv.x_prime, y = rv.y, z = opt.use_quadrupole ? rv.z : 0.0;
    if (type == QubitType::I) {
        r.closed_form.omega = {4 - xp / 3 - y / 6 - z / 140, 4 - x / 3 - y / 18 - z / 140,
                               4 - x / 3 - y / 6 - z / 140, 4 - xp / 3 - y / 18 - z / 140};
        r.closed_form.delta_omega = y / 9;
    } else {
        r.closed_form.omega = {x - y / 2, xp + y / 2, xp - y / 2, x + y / 2};
        r.closed_form.delta_omega = y;
    }
    r.delta_omega_eq = delta_omega(h.site1, h.site2, rv.y);
    return r;
}

/// Shifts of omega1 relative to omega2 from the field offset alone, in units of B.
inline double site_separation(QubitType type, double delta_x) {
    return type == QubitType::I ? delta_x / 3.0 : delta_x;
}

/// Converts a pair energy in units of B (2A removed) to MHz.
inline double pair_energy_mhz(double e_over_b, const MoleculeParams& mol) {
    return e_over_b * mol.b_mhz + 2.0 * mol.a_mhz;
}

struct SwitchableDipole {
    double mu_plus = 0.0;   // mu_eff of the J=1, K=1, M=+1 level
    double mu_minus = 0.0;  // mu_eff of M=-1
    double mu_pm = 0.0;     // first-order part (mu_plus - mu_minus)/2
    double mu_zero = 0.0;   // mu_eff of M=0 (second order)
    double ratio = 0.0;     // (mu_pm / mu_zero)^2
};

/// Dipole-coupling reduction from switching M = +-1 qubits to M = 0, via the exact oracle.
inline SwitchableDipole switchable_dipole_ratio(const MoleculeParams& mol, double field_v_cm) {
    if (!(field_v_cm > 0.0)) throw std::invalid_argument("switchable_dipole_ratio: field must be > 0");
    auto lowest_j1 = [&](int M) {
        for (const auto& lvl : exact_stark_levels(mol, field_v_cm, 1, M))
            if (lvl.state.J == 1) return lvl;
        throw std::runtime_error("switchable_dipole_ratio: no J=1 level");
    };
    SwitchableDipole s;
    s.mu_plus = lowest_j1(+1).mu_eff_debye;
    s.mu_minus = lowest_j1(-1).mu_eff_debye;
    s.mu_zero = lowest_j1(0).mu_eff_debye;
    s.mu_pm = 0.5 * (s.mu_plus - s.mu_minus);
    s.ratio = (s.mu_pm / s.mu_zero) * (s.mu_pm / s.mu_zero);
    return s;
}

inline void write_frequency_csv_header(std::ostream& os) {
    os << "encoding,omega1_MHz,omega2_MHz,omega3_MHz,omega4_MHz,delta_omega_kHz\n";
}

inline void write_frequency_csv_row(std::ostream& os, const std::string& label, const TransitionSet& t, double b_mhz) {
    os << label;
    for (double w : t.omega) os << ',' << format_g12(w * b_mhz);
    os << ',' << format_g12(t.delta_omega * b_mhz * 1e3) << '\n';
}

}  // namespace stql
