#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stql/linalg.hpp"
#include "stql/params.hpp"

namespace stql {

struct RotorState {
    int J = 0;
    int K = 0;
    int M = 0;

    void validate() const {
        if (J < 0) throw std::invalid_argument("rotor state: J must be >= 0");
        if (std::abs(K) > J) throw std::invalid_argument("rotor state: |K| must be <= J");
        if (std::abs(M) > J) throw std::invalid_argument("rotor state: |M| must be <= J");
    }
    friend bool operator==(const RotorState&, const RotorState&) = default;
};

struct StarkLevel {
    RotorState state;        // J is the dominant (field-free) label
    double energy_mhz = 0.0;
    double cos_expectation = 0.0;
    double mu_eff_debye = 0.0;     // mu * <cos theta>
    double mu_eff_fd_debye = 0.0;  // -dE/d eps by centered difference
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double rotational_energy(const RotorState& s, const MoleculeParams& mol) {
    s.validate();
    return mol.b_mhz * s.J * (s.J + 1) + (mol.a_mhz - mol.b_mhz) * s.K * s.K;
}

/// First-order Stark shift -mu eps M K / J(J+1); `stark_mhz` is mu eps / h.
inline double stark_energy_first_order(const RotorState& s, double stark_mhz) {
    s.validate();
    if (s.J == 0) throw std::invalid_argument("stark_energy_first_order: J = 0 has no first-order shift");
    return -stark_mhz * s.M * s.K / (s.J * (s.J + 1.0));
}

/// <bra| cos theta |ket>. Zero unless K and M match and |dJ| <= 1.
inline double cosine_element(const RotorState& bra, const RotorState& ket) {
    bra.validate();
    ket.validate();
    if (bra.K != ket.K || bra.M != ket.M) return 0.0;
    const int K = bra.K, M = bra.M;
    if (bra.J == ket.J) {
        if (bra.J == 0) return 0.0;
        return static_cast<double>(M) * K / (bra.J * (bra.J + 1.0));
    }
    const int lo = std::min(bra.J, ket.J);
    if (std::max(bra.J, ket.J) != lo + 1) return 0.0;
    const double j1 = lo + 1.0;
    return std::sqrt((j1 * j1 - K * K) * (j1 * j1 - M * M)) / (j1 * std::sqrt((2.0 * lo + 1.0) * (2.0 * lo + 3.0)));
}

namespace detail {

inline Matrix stark_matrix(const MoleculeParams& mol, double stark_mhz, int K, int M, int jmin, int jmax) {
    const int n = jmax - jmin + 1;
    Matrix h(n, n);
    for (int i = 0; i < n; ++i) {
        const RotorState s{jmin + i, K, M};
        h(i, i) = rotational_energy(s, mol) - stark_mhz * cosine_element(s, s);
        if (i + 1 < n) {
            const double c = -stark_mhz * cosine_element(s, RotorState{jmin + i + 1, K, M});
            h(i, i + 1) = c;
            h(i + 1, i) = c;
        }
    }
    return h;
}

inline EigenSystem stark_eigen(const MoleculeParams& mol, double stark_mhz, int K, int M, int jmin, int jmax) {
    return symmetric_eigen_shifted(stark_matrix(mol, stark_mhz, K, M, jmin, jmax));
}

inline int default_jmax(int K, int M) { return std::max(std::abs(K), std::abs(M)) + 6; }

}  // namespace detail

/// Exact Stark levels in the truncated |J K M> basis, J from max(|K|,|M|) to jmax.
/// jmax <= 0 picks the default |K|+6 (at least max(|K|,|M|)+3). The cutoff is raised until
/// every returned level agrees with a jmax+2 reference to 1e-10 relative.
inline std::vector<StarkLevel> exact_stark_levels(const MoleculeParams& mol, double field_v_cm, int K, int M,
                                                  int jmax = 0, int jmax_cap = 80) {
    mol.validate();
    const int jmin = std::max(std::abs(K), std::abs(M));
    if (jmax <= 0) jmax = std::max(detail::default_jmax(K, M), jmin + 3);
    if (jmax < jmin + 3) throw std::invalid_argument("exact_stark_levels: jmax must be >= max(|K|,|M|)+3");
    const double stark = stark_frequency(mol.mu_debye, field_v_cm);

    // The top few levels feel the truncation; report the lower half.
    auto converged = [&](const EigenSystem& a, const EigenSystem& b, int keep) {
        for (int i = 0; i < keep; ++i) {
            const double scale = std::max(std::abs(a.values[i]), mol.b_mhz);
            if (std::abs(a.values[i] - b.values[i]) > 1e-10 * scale) return false;
        }
        return true;
    };

    int keep = 0;
    EigenSystem sys;
    for (;; jmax += 2) {
        if (jmax > jmax_cap) throw ConvergenceError("exact_stark_levels: no convergence below the J cutoff cap");
        sys = detail::stark_eigen(mol, stark, K, M, jmin, jmax);
        const auto ref = detail::stark_eigen(mol, stark, K, M, jmin, jmax + 2);
        keep = std::max(1, (jmax - jmin + 1) / 2);
        if (converged(sys, ref, keep)) break;
    }

    const double h_eps = field_v_cm * 1e-4;
    std::vector<double> e_plus, e_minus;
    if (h_eps > 0.0) {
        const double dstark = stark_frequency(mol.mu_debye, h_eps);
        e_plus = detail::stark_eigen(mol, stark + dstark, K, M, jmin, jmax).values;
        e_minus = detail::stark_eigen(mol, stark - dstark, K, M, jmin, jmax).values;
    }

    const int n = jmax - jmin + 1;
    std::vector<StarkLevel> out;
    out.reserve(keep);
    for (int k = 0; k < keep; ++k) {
        StarkLevel lvl;
        std::size_t dominant = 0;
        for (int i = 0; i < n; ++i)
            if (std::abs(sys.vectors(i, k)) > std::abs(sys.vectors(dominant, k))) dominant = i;
        lvl.state = RotorState{jmin + static_cast<int>(dominant), K, M};
        lvl.energy_mhz = sys.values[k];
        double c = 0.0;
        for (int i = 0; i < n; ++i) {
            const RotorState si{jmin + i, K, M};
            c += sys.vectors(i, k) * sys.vectors(i, k) * cosine_element(si, si);
            if (i + 1 < n)
                c += 2.0 * sys.vectors(i, k) * sys.vectors(i + 1, k) * cosine_element(si, RotorState{jmin + i + 1, K, M});
        }
        lvl.cos_expectation = c;
        lvl.mu_eff_debye = mol.mu_debye * c;
        if (h_eps > 0.0) {
            // -dE/d eps in MHz per V/cm, converted back to Debye.
            const double slope = (e_plus[k] - e_minus[k]) / (2.0 * h_eps);
            lvl.mu_eff_fd_debye = -slope / units::stark_mhz_per_debye_v_cm;
        } else {
            lvl.mu_eff_fd_debye = lvl.mu_eff_debye;
        }
        out.push_back(lvl);
    }
    return out;
}

/// Closed second-order perturbation estimate of mu_eff for |J K M>, from couplings to J +- 1.
inline double second_order_mu_eff(const MoleculeParams& mol, double field_v_cm, const RotorState& s) {
    s.validate();
    const double stark = stark_frequency(mol.mu_debye, field_v_cm);
    const double e0 = rotational_energy(s, mol);
    double sum = 0.0;  // d^2E/d stark^2 / 2
    for (int dj : {-1, 1}) {
        const RotorState t{s.J + dj, s.K, s.M};
        if (t.J < std::max(std::abs(s.K), std::abs(s.M))) continue;
        const double c = cosine_element(s, t);
        sum += c * c / (e0 - rotational_energy(t, mol));
    }
    const double first = (s.J == 0) ? 0.0 : -static_cast<double>(s.M) * s.K / (s.J * (s.J + 1.0));
    // E = first*stark + sum*stark^2; mu_eff = -dE/d(eps) in Debye.
    return mol.mu_debye * (-first - 2.0 * sum * stark);
}

struct StarkMapRow {
    double x = 0.0;
    int J = 0, K = 0, M = 0;
    double w_over_b = 0.0;
    double cos_exp = 0.0;
};

/// First-order (E_R + E_S)/B and <cos theta> for every M of each J, at each x = mu eps / B.
inline std::vector<StarkMapRow> stark_map(const MoleculeParams& mol, int K, const std::vector<int>& j_list,
                                          const std::vector<double>& x_grid) {
    if (x_grid.empty()) throw std::invalid_argument("stark_map: empty x grid");
    for (std::size_t i = 1; i < x_grid.size(); ++i)
        if (!(x_grid[i] > x_grid[i - 1])) throw std::invalid_argument("stark_map: x grid must be ascending");
    std::vector<StarkMapRow> rows;
    for (double x : x_grid) {
        for (int J : j_list) {
            if (J < 1 || std::abs(K) > J) throw std::invalid_argument("stark_map: need J >= max(1,|K|)");
            for (int M = -J; M <= J; ++M) {
                const RotorState s{J, K, M};
                const double cos_exp = cosine_element(s, s);
                rows.push_back({x, J, K, M, rotational_energy(s, mol) / mol.b_mhz - x * cos_exp, cos_exp});
            }
        }
    }
    return rows;
}

inline std::string format_g12(double v) {
    char buf[40];
    if (v == 0.0) v = 0.0;  // no "-0"
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void write_stark_map_csv(std::ostream& os, const std::vector<StarkMapRow>& rows) {
    os << "x,J,K,M,W_over_B,cos_exp\n";
    for (const auto& r : rows)
        os << format_g12(r.x) << ',' << r.J << ',' << r.K << ',' << r.M << ',' << format_g12(r.w_over_b) << ','
           << format_g12(r.cos_exp) << '\n';
}

}  // namespace stql
