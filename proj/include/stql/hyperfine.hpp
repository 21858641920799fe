#pragma once

// Nuclear quadrupole coupling of one on-axis I=1 nucleus in the strong-field regime.
// Basis states are |J K M_J> x |I M_I>; blocks are labelled by M_F = M_J + M_I.

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stql/linalg.hpp"
#include "stql/rotor.hpp"

namespace stql {

enum class QubitType { I, II };

inline const char* to_string(QubitType t) { return t == QubitType::I ? "I" : "II"; }

inline QubitType parse_qubit_type(const std::string& s) {
    if (s == "I" || s == "1" || s == "i") return QubitType::I;
    if (s == "II" || s == "2" || s == "ii") return QubitType::II;
    throw std::invalid_argument("unknown qubit type '" + s + "' (expected I or II)");
}

/// Diagonal and transition cosine elements between the two qubit states of one site.
struct CosineElements {
    double c0 = 0.0;
    double c1 = 0.0;
    double cx = 0.0;
};

class UnsupportedCase : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Common factor eqQ [3K^2/J(J+1) - 1] / [4(2J-1)(2J+3)(2I-1)].
inline double quad_prefactor(int J, int K, double I, double eqq_mhz) {
    if (I < 1.0) throw std::invalid_argument("quad_prefactor: needs I >= 1");
    if (J < 1) throw std::invalid_argument("quad_prefactor: needs J >= 1");
    const double jj = J * (J + 1.0);
    return eqq_mhz * (3.0 * K * K / jj - 1.0) / (4.0 * (2.0 * J - 1.0) * (2.0 * J + 3.0) * (2.0 * I - 1.0));
}

/// First-order quadrupole energy of |J K M_J; I M_I>.
inline double quad_diagonal_energy(int J, int K, double I, double MJ, double MI, double eqq_mhz) {
    return quad_prefactor(J, K, I, eqq_mhz) * (3.0 * MJ * MJ - J * (J + 1.0)) * (3.0 * MI * MI - I * (I + 1.0));
}

struct QuadBlock {
    int MF = 0;
    std::vector<std::pair<int, int>> labels;  // (M_J, M_I), M_J descending
    Matrix matrix;                            // MHz
};

namespace detail {

// Jz, J+ for integer j, basis ordered m = j, j-1, ..., -j.
inline std::pair<Matrix, Matrix> angular_momentum(int j) {
    const int n = 2 * j + 1;
    Matrix jz(n, n), jp(n, n);
    for (int i = 0; i < n; ++i) {
        const double m = j - i;
        jz(i, i) = m;
        if (i > 0) jp(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    return {jz, jp};
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

inline void require_spin_one(double I) {
    if (I != 1.0) throw UnsupportedCase("hyperfine: only I = 1 is supported");
}

}  // namespace detail

/// Full quadrupole operator (2P/I)[3(I.J)^2 + 3/2 (I.J) - I^2 J^2] for one J manifold,
/// basis |M_J> x |M_I> with both projections descending.
inline Matrix quad_hamiltonian(int J, int K, double I, double eqq_mhz) {
    detail::require_spin_one(I);
    if (J < 1 || std::abs(K) > J) throw std::invalid_argument("quad_hamiltonian: needs J >= max(1,|K|)");
    const int i_int = static_cast<int>(I);
    const auto [jz, jp] = detail::angular_momentum(J);
    const auto [iz, ip] = detail::angular_momentum(i_int);
    const Matrix jm = jp.transposed(), im = ip.transposed();
    Matrix ij = detail::kron(jz, iz);
    const Matrix pm = detail::kron(jp, im), mp = detail::kron(jm, ip);
    for (std::size_t r = 0; r < ij.rows(); ++r)
        for (std::size_t c = 0; c < ij.cols(); ++c) ij(r, c) += 0.5 * (pm(r, c) + mp(r, c));
    const Matrix ij2 = ij * ij;
    const double pref = 2.0 * quad_prefactor(J, K, I, eqq_mhz) / I;
    const double casimir = I * (I + 1.0) * J * (J + 1.0);
    Matrix h(ij.rows(), ij.cols());
    for (std::size_t r = 0; r < h.rows(); ++r)
        for (std::size_t c = 0; c < h.cols(); ++c)
            h(r, c) = pref * (3.0 * ij2(r, c) + 1.5 * ij(r, c) - (r == c ? casimir : 0.0));
    return h;
}

/// Stark plus quadrupole block for one M_F; `stark_mhz` is mu eps / h.
inline QuadBlock build_quad_block(int J, int K, double I, int MF, double stark_mhz, double eqq_mhz) {
    detail::require_spin_one(I);
    const int i_int = static_cast<int>(I);
    if (std::abs(MF) > J + i_int) throw std::invalid_argument("build_quad_block: |M_F| exceeds J + I");
    const Matrix full = quad_hamiltonian(J, K, I, eqq_mhz);
    const int ni = 2 * i_int + 1;
    QuadBlock blk;
    blk.MF = MF;
    std::vector<std::size_t> idx;
    for (int mj = J; mj >= -J; --mj) {
        const int mi = MF - mj;
        if (std::abs(mi) > i_int) continue;
        blk.labels.emplace_back(mj, mi);
        idx.push_back(static_cast<std::size_t>((J - mj) * ni + (i_int - mi)));
    }
    blk.matrix = Matrix(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        for (std::size_t c = 0; c < idx.size(); ++c) blk.matrix(r, c) = full(idx[r], idx[c]);
        blk.matrix(r, r) += stark_energy_first_order(RotorState{J, K, blk.labels[r].first}, stark_mhz);
    }
    return blk;
}

/// The M_F = 0 block over (M_J, M_I) = (+1,-1), (0,0), (-1,+1) for the qubit manifolds.
inline QuadBlock build_mf0_block(int J, double stark_mhz, double eqq_mhz, int K = 1, double I = 1.0) {
    if ((J != 1 && J != 2) || K != 1 || I != 1.0)
        throw UnsupportedCase("build_mf0_block: supported only for J in {1,2}, K = 1, I = 1");
    QuadBlock full = build_quad_block(J, K, I, 0, stark_mhz, eqq_mhz);
    if (J == 1) return full;
    // J = 2 has five M_F = 0 states; keep the three with |M_J| <= 1.
    QuadBlock blk;
    blk.MF = 0;
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < full.labels.size(); ++k)
        if (std::abs(full.labels[k].first) <= 1) {
            keep.push_back(k);
            blk.labels.push_back(full.labels[k]);
        }
    blk.matrix = Matrix(keep.size(), keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (std::size_t c = 0; c < keep.size(); ++c) blk.matrix(r, c) = full.matrix(keep[r], keep[c]);
    return blk;
}

struct HyperfineState {
    int J = 0;
    int K = 1;
    int MJ_tilde = 0;  // nominal label
    int MI = 0;        // nominal label
    double energy = 0.0;
    std::vector<std::pair<std::pair<int, int>, double>> amplitudes;  // ((M_J, M_I), coefficient)

    [[nodiscard]] double amplitude(int mj, int mi) const {
        for (const auto& [lab, c] : amplitudes)
            if (lab.first == mj && lab.second == mi) return c;
        return 0.0;
    }
};

enum class StateOrdering { ByEnergy, ByOverlap };

struct MixingResult {
    double coefficient = 0.0;              // a (J=1) or b (J=2)
    std::array<HyperfineState, 3> states;  // nominal M_J = +1, 0, -1
    StateOrdering ordering = StateOrdering::ByEnergy;
    std::string warning;
};

/// Approximate eigenfunction coefficients over (+1,-1), (0,0), (-1,+1) for the state with
/// nominal M_J = `nominal`, given mixing coefficient `c`.
inline std::array<double, 3> ansatz_state(int J, int nominal, double c) {
    if (J == 1) {
        const double q = 1.0 - c * c;
        if (nominal == 1) return {q, c, -c};
        if (nominal == 0) return {-c, q, c};
        if (nominal == -1) return {c, -c, q};
    } else if (J == 2) {
        const double r3 = std::sqrt(3.0);
        if (nominal == 1) return {1.0 - 2.0 * c * c, -c, r3 * c};
        if (nominal == 0) return {c, 1.0 - c * c, -c};
        if (nominal == -1) return {-r3 * c, c, 1.0 - 2.0 * c * c};
    }
    throw UnsupportedCase("ansatz_state: J must be 1 or 2 and nominal M_J in {-1,0,1}");
}

namespace detail {

inline std::array<int, 3> assign_by_overlap(const Matrix& v) {
    // Column for each nominal row, maximizing the product of |overlaps|.
    std::array<int, 3> perm{0, 1, 2}, best = perm;
    double best_score = -1.0;
    do {
        double s = 1.0;
        for (int r = 0; r < 3; ++r) s *= std::abs(v(r, perm[r]));
        if (s > best_score) {
            best_score = s;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace detail

/// Diagonalizes the M_F = 0 block at unit Stark scale with eqQ = sign * w and fits the
/// single mixing coefficient of the nominal M_J = -1 state to the exact eigenvector.
inline MixingResult strong_field_mixing(int J, double w, int sign = +1) {
    if (J != 1 && J != 2) throw UnsupportedCase("strong_field_mixing: J must be 1 or 2");
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("strong_field_mixing: w must be >= 0");
    if (sign != 1 && sign != -1) throw std::invalid_argument("strong_field_mixing: sign must be +1 or -1");
    const QuadBlock blk = build_mf0_block(J, 1.0, sign * w);
    const EigenSystem sys = symmetric_eigen_shifted(blk.matrix);

    MixingResult res;
    // Stark order puts M_J = +1 lowest, so ascending energy maps to nominal +1, 0, -1.
    const auto perm = detail::assign_by_overlap(sys.vectors);
    if (perm != std::array<int, 3>{0, 1, 2}) {
        res.ordering = StateOrdering::ByOverlap;
        res.warning = "level crossing: states assigned by overlap rather than energy";
    }
    for (int r = 0; r < 3; ++r) {
        auto& st = res.states[r];
        st.J = J;
        st.MJ_tilde = 1 - r;
        st.MI = -st.MJ_tilde;
        st.energy = sys.values[perm[r]];
        double sgn = sys.vectors(r, perm[r]) < 0 ? -1.0 : 1.0;
        for (int k = 0; k < 3; ++k) st.amplitudes.push_back({blk.labels[k], sgn * sys.vectors(k, perm[r])});
    }

    const auto& target = res.states[2];
    const std::array<double, 3> v{target.amplitudes[0].second, target.amplitudes[1].second,
                                  target.amplitudes[2].second};
    auto resid = [&](double c) {
        const auto a = ansatz_state(J, -1, c);
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (a[k] - v[k]) * (a[k] - v[k]);
        return s;
    };
    res.coefficient = w == 0.0 ? 0.0 : minimize_bracketed(resid, -0.5, 0.5, 1e-15);
    return res;
}

/// |<ansatz|exact>|^2 with the ansatz renormalized.
inline double ansatz_fidelity(const MixingResult& m, int nominal_index = 2) {
    const auto& st = m.states[nominal_index];
    const auto a = ansatz_state(st.J, st.MJ_tilde, m.coefficient);
    double dot = 0.0, na = 0.0;
    for (int k = 0; k < 3; ++k) {
        dot += a[k] * st.amplitudes[k].second;
        na += a[k] * a[k];
    }
    return dot * dot / na;
}

namespace detail {

inline double sandwich_cos(const HyperfineState& bra, const HyperfineState& ket) {
    double s = 0.0;
    for (const auto& [lb, cb] : bra.amplitudes)
        for (const auto& [lk, ck] : ket.amplitudes) {
            if (lb.second != lk.second) continue;  // nuclear spin untouched by cos theta
            s += cb * ck * cosine_element(RotorState{bra.J, bra.K, lb.first}, RotorState{ket.J, ket.K, lk.first});
        }
    return s;
}

}  // namespace detail

/// C0, C1, CX between the quadrupole-dressed qubit states at mixing ratio w.
inline CosineElements dressed_cosines(QubitType type, double w, int sign = +1) {
    if (!(w >= 0.0 && w < 1.0)) throw std::invalid_argument("dressed_cosines: w must lie in [0, 1)");
    const auto j1 = strong_field_mixing(1, w, sign);
    if (type == QubitType::I) {
        const auto j2 = strong_field_mixing(2, w, sign);
        const auto& s0 = j1.states[2];
        const auto& s1 = j2.states[2];
        return {detail::sandwich_cos(s0, s0), detail::sandwich_cos(s1, s1), detail::sandwich_cos(s0, s1)};
    }
    const auto& s0 = j1.states[0];
    const auto& s1 = j1.states[2];
    return {detail::sandwich_cos(s0, s0), detail::sandwich_cos(s1, s1), detail::sandwich_cos(s0, s1)};
}

struct Table1Fit {
    std::string element;  // "C0", "C1", "CX"
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double residual = 0.0;
};

/// Quadratic fits c0 + c1 w + c2 w^2 of the dressed elements. With `pin_intercept` the
/// constant is fixed at the exact w = 0 value and only c1, c2 are fitted.
inline std::array<Table1Fit, 3> refit_table1(QubitType type, const std::vector<double>& w_grid,
                                             bool pin_intercept = true, int sign = +1) {
    if (w_grid.size() < 20) throw std::invalid_argument("refit_table1: need at least 20 grid points");
    for (double w : w_grid)
        if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("refit_table1: grid must lie inside (0, 1)");
    std::vector<double> ws(w_grid);
    std::sort(ws.begin(), ws.end());
    if (std::adjacent_find(ws.begin(), ws.end()) != ws.end())
        throw std::invalid_argument("refit_table1: repeated grid points");

    const CosineElements at0 = dressed_cosines(type, 0.0, sign);
    std::array<std::vector<double>, 3> vals;
    for (double w : w_grid) {
        const auto c = dressed_cosines(type, w, sign);
        vals[0].push_back(c.c0);
        vals[1].push_back(c.c1);
        vals[2].push_back(c.cx);
    }
    const std::array<double, 3> base{at0.c0, at0.c1, at0.cx};
    const std::array<const char*, 3> names{"C0", "C1", "CX"};
    std::array<Table1Fit, 3> out;
    for (int e = 0; e < 3; ++e) {
        out[e].element = names[e];
        if (pin_intercept) {
            std::vector<double> rhs(vals[e]);
            for (auto& r : rhs) r -= base[e];
            const auto fit = fit_basis(w_grid, rhs, {[](double w) { return w; }, [](double w) { return w * w; }});
            out[e].c0 = base[e];
            out[e].c1 = fit.coefficients[0];
            out[e].c2 = fit.coefficients[1];
            out[e].residual = fit.residual_norm;
        } else {
            const auto fit = polyfit(w_grid, vals[e], 2);
            out[e].c0 = fit.coefficients[0];
            out[e].c1 = fit.coefficients[1];
            out[e].c2 = fit.coefficients[2];
            out[e].residual = fit.residual_norm;
        }
    }
    return out;
}

/// Default refit grid: w = u^2 with u evenly spaced on [0.01, 0.999], 50 points.
inline std::vector<double> table1_default_grid() {
    std::vector<double> ws;
    for (int k = 0; k < 50; ++k) {
        const double u = 0.01 + (0.999 - 0.01) * k / 49.0;
        ws.push_back(u * u);
    }
    return ws;
}

inline void write_table1_csv(std::ostream& os, QubitType type, const std::array<Table1Fit, 3>& fits) {
    os << "element,c0,c1,c2,residual\n";
    for (const auto& f : fits)
        os << to_string(type) << ':' << f.element << ',' << format_g12(f.c0) << ',' << format_g12(f.c1) << ','
           << format_g12(f.c2) << ',' << format_g12(f.residual) << '\n';
}

}  // namespace stql
