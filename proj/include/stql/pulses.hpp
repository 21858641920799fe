#pragma once

// Ideal instantaneous resonant pulses and free evolution on the four pair eigenstates.
// Amplitudes are carried in the eigenbasis (Schroedinger picture); a pulse applied at
// clock time t with carrier frequency nu and phase phi0 acts with phase phi0 - 2 pi nu t.

#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stql/entangle.hpp"
#include "stql/pair.hpp"

namespace stql {

using cplx = std::complex<double>;

struct StateVector4 {
    std::array<cplx, 4> amp{};

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (const auto& a : amp) s += std::norm(a);
        return std::sqrt(s);
    }
    [[nodiscard]] std::array<double, 4> populations() const {
        return {std::norm(amp[0]), std::norm(amp[1]), std::norm(amp[2]), std::norm(amp[3])};
    }
    static StateVector4 basis(int k) {
        StateVector4 s;
        s.amp.at(static_cast<std::size_t>(k)) = 1.0;
        return s;
    }
};

enum class Transition { W1, W2, W3, W4 };

/// Eigenstate pair (lower, upper), 0-based: w1 = (1,2), w2 = (2,4), w3 = (1,3), w4 = (3,4).
inline std::pair<int, int> transition_levels(Transition t) {
    switch (t) {
        case Transition::W1: return {0, 1};
        case Transition::W2: return {1, 3};
        case Transition::W3: return {0, 2};
        case Transition::W4: return {2, 3};
    }
    throw std::invalid_argument("unknown transition");
}

inline Transition transition_for_levels(int i, int j) {
    if (i > j) std::swap(i, j);
    for (auto t : {Transition::W1, Transition::W2, Transition::W3, Transition::W4})
        if (transition_levels(t) == std::pair{i, j}) return t;
    throw std::invalid_argument("pulse: levels (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                ") are not one of the four allowed transitions");
}

inline const char* to_string(Transition t) {
    switch (t) {
        case Transition::W1: return "w1";
        case Transition::W2: return "w2";
        case Transition::W3: return "w3";
        case Transition::W4: return "w4";
    }
    return "?";
}

struct PulseSpec {
    Transition transition = Transition::W1;
    double area = std::numbers::pi;
    double phase = 0.0;
};

/// exp[-i (area/2)(cos phi sx + sin phi sy)] on the addressed pair, identity elsewhere.
inline StateVector4 apply_rotation(const StateVector4& s, int i, int j, double area, double phase) {
    if (!(area >= 0.0) || !std::isfinite(area)) throw std::invalid_argument("pulse: area must be >= 0");
    const double c = std::cos(0.5 * area), sn = std::sin(0.5 * area);
    const cplx mi(0.0, -1.0);
    StateVector4 out = s;
    out.amp[i] = c * s.amp[i] + mi * sn * std::polar(1.0, -phase) * s.amp[j];
    out.amp[j] = c * s.amp[j] + mi * sn * std::polar(1.0, phase) * s.amp[i];
    return out;
}

inline StateVector4 apply_pulse(const StateVector4& s, const PulseSpec& p) {
    const auto [i, j] = transition_levels(p.transition);
    return apply_rotation(s, i, j, p.area, p.phase);
}

/// Phases exp(-2 pi i (E_k - E_1) t) with energies in Hz and t in seconds.
inline StateVector4 free_evolve(const StateVector4& s, const std::array<double, 4>& energies_hz, double t) {
    StateVector4 out = s;
    for (int k = 0; k < 4; ++k)
        out.amp[k] *= std::polar(1.0, -2.0 * std::numbers::pi * (energies_hz[k] - energies_hz[0]) * t);
    return out;
}

/// Eigen-frame amplitudes to the |00>,|01>,|10>,|11> frame and back.
inline StateVector4 to_basis_frame(const StateVector4& eig, const PairEigensystem& es) {
    StateVector4 out;
    for (int k = 0; k < 4; ++k)
        for (int b = 0; b < 4; ++b) out.amp[b] += eig.amp[k] * es.coeffs[k][b];
    return out;
}

inline StateVector4 to_eigen_frame(const StateVector4& basis, const PairEigensystem& es) {
    StateVector4 out;
    for (int k = 0; k < 4; ++k)
        for (int b = 0; b < 4; ++b) out.amp[k] += es.coeffs[k][b] * basis.amp[b];
    return out;
}

/// Eigen index whose state overlaps most with basis state b.
inline int eigen_index_of_basis(const PairEigensystem& es, int b) {
    int best = 0;
    for (int k = 1; k < 4; ++k)
        if (std::abs(es.coeffs[k][b]) > std::abs(es.coeffs[best][b])) best = k;
    return best;
}

// ---- sequences --------------------------------------------------------------

struct PulseStep {
    Transition transition = Transition::W1;
    double area = 0.0;
    double phase = 0.0;
};

/// Rotates qubit `site` (1 or 2) on both of its transitions, one common carrier.
struct SitePulseStep {
    int site = 1;
    double area = 0.0;
    double phase = 0.0;
    std::optional<double> carrier_hz;  // default: the transition with the partner in |0>
};

struct FreeStep {
    double seconds = 0.0;
};

using SequenceStep = std::variant<PulseStep, SitePulseStep, FreeStep>;

struct SequenceResult {
    StateVector4 eigen_state;
    StateVector4 basis_state;
    double concurrence = 0.0;
    double max_norm_drift = 0.0;  // largest |norm - 1| after any step
    double elapsed_s = 0.0;
};

/// Runs steps on the pair eigensystem, starting from `initial` (eigen frame).
class PairSimulator {
public:
    PairSimulator(PairEigensystem es, double b_mhz) : es_(std::move(es)) {
        for (int k = 0; k < 4; ++k) energies_hz_[k] = es_.energies[k] * b_mhz * 1e6;
    }

    [[nodiscard]] const PairEigensystem& eigensystem() const { return es_; }
    [[nodiscard]] const std::array<double, 4>& energies_hz() const { return energies_hz_; }

    [[nodiscard]] double transition_hz(int i, int j) const { return energies_hz_[j] - energies_hz_[i]; }

    /// Eigen-index pairs flipping qubit `site` with the partner in |0> and in |1>.
    [[nodiscard]] std::array<std::pair<int, int>, 2> site_transitions(int site) const {
        if (site != 1 && site != 2) throw std::invalid_argument("site pulse: site must be 1 or 2");
        auto idx = [&](int s1, int s2) { return eigen_index_of_basis(es_, 2 * s1 + s2); };
        if (site == 1) return {{{idx(0, 0), idx(1, 0)}, {idx(0, 1), idx(1, 1)}}};
        return {{{idx(0, 0), idx(0, 1)}, {idx(1, 0), idx(1, 1)}}};
    }

    [[nodiscard]] SequenceResult run(const std::vector<SequenceStep>& steps, StateVector4 state) const {
        SequenceResult r;
        double t = 0.0;
        auto track = [&](const StateVector4& s) {
            r.max_norm_drift = std::max(r.max_norm_drift, std::abs(s.norm() - 1.0));
        };
        for (const auto& step : steps) {
            if (const auto* p = std::get_if<PulseStep>(&step)) {
                auto [i, j] = transition_levels(p->transition);
                const double nu = transition_hz(i, j);
                state = apply_rotation(state, i, j, p->area, p->phase - 2.0 * std::numbers::pi * nu * t);
            } else if (const auto* sp = std::get_if<SitePulseStep>(&step)) {
                const auto pairs = site_transitions(sp->site);
                const double nu = sp->carrier_hz.value_or(transition_hz(pairs[0].first, pairs[0].second));
                const double phi = sp->phase - 2.0 * std::numbers::pi * nu * t;
                for (auto [i, j] : pairs) {
                    if (i > j) std::swap(i, j);
                    state = apply_rotation(state, i, j, sp->area, phi);
                }
            } else {
                const auto& f = std::get<FreeStep>(step);
                if (!(f.seconds >= 0.0)) throw std::invalid_argument("free evolution: time must be >= 0");
                state = free_evolve(state, energies_hz_, f.seconds);
                t += f.seconds;
            }
            track(state);
        }
        r.eigen_state = state;
        r.basis_state = to_basis_frame(state, es_);
        r.concurrence = concurrence_pure(r.basis_state.amp);
        r.elapsed_s = t;
        return r;
    }

    [[nodiscard]] StateVector4 ground() const { return StateVector4::basis(0); }

private:
    PairEigensystem es_;
    std::array<double, 4> energies_hz_{};
};

struct BellResult {
    StateVector4 basis_state;
    double concurrence = 0.0;
    double max_norm_drift = 0.0;
};

/// pi/2 then pi from the ground eigenstate: (w1, w2), or (w3, w4) when `swapped`.
inline BellResult bell_sequence(QubitType type, const ReducedVars& rv, double b_mhz, double phase = 0.0,
                                bool swapped = false, const PairOptions& opt = {}) {
    const PairSimulator sim(diagonalize_pair(build_pair_hamiltonian(type, rv, opt)), b_mhz);
    const double pi = std::numbers::pi;
    std::vector<SequenceStep> steps;
    if (!swapped) {
        steps = {PulseStep{Transition::W1, pi / 2, phase}, PulseStep{Transition::W2, pi, phase}};
    } else {
        steps = {PulseStep{Transition::W3, pi / 2, phase}, PulseStep{Transition::W4, pi, phase}};
    }
    const auto r = sim.run(steps, sim.ground());
    return {r.basis_state, r.concurrence, r.max_norm_drift};
}

struct CnotReport {
    double time_s = 0.0;
    double delta_omega_hz = 0.0;
    std::array<std::array<double, 4>, 4> populations{};  // [input][output], basis frame
    double cnot_fidelity = 0.0;      // control site 2, target site 1
    double identity_fidelity = 0.0;
    double max_norm_drift = 0.0;
};

/// Site-1 pi/2 (phase 0) - free(t) - pi/2 (phase pi), carrier on the control-|0> line.
inline std::vector<SequenceStep> precession_steps(double t) {
    return {SitePulseStep{1, std::numbers::pi / 2, 0.0, std::nullopt}, FreeStep{t},
            SitePulseStep{1, std::numbers::pi / 2, std::numbers::pi, std::nullopt}};
}

/// |Delta omega| of the site-1 transitions in Hz.
inline double site1_delta_omega_hz(const PairSimulator& sim) {
    const auto p = sim.site_transitions(1);
    return std::abs(sim.transition_hz(p[1].first, p[1].second) - sim.transition_hz(p[0].first, p[0].second));
}

inline CnotReport precession_cnot(QubitType type, const ReducedVars& rv, double b_mhz, double t_s,
                                  const PairOptions& opt = {}) {
    if (!(t_s > 0.0) || !std::isfinite(t_s)) throw std::invalid_argument("precession_cnot: t must be > 0");
    const PairSimulator sim(diagonalize_pair(build_pair_hamiltonian(type, rv, opt)), b_mhz);
    CnotReport rep;
    rep.time_s = t_s;
    rep.delta_omega_hz = site1_delta_omega_hz(sim);
    if (!(rep.delta_omega_hz > 0.0)) throw std::invalid_argument("precession_cnot: needs delta omega > 0");
    const auto steps = precession_steps(t_s);
    constexpr std::array<int, 4> cnot{0, 3, 2, 1};  // |00>,|01>->|11>,|10>,|11>->|01>
    for (int in = 0; in < 4; ++in) {
        const auto r = sim.run(steps, to_eigen_frame(StateVector4::basis(in), sim.eigensystem()));
        rep.populations[in] = r.basis_state.populations();
        rep.cnot_fidelity += rep.populations[in][cnot[in]] / 4.0;
        rep.identity_fidelity += rep.populations[in][in] / 4.0;
        rep.max_norm_drift = std::max(rep.max_norm_drift, r.max_norm_drift);
    }
    return rep;
}

// ---- sequence mini-language ------------------------------------------------

class SequenceParseError : public std::invalid_argument {
public:
    SequenceParseError(std::size_t pos, const std::string& what)
        : std::invalid_argument("sequence parse error at position " + std::to_string(pos) + ": " + what),
          pos_(pos) {}
    [[nodiscard]] std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

namespace detail {

inline double parse_number_at(const std::string& s, std::size_t pos, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw SequenceParseError(pos, "expected a number, got '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) throw SequenceParseError(pos, "bad number '" + text + "'");
    (void)s;
    return v;
}

inline std::string strip(const std::string& s, std::size_t& offset) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    offset += b;
    return s.substr(b, e - b);
}

}  // namespace detail

/// Parses `pi2@w1, pi@w2, free@27us, pulse(area=1.2,phase=0.5)@w3`; targets w1..w4 or
/// site1/site2; time units s, ms, us, ns. Positions in errors are 0-based character offsets.
inline std::vector<SequenceStep> parse_sequence(const std::string& text) {
    std::vector<SequenceStep> steps;
    // Split on commas outside parentheses.
    std::vector<std::pair<std::size_t, std::string>> tokens;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        const char c = i < text.size() ? text[i] : ',';
        if (c == '(') ++depth;
        if (c == ')') {
            if (--depth < 0) throw SequenceParseError(i, "unbalanced ')'");
        }
        if (c == ',' && depth == 0) {
            tokens.emplace_back(start, text.substr(start, i - start));
            start = i + 1;
        }
    }
    if (depth != 0) throw SequenceParseError(text.size(), "unbalanced '('");
    if (tokens.size() == 1 && detail::strip(tokens[0].second, tokens[0].first).empty()) return steps;

    for (auto [pos, raw] : tokens) {
        const std::string tok = detail::strip(raw, pos);
        if (tok.empty()) throw SequenceParseError(pos, "empty token");
        const auto at = tok.rfind('@');
        if (at == std::string::npos) throw SequenceParseError(pos, "missing '@' in '" + tok + "'");
        const std::string head = tok.substr(0, at);
        const std::string target = tok.substr(at + 1);
        const std::size_t tpos = pos + at + 1;

        if (head == "free") {
            static const std::array<std::pair<const char*, double>, 4> units{
                {{"ns", 1e-9}, {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0}}};
            double scale = 0.0;
            std::string number;
            for (const auto& [u, f] : units) {
                const std::string us(u);
                if (target.size() > us.size() && target.compare(target.size() - us.size(), us.size(), us) == 0) {
                    scale = f;
                    number = target.substr(0, target.size() - us.size());
                    break;
                }
            }
            if (scale == 0.0) throw SequenceParseError(tpos, "free time needs a unit (s, ms, us, ns)");
            const double v = detail::parse_number_at(text, tpos, number);
            if (v < 0.0) throw SequenceParseError(tpos, "free time must be >= 0");
            steps.emplace_back(FreeStep{v * scale});
            continue;
        }

        double area = 0.0, phase = 0.0;
        if (head == "pi2") {
            area = std::numbers::pi / 2;
        } else if (head == "pi") {
            area = std::numbers::pi;
        } else if (head.rfind("pulse(", 0) == 0 && head.back() == ')') {
            const std::string args = head.substr(6, head.size() - 7);
            std::size_t apos = pos + 6, s0 = 0;
            bool have_area = false;
            for (std::size_t i = 0; i <= args.size(); ++i) {
                if (i < args.size() && args[i] != ',') continue;
                std::size_t kpos = apos + s0;
                const std::string kv = detail::strip(args.substr(s0, i - s0), kpos);
                s0 = i + 1;
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw SequenceParseError(kpos, "expected key=value in pulse(...)");
                const std::string key = kv.substr(0, eq);
                const double v = detail::parse_number_at(text, kpos + eq + 1, kv.substr(eq + 1));
                if (key == "area") {
                    if (v < 0.0) throw SequenceParseError(kpos, "area must be >= 0");
                    area = v;
                    have_area = true;
                } else if (key == "phase") {
                    phase = v;
                } else {
                    throw SequenceParseError(kpos, "unknown pulse parameter '" + key + "'");
                }
            }
            if (!have_area) throw SequenceParseError(pos, "pulse(...) needs area=");
        } else {
            throw SequenceParseError(pos, "unknown step '" + head + "'");
        }

        if (target == "w1" || target == "w2" || target == "w3" || target == "w4") {
            steps.emplace_back(PulseStep{static_cast<Transition>(target[1] - '1'), area, phase});
        } else if (target == "site1" || target == "site2") {
            steps.emplace_back(SitePulseStep{target[4] - '0', area, phase, std::nullopt});
        } else {
            throw SequenceParseError(tpos, "unknown target '" + target + "' (w1..w4, site1, site2)");
        }
    }
    return steps;
}

}  // namespace stql
