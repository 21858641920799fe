#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stql/stql.hpp"

namespace {

using stql::format_g12;

using Cell = std::variant<std::string, double, long long>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string render_cell(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return format_g12(std::get<double>(c));
}

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << render_cell(row[i]);
        os << '\n';
    }
}

// Numbers go through the same 12-digit text as the CSV so both formats carry equal values.
void write_json(std::ostream& os, const Table& t) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& c = row[i];
            if (const auto* s = std::get_if<std::string>(&c)) {
                obj[t.columns[i]] = *s;
            } else if (const auto* n = std::get_if<long long>(&c)) {
                obj[t.columns[i]] = *n;
            } else {
                const double v = std::get<double>(c);
                if (std::isfinite(v))
                    obj[t.columns[i]] = std::stod(format_g12(v));
                else
                    obj[t.columns[i]] = nullptr;
            }
        }
        arr.push_back(std::move(obj));
    }
    os << arr.dump(2) << '\n';
}

struct RunConfig {
    std::string molecule = "CH3CN";
    std::string registry;
    double field_v_cm = 500.0;
    std::optional<double> dfield_v_cm;
    double dx = 1e-3;
    double spacing_um = 0.5;
    double alpha_deg = 90.0;
    std::string type = "I";
    std::string out = "-";
    std::string format = "csv";

    [[nodiscard]] std::vector<stql::MoleculeParams> registry_entries() const {
        return registry.empty() ? stql::default_registry() : stql::load_molecule_registry(registry);
    }
    [[nodiscard]] stql::MoleculeParams mol() const { return stql::find_molecule(registry_entries(), molecule); }
    [[nodiscard]] stql::FieldGeometry geometry(const stql::MoleculeParams& m) const {
        stql::FieldGeometry g;
        g.field_v_cm = field_v_cm;
        g.field_prime_v_cm = dfield_v_cm ? field_v_cm + *dfield_v_cm : stql::field_for_delta_x(m, field_v_cm, dx);
        g.spacing_um = spacing_um;
        g.alpha_deg = alpha_deg;
        return g;
    }
    [[nodiscard]] stql::ReducedVars reduced(const stql::MoleculeParams& m) const {
        return stql::reduced_vars(m, geometry(m));
    }
};

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--molecule", cfg.molecule, "Molecule name from the registry")->capture_default_str();
    sub->add_option("--registry", cfg.registry, "Extra molecule registry file");
    sub->add_option("--field-v-cm", cfg.field_v_cm, "Field at site 1 (V/cm)")->capture_default_str();
    sub->add_option("--dfield-v-cm", cfg.dfield_v_cm, "Field offset at site 2 (V/cm); overrides --dx");
    sub->add_option("--dx", cfg.dx, "Reduced field offset x' - x")->capture_default_str();
    sub->add_option("--spacing-um", cfg.spacing_um, "Dipole spacing r12 (um)")->capture_default_str();
    sub->add_option("--alpha-deg", cfg.alpha_deg, "Angle between r12 and the field (deg)")->capture_default_str();
    sub->add_option("--type", cfg.type, "Qubit encoding: I or II")->capture_default_str();
    sub->add_option("--out", cfg.out, "Output path, '-' for stdout")->capture_default_str();
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

void emit(const RunConfig& cfg, const Table& t) {
    std::ostringstream buf;
    if (cfg.format == "json")
        write_json(buf, t);
    else
        write_csv(buf, t);
    if (cfg.out == "-" || cfg.out.empty()) {
        std::cout << buf.str();
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + cfg.out);
    f << buf.str();
    f.close();
    if (!f) throw std::runtime_error("failed writing output file: " + cfg.out);
}

Table molecule_table(const std::vector<stql::MoleculeParams>& mols) {
    Table t{{"name", "mu_debye", "A_MHz", "B_MHz", "eqQ_MHz", "spin_I"}, {}};
    for (const auto& m : mols) t.rows.push_back({m.name, m.mu_debye, m.a_mhz, m.b_mhz, m.eqq_mhz, m.spin_i});
    return t;
}

Table reduced_table(const RunConfig& cfg) {
    const auto m = cfg.mol();
    const auto g = cfg.geometry(m);
    const auto rv = stql::reduced_vars(m, g);
    Table t{{"molecule", "field_v_cm", "field_prime_v_cm", "stark_MHz", "omega_alpha_kHz", "x", "x_prime", "delta_x",
             "y", "z", "w"},
            {}};
    t.rows.push_back({m.name, g.field_v_cm, g.field_prime_v_cm, stql::stark_frequency(m.mu_debye, g.field_v_cm),
                      stql::dipole_dipole_strength(m.mu_debye, g.spacing_um, g.alpha_deg), rv.x, rv.x_prime,
                      rv.delta_x(), rv.y, rv.z, rv.w});
    return t;
}

Table stark_map_table(const RunConfig& cfg, double x_max, int points, const std::vector<int>& j_list) {
    if (!(x_max > 0.0)) throw std::invalid_argument("stark-map: --x-max must be > 0");
    if (points < 2) throw std::invalid_argument("stark-map: --points must be >= 2");
    const auto m = cfg.mol();
    std::vector<double> xs;
    for (int i = 0; i < points; ++i) xs.push_back(x_max * i / (points - 1));
    Table t{{"x", "J", "K", "M", "W_over_B", "cos_exp"}, {}};
    for (const auto& r : stql::stark_map(m, 1, j_list, xs))
        t.rows.push_back({r.x, static_cast<long long>(r.J), static_cast<long long>(r.K), static_cast<long long>(r.M),
                          r.w_over_b, r.cos_exp});
    return t;
}

std::vector<stql::QubitType> selected_types(const RunConfig& cfg, bool type_given) {
    if (type_given) return {stql::parse_qubit_type(cfg.type)};
    return {stql::QubitType::I, stql::QubitType::II};
}

Table cosines_table(const RunConfig& cfg, bool type_given, std::optional<double> w_opt, bool refit) {
    const auto types = selected_types(cfg, type_given);
    if (refit) {
        Table t{{"element", "c0", "c1", "c2", "residual"}, {}};
        for (auto ty : types)
            for (const auto& f : stql::refit_table1(ty, stql::table1_default_grid()))
                t.rows.push_back({std::string(stql::to_string(ty)) + ":" + f.element, f.c0, f.c1, f.c2, f.residual});
        return t;
    }
    const double w = w_opt ? *w_opt : cfg.reduced(cfg.mol()).w;
    Table t{{"type", "w", "C0", "C1", "CX"}, {}};
    for (auto ty : types) {
        const auto c = stql::dressed_cosines(ty, w);
        t.rows.push_back({std::string(stql::to_string(ty)), w, c.c0, c.c1, c.cx});
    }
    return t;
}

Table pair_table(const RunConfig& cfg, bool type_given, bool no_quadrupole) {
    const auto m = cfg.mol();
    const auto rv = cfg.reduced(m);
    Table t{{"type", "state", "E_over_B", "E_MHz", "formula_over_B", "a", "b", "c", "d", "C12"}, {}};
    for (auto ty : selected_types(cfg, type_given)) {
        const auto es = stql::diagonalize_pair(stql::build_pair_hamiltonian(ty, rv, {!no_quadrupole, +1}));
        for (int i = 0; i < 4; ++i) {
            const auto& q = es.coeffs[i];
            t.rows.push_back({std::string(stql::to_string(ty)), static_cast<long long>(i + 1), es.energies[i],
                              stql::pair_energy_mhz(es.energies[i], m), stql::eigenvalue_formula(ty, rv, i + 1).value,
                              q[0], q[1], q[2], q[3], stql::concurrence_pure(q)});
        }
    }
    return t;
}

Table frequency_table(const RunConfig& cfg, bool type_given) {
    const auto m = cfg.mol();
    const auto rv = cfg.reduced(m);
    Table t{{"encoding", "omega1_MHz", "omega2_MHz", "omega3_MHz", "omega4_MHz", "delta_omega_kHz"}, {}};
    auto row = [&](const std::string& label, const stql::TransitionSet& s) {
        std::vector<Cell> r{label};
        for (double w : s.omega) r.emplace_back(w * m.b_mhz);
        r.emplace_back(s.delta_omega * m.b_mhz * 1e3);
        t.rows.push_back(std::move(r));
    };
    for (auto ty : selected_types(cfg, type_given)) {
        const auto rep = stql::transition_frequencies(ty, rv);
        const std::string name = stql::to_string(ty);
        row(name + "/exact", rep.exact);
        row(name + "/closed_form", rep.closed_form);
    }
    return t;
}

Table scan_table(const RunConfig& cfg, bool type_given, double rmin, double rmax, int points) {
    if (!(rmin > 0.0 && rmax > rmin)) throw std::invalid_argument("concurrence-scan: need 0 < ratio-min < ratio-max");
    const auto m = cfg.mol();
    const auto rv = cfg.reduced(m);
    const auto ratios = stql::log_grid(rmin, rmax, points);
    Table t{{"ratio", "c12_exact", "c12_model", "encoding"}, {}};
    for (auto ty : selected_types(cfg, type_given))
        for (const auto& r : stql::fig2_scan(ty, rv, ratios))
            t.rows.push_back({r.ratio, r.c12_exact, r.c12_model, std::string(stql::to_string(ty))});
    return t;
}

Table pulse_table(const RunConfig& cfg, const std::string& sequence) {
    const auto steps = stql::parse_sequence(sequence);
    const auto m = cfg.mol();
    const auto rv = cfg.reduced(m);
    const auto ty = stql::parse_qubit_type(cfg.type);
    const stql::PairSimulator sim(stql::diagonalize_pair(stql::build_pair_hamiltonian(ty, rv)), m.b_mhz);
    const auto r = sim.run(steps, sim.ground());
    Table t{{"state", "re", "im", "population", "concurrence", "elapsed_s"}, {}};
    const char* labels[4] = {"00", "01", "10", "11"};
    for (int k = 0; k < 4; ++k)
        t.rows.push_back({std::string(labels[k]), r.basis_state.amp[k].real(), r.basis_state.amp[k].imag(),
                          std::norm(r.basis_state.amp[k]), r.concurrence, r.elapsed_s});
    return t;
}

Table verify_table(bool& all_pass) {
    Table t{{"check", "reference", "value", "residual", "tolerance", "mode", "status"}, {}};
    all_pass = true;
    for (const auto& c : stql::run_verification()) {
        all_pass = all_pass && c.pass;
        t.rows.push_back({c.name, c.reference, c.value, c.residual, c.tolerance,
                          std::string(c.relative ? "relative" : "absolute"), std::string(c.pass ? "PASS" : "FAIL")});
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stql: symmetric-top rotational qubits"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* molecule = app.add_subcommand("molecule", "Show registry entries");
    add_common(molecule, cfg);
    bool all_molecules = false;
    molecule->add_flag("--all", all_molecules, "List every registered molecule");

    auto* reduced = app.add_subcommand("reduced", "Reduced variables x, x', y, z, w");
    add_common(reduced, cfg);

    auto* stark_map = app.add_subcommand("stark-map", "First-order Stark levels and <cos theta> for K = 1");
    add_common(stark_map, cfg);
    double x_max = 1.0;
    int points = 101;
    std::vector<int> j_list{1, 2};
    stark_map->add_option("--x-max", x_max, "Largest mu eps / B")->capture_default_str();
    stark_map->add_option("--points", points, "Grid points")->capture_default_str();
    stark_map->add_option("--j", j_list, "J values")->delimiter(',')->capture_default_str();

    auto* cosines = app.add_subcommand("cosines", "Quadrupole-dressed cosine elements");
    add_common(cosines, cfg);
    std::optional<double> w_opt;
    bool refit = false;
    cosines->add_option("--w", w_opt, "Quadrupole ratio w (default: from the configuration)");
    cosines->add_flag("--refit", refit, "Quadratic refit over w < 1");

    auto* pair = app.add_subcommand("pair", "Two-dipole eigensystem");
    add_common(pair, cfg);
    bool no_quadrupole = false;
    pair->add_flag("--no-quadrupole", no_quadrupole, "Drop quadrupole terms");

    auto* freqs = app.add_subcommand("frequencies", "Transition frequencies and delta omega");
    add_common(freqs, cfg);

    auto* scan = app.add_subcommand("concurrence-scan", "Middle-pair concurrence against (E3 - E2)/Delta");
    add_common(scan, cfg);
    double rmin = 1e-2, rmax = 1e2;
    int scan_points = 41;
    scan->add_option("--ratio-min", rmin)->capture_default_str();
    scan->add_option("--ratio-max", rmax)->capture_default_str();
    scan->add_option("--points", scan_points)->capture_default_str();

    auto* pulse = app.add_subcommand("pulse-sim", "Run a pulse sequence from the ground eigenstate");
    add_common(pulse, cfg);
    std::string sequence;
    pulse->add_option("--sequence", sequence, "e.g. pi2@w1,pi@w2 or pi2@site1,free@27us,pulse(area=1.57,phase=3.14)@site1");

    auto* verify = app.add_subcommand("verify", "Refit reference constants and check tolerances");
    add_common(verify, cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        auto* sub = app.get_subcommands().front();
        const bool type_given = sub->get_option("--type")->count() > 0;
        if (sub == molecule) {
            const auto regs = cfg.registry_entries();
            emit(cfg, all_molecules ? molecule_table(regs) : molecule_table({stql::find_molecule(regs, cfg.molecule)}));
        } else if (sub == reduced) {
            emit(cfg, reduced_table(cfg));
        } else if (sub == stark_map) {
            emit(cfg, stark_map_table(cfg, x_max, points, j_list));
        } else if (sub == cosines) {
            emit(cfg, cosines_table(cfg, type_given, w_opt, refit));
        } else if (sub == pair) {
            emit(cfg, pair_table(cfg, type_given, no_quadrupole));
        } else if (sub == freqs) {
            emit(cfg, frequency_table(cfg, type_given));
        } else if (sub == scan) {
            emit(cfg, scan_table(cfg, type_given, rmin, rmax, scan_points));
        } else if (sub == pulse) {
            emit(cfg, pulse_table(cfg, sequence));
        } else if (sub == verify) {
            bool ok = true;
            emit(cfg, verify_table(ok));
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "stql: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
