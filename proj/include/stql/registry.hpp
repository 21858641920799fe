#pragma once

// Molecule registry: built-in symmetric tops plus flat `key = value` files.
//
//   # comment
//   name = CH3CN
//   mu_debye = 3.92
//   A_MHz = 158099.0
//   B_MHz = 9198.8
//   eqQ_MHz = -4.22
//   spin_I = 1
//
// A record starts at its `name` line and runs to the next `name` line or EOF.
// name, mu_debye, A_MHz and B_MHz are required; eqQ_MHz and spin_I default to 0.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "stql/params.hpp"

namespace stql {

class RegistryError : public std::runtime_error {
public:
    RegistryError(const std::string& source, int line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

class RegistryConflict : public std::runtime_error {
public:
    explicit RegistryConflict(const std::string& name)
        : std::runtime_error("duplicate molecule name: " + name), name_(name) {}

    [[nodiscard]] const std::string& name() const { return name_; }

private:
    std::string name_;
};

/// Built-in entries. eqQ values for every entry and all CH3CN constants come from the
/// molecular-qubit literature; dipoles and rotational constants of the other tops are
/// approximate spectroscopic values and only matter for single-molecule reports.
inline std::vector<MoleculeParams> builtin_molecules() {
    return {
        {"CH3CN", 3.92, 158099.0, 9198.8, -4.22, 1.0},
        {"NH3", 1.4718, 186726.0, 298117.0, -4.09, 1.0},
        {"NF3", 0.235, 5828.0, 10681.0, 7.07, 1.0},
        {"CH3D", 0.0056, 157400.0, 116317.0, 0.191, 1.0},
        {"CF3D", 1.65, 5673.0, 10145.0, 0.171, 1.0},
    };
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
    double value = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

inline std::string format_round_trip(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

struct PendingRecord {
    MoleculeParams params;
    int line = 0;
    bool has_mu = false, has_a = false, has_b = false, has_eqq = false, has_spin = false;
};

}  // namespace detail

/// Parses registry text. Values are validated; duplicate names within the text conflict.
inline std::vector<MoleculeParams> parse_registry(std::istream& in, const std::string& source = "<registry>") {
    std::vector<MoleculeParams> out;
    std::optional<detail::PendingRecord> rec;

    auto finish = [&]() {
        if (!rec) return;
        if (!rec->has_mu) throw RegistryError(source, rec->line, "record '" + rec->params.name + "' lacks mu_debye");
        if (!rec->has_a) throw RegistryError(source, rec->line, "record '" + rec->params.name + "' lacks A_MHz");
        if (!rec->has_b) throw RegistryError(source, rec->line, "record '" + rec->params.name + "' lacks B_MHz");
        try {
            rec->params.validate();
        } catch (const std::invalid_argument& e) {
            throw RegistryError(source, rec->line, e.what());
        }
        for (const auto& m : out)
            if (m.name == rec->params.name) throw RegistryConflict(m.name);
        out.push_back(rec->params);
        rec.reset();
    };

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw RegistryError(source, line_no, "expected 'key = value'");
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw RegistryError(source, line_no, "empty key or value");

        if (key == "name") {
            finish();
            rec.emplace();
            rec->params.name = std::string(value);
            rec->line = line_no;
            continue;
        }
        if (!rec) throw RegistryError(source, line_no, "'" + std::string(key) + "' before any 'name'");

        const auto number = detail::parse_double(value);
        if (!number) throw RegistryError(source, line_no, "not a number: '" + std::string(value) + "'");

        auto assign = [&](bool& seen, double& field) {
            if (seen) throw RegistryError(source, line_no, "repeated key '" + std::string(key) + "'");
            seen = true;
            field = *number;
        };
        if (key == "mu_debye") assign(rec->has_mu, rec->params.mu_debye);
        else if (key == "A_MHz") assign(rec->has_a, rec->params.a_mhz);
        else if (key == "B_MHz") assign(rec->has_b, rec->params.b_mhz);
        else if (key == "eqQ_MHz") assign(rec->has_eqq, rec->params.eqq_mhz);
        else if (key == "spin_I") assign(rec->has_spin, rec->params.spin_i);
        else throw RegistryError(source, line_no, "unknown key '" + std::string(key) + "'");
    }
    finish();
    return out;
}

/// Writes entries in the registry format with round-trip (shortest exact) numbers.
inline std::string serialize_registry(const std::vector<MoleculeParams>& molecules) {
    std::ostringstream os;
    for (std::size_t i = 0; i < molecules.size(); ++i) {
        const auto& m = molecules[i];
        if (i) os << '\n';
        os << "name = " << m.name << '\n'
           << "mu_debye = " << detail::format_round_trip(m.mu_debye) << '\n'
           << "A_MHz = " << detail::format_round_trip(m.a_mhz) << '\n'
           << "B_MHz = " << detail::format_round_trip(m.b_mhz) << '\n'
           << "eqQ_MHz = " << detail::format_round_trip(m.eqq_mhz) << '\n'
           << "spin_I = " << detail::format_round_trip(m.spin_i) << '\n';
    }
    return os.str();
}

/// Appends `extra` to `base`, rejecting any name already present.
inline void merge_registry(std::vector<MoleculeParams>& base, const std::vector<MoleculeParams>& extra) {
    for (const auto& m : extra) {
        if (std::any_of(base.begin(), base.end(), [&](const auto& b) { return b.name == m.name; }))
            throw RegistryConflict(m.name);
        base.push_back(m);
    }
}

/// Built-ins merged with the entries of `path`.
inline std::vector<MoleculeParams> load_molecule_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open molecule registry: " + path);
    auto registry = builtin_molecules();
    merge_registry(registry, parse_registry(in, path));
    return registry;
}

/// Built-ins, plus the file named by STQL_MOLECULES when that variable is set.
inline std::vector<MoleculeParams> default_registry() {
    const char* env = std::getenv("STQL_MOLECULES");
    if (env == nullptr || *env == '\0') return builtin_molecules();
    return load_molecule_registry(env);
}

inline const MoleculeParams& find_molecule(const std::vector<MoleculeParams>& registry, std::string_view name) {
    for (const auto& m : registry)
        if (m.name == name) return m;
    throw std::invalid_argument("unknown molecule: " + std::string(name));
}

}  // namespace stql
