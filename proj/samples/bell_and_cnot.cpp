// Bell-state preparation and the precession CNOT for two CH3CN molecules at the
// default conditions (500 V/cm, x' - x = 1e-3, 0.5 um, alpha = 90 deg).

#include <cstdio>

#include "stql/stql.hpp"

int main() {
    const auto mol = stql::find_molecule(stql::builtin_molecules(), "CH3CN");
    stql::FieldGeometry geom;
    geom.field_prime_v_cm = stql::field_for_delta_x(mol, geom.field_v_cm, 1e-3);
    const auto rv = stql::reduced_vars(mol, geom);

    for (auto type : {stql::QubitType::I, stql::QubitType::II}) {
        const auto freqs = stql::transition_frequencies(type, rv);
        const auto bell = stql::bell_sequence(type, rv, mol.b_mhz);
        const double dw_hz = freqs.exact.delta_omega * mol.b_mhz * 1e6;
        const auto cnot = stql::precession_cnot(type, rv, mol.b_mhz, 1.0 / (2.0 * dw_hz));
        std::printf("type %-2s  delta omega = %8.3f kHz  Bell C12 = %.6f  CNOT fidelity = %.6f at t = %.2f us\n",
                    stql::to_string(type), dw_hz * 1e-3, bell.concurrence, cnot.cnot_fidelity, cnot.time_s * 1e6);
    }
}
