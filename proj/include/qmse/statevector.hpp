#pragma once

#include "qmse/circuit.hpp"

#include <complex>
#include <vector>

namespace qmse {

// Dense little-endian statevector (qubit 0 = least significant index
// bit). Construction yields |0...0>. Gate application is delegated to
// the runtime-selected kernel table.
class StateVector {
public:
    explicit StateVector(int n_qubits);

    int n_qubits() const { return n_; }
    size_t size() const { return amps_.size(); }
    const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
    std::complex<double> amp(size_t i) const { return amps_[i]; }

    void apply(const Gate& g);
    double norm() const;

private:
    int n_;
    std::vector<std::complex<double>> amps_;
};

// Default register cap: 26 qubits (1 GiB of complex doubles), overridden
// by the QMSE_MAX_QUBITS environment variable.
int default_qubit_cap();

// Validates the circuit, checks the width against `qubit_cap` (-1 means
// default) and applies all gates to |0...0>.
StateVector run(const Circuit& c, int qubit_cap = -1);

std::complex<double> overlap(const StateVector& a, const StateVector& b); // <a|b>

// Expectation value of an I/Z Pauli string; widths must match.
double expectation(const StateVector& s, const PauliString& h);

// |<psi_q|psi_p>|^2 of the two prepared states; widths must match.
double fidelity(const Circuit& p, const Circuit& q, int qubit_cap = -1);

} // namespace qmse
