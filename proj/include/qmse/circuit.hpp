#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmse {

enum class GateKind : uint8_t { Ry, Rx, Rz, Rxx, Ryy, Rzz, CZ, CNOT, CRX, X };

const char* gate_name(GateKind k);
GateKind gate_kind_from_name(const std::string& name); // case-insensitive
bool gate_is_two_qubit(GateKind k);
bool gate_has_angle(GateKind k);

// One gate instance. qubits[1] is -1 for single-qubit kinds. For CNOT and
// CRX qubits[0] is the control. Angles are in radians and used verbatim.
struct Gate {
    GateKind kind = GateKind::Ry;
    int qubits[2] = {-1, -1};
    double angle = 0.0;

    static Gate one_q(GateKind k, int q, double angle = 0.0);
    static Gate two_q(GateKind k, int a, int b, double angle = 0.0);
};

// Gate list over a fixed-width register, applied in order to |0...0>.
// Qubit 0 is the least significant bit of the amplitude index.
struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;

    void push(const Gate& g) { gates.push_back(g); }
    void append(const Circuit& other); // widths must match
    void validate() const;             // throws on bad qubit indices
};

// Pauli observable restricted to I/Z letters. The leftmost letter of the
// text form addresses qubit 0.
struct PauliString {
    int width = 0;
    uint64_t zmask = 0;

    static PauliString parse(const std::string& text);
    static PauliString all_z(int width);
    std::string str() const;
};

} // namespace qmse
