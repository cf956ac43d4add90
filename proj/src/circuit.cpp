#include "qmse/circuit.hpp"
#include "qmse/error.hpp"

#include <algorithm>
#include <cctype>

namespace qmse {

const char* gate_name(GateKind k) {
    switch (k) {
    case GateKind::Ry: return "ry";
    case GateKind::Rx: return "rx";
    case GateKind::Rz: return "rz";
    case GateKind::Rxx: return "rxx";
    case GateKind::Ryy: return "ryy";
    case GateKind::Rzz: return "rzz";
    case GateKind::CZ: return "cz";
    case GateKind::CNOT: return "cnot";
    case GateKind::CRX: return "crx";
    case GateKind::X: return "x";
    }
    return "?";
}

GateKind gate_kind_from_name(const std::string& name) {
    std::string s;
    for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "ry") return GateKind::Ry;
    if (s == "rx") return GateKind::Rx;
    if (s == "rz") return GateKind::Rz;
    if (s == "rxx") return GateKind::Rxx;
    if (s == "ryy") return GateKind::Ryy;
    if (s == "rzz") return GateKind::Rzz;
    if (s == "cz") return GateKind::CZ;
    if (s == "cnot" || s == "cx") return GateKind::CNOT;
    if (s == "crx") return GateKind::CRX;
    if (s == "x") return GateKind::X;
    fail("unknown-gate", "unknown gate name '" + name + "'");
}

bool gate_is_two_qubit(GateKind k) {
    switch (k) {
    case GateKind::Rxx:
    case GateKind::Ryy:
    case GateKind::Rzz:
    case GateKind::CZ:
    case GateKind::CNOT:
    case GateKind::CRX:
        return true;
    default:
        return false;
    }
}

bool gate_has_angle(GateKind k) {
    switch (k) {
    case GateKind::CZ:
    case GateKind::CNOT:
    case GateKind::X:
        return false;
    default:
        return true;
    }
}

Gate Gate::one_q(GateKind k, int q, double angle) {
    if (gate_is_two_qubit(k)) fail("gate-arity", "two-qubit gate built with one qubit");
    Gate g;
    g.kind = k;
    g.qubits[0] = q;
    g.angle = angle;
    return g;
}

Gate Gate::two_q(GateKind k, int a, int b, double angle) {
    if (!gate_is_two_qubit(k)) fail("gate-arity", "one-qubit gate built with two qubits");
    Gate g;
    g.kind = k;
    g.qubits[0] = a;
    g.qubits[1] = b;
    g.angle = angle;
    return g;
}

void Circuit::append(const Circuit& other) {
    if (other.n_qubits != n_qubits)
        fail("width-mismatch", "appending circuits of different widths");
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

void Circuit::validate() const {
    if (n_qubits < 0) fail("bad-width", "negative circuit width");
    for (const auto& g : gates) {
        bool two = gate_is_two_qubit(g.kind);
        if (g.qubits[0] < 0 || g.qubits[0] >= n_qubits)
            fail("qubit-range", "gate qubit out of range");
        if (two) {
            if (g.qubits[1] < 0 || g.qubits[1] >= n_qubits)
                fail("qubit-range", "gate qubit out of range");
            if (g.qubits[1] == g.qubits[0])
                fail("qubit-range", "two-qubit gate with equal qubits");
        } else if (g.qubits[1] != -1) {
            fail("gate-arity", "single-qubit gate carries a second qubit");
        }
    }
}

PauliString PauliString::parse(const std::string& text) {
    if (text.empty()) fail("bad-observable", "empty Pauli string");
    if (text.size() > 64) fail("bad-observable", "Pauli string wider than 64 qubits");
    PauliString p;
    p.width = static_cast<int>(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
        if (c == 'Z') p.zmask |= uint64_t{1} << i;
        else if (c == 'X' || c == 'Y')
            fail("bad-observable", "only I/Z Pauli letters are implemented");
        else if (c != 'I')
            fail("bad-observable", std::string("bad Pauli letter '") + text[i] + "'");
    }
    return p;
}

PauliString PauliString::all_z(int width) {
    if (width < 1 || width > 64) fail("bad-observable", "bad observable width");
    PauliString p;
    p.width = width;
    p.zmask = (width == 64) ? ~uint64_t{0} : ((uint64_t{1} << width) - 1);
    return p;
}

std::string PauliString::str() const {
    std::string s(static_cast<size_t>(width), 'I');
    for (int i = 0; i < width; ++i)
        if (zmask & (uint64_t{1} << i)) s[static_cast<size_t>(i)] = 'Z';
    return s;
}

} // namespace qmse
