#pragma once

// Independent full-unitary reference: builds the dense 2^n x 2^n matrix of
// each gate straight from the exp(-i theta/2 P) definitions and multiplies
// it into a dense state. Deliberately shares no code with the library's
// amplitude-sweep implementation.

#include "qmse/circuit.hpp"

#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = std::vector<std::vector<cplx>>;

inline Mat gate_matrix_1q(qmse::GateKind k, double t) {
    const cplx i(0.0, 1.0);
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    switch (k) {
    case qmse::GateKind::Ry: return {{c, -s}, {s, c}};
    case qmse::GateKind::Rx: return {{c, -i * s}, {-i * s, c}};
    case qmse::GateKind::Rz: return {{std::exp(-i * (t / 2)), 0.0}, {0.0, std::exp(i * (t / 2))}};
    case qmse::GateKind::X: return {{0.0, 1.0}, {1.0, 0.0}};
    default: return {};
    }
}

// basis order |ab> with a = first listed qubit, b = second
inline Mat gate_matrix_2q(qmse::GateKind k, double t) {
    const cplx i(0.0, 1.0);
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    Mat m(4, std::vector<cplx>(4, 0.0));
    switch (k) {
    case qmse::GateKind::Rxx:
        for (int d = 0; d < 4; ++d) m[d][d] = c;
        for (int d = 0; d < 4; ++d) m[d][3 - d] = -i * s;
        break;
    case qmse::GateKind::Ryy:
        for (int d = 0; d < 4; ++d) m[d][d] = c;
        m[0][3] = m[3][0] = i * s;
        m[1][2] = m[2][1] = -i * s;
        break;
    case qmse::GateKind::Rzz:
        m[0][0] = m[3][3] = std::exp(-i * (t / 2));
        m[1][1] = m[2][2] = std::exp(i * (t / 2));
        break;
    case qmse::GateKind::CZ:
        m[0][0] = m[1][1] = m[2][2] = 1.0;
        m[3][3] = -1.0;
        break;
    case qmse::GateKind::CNOT:
        m[0][0] = m[1][1] = 1.0;
        m[2][3] = m[3][2] = 1.0;
        break;
    case qmse::GateKind::CRX:
        m[0][0] = m[1][1] = 1.0;
        m[2][2] = m[3][3] = c;
        m[2][3] = m[3][2] = -i * s;
        break;
    default: break;
    }
    return m;
}

inline int bit(size_t x, int q) { return static_cast<int>((x >> q) & 1); }

// state after the circuit, as a plain amplitude vector (qubit 0 = LSB)
inline std::vector<cplx> run_naive(const qmse::Circuit& c) {
    const size_t dim = size_t(1) << c.n_qubits;
    std::vector<cplx> state(dim, 0.0);
    state[0] = 1.0;
    for (const auto& g : c.gates) {
        std::vector<cplx> next(dim, 0.0);
        if (g.qubits[1] < 0) {
            Mat u = gate_matrix_1q(g.kind, g.angle);
            for (size_t col = 0; col < dim; ++col) {
                if (state[col] == cplx(0.0)) continue;
                int b = bit(col, g.qubits[0]);
                for (int r = 0; r < 2; ++r) {
                    size_t row = (col & ~(size_t(1) << g.qubits[0])) |
                                 (size_t(r) << g.qubits[0]);
                    next[row] += u[r][b] * state[col];
                }
            }
        } else {
            Mat u = gate_matrix_2q(g.kind, g.angle);
            int qa = g.qubits[0], qb = g.qubits[1];
            for (size_t col = 0; col < dim; ++col) {
                if (state[col] == cplx(0.0)) continue;
                int sub = 2 * bit(col, qa) + bit(col, qb);
                size_t base = col & ~((size_t(1) << qa) | (size_t(1) << qb));
                for (int r = 0; r < 4; ++r) {
                    if (u[r][sub] == cplx(0.0)) continue;
                    size_t row = base | (size_t(r >> 1) << qa) | (size_t(r & 1) << qb);
                    next[row] += u[r][sub] * state[col];
                }
            }
        }
        state = std::move(next);
    }
    return state;
}

} // namespace oracle
