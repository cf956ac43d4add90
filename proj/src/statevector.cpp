#include "qmse/statevector.hpp"
#include "qmse/error.hpp"
#include "qmse/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace qmse {

using kern::cplx;

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 0 || n_qubits > 62) fail("bad-width", "unusable qubit count");
    amps_.assign(size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

void StateVector::apply(const Gate& g) {
    const auto& k = kern::active();
    cplx* a = amps_.data();
    const size_t n = amps_.size();
    const double half = 0.5 * g.angle;
    const cplx mi{0.0, -1.0};

    switch (g.kind) {
    case GateKind::Ry: {
        cplx u[4] = {std::cos(half), -std::sin(half), std::sin(half), std::cos(half)};
        k.apply_1q(a, n, g.qubits[0], u);
        break;
    }
    case GateKind::Rx: {
        cplx u[4] = {std::cos(half), mi * std::sin(half), mi * std::sin(half),
                     std::cos(half)};
        k.apply_1q(a, n, g.qubits[0], u);
        break;
    }
    case GateKind::Rz: {
        cplx u[4] = {std::exp(cplx{0.0, -half}), 0.0, 0.0, std::exp(cplx{0.0, half})};
        k.apply_1q(a, n, g.qubits[0], u);
        break;
    }
    case GateKind::X: {
        cplx u[4] = {0.0, 1.0, 1.0, 0.0};
        k.apply_1q(a, n, g.qubits[0], u);
        break;
    }
    case GateKind::Rxx:
        k.apply_2q_mix(a, n, g.qubits[0], g.qubits[1], std::cos(half),
                       mi * std::sin(half), mi * std::sin(half));
        break;
    case GateKind::Ryy:
        k.apply_2q_mix(a, n, g.qubits[0], g.qubits[1], std::cos(half),
                       cplx{0.0, 1.0} * std::sin(half), mi * std::sin(half));
        break;
    case GateKind::Rzz:
        k.apply_2q_diag(a, n, g.qubits[0], g.qubits[1], std::exp(cplx{0.0, -half}),
                        std::exp(cplx{0.0, half}));
        break;
    case GateKind::CZ: {
        cplx u[4] = {1.0, 0.0, 0.0, -1.0};
        k.apply_ctrl_1q(a, n, g.qubits[0], g.qubits[1], u);
        break;
    }
    case GateKind::CNOT: {
        cplx u[4] = {0.0, 1.0, 1.0, 0.0};
        k.apply_ctrl_1q(a, n, g.qubits[0], g.qubits[1], u);
        break;
    }
    case GateKind::CRX: {
        cplx u[4] = {std::cos(half), mi * std::sin(half), mi * std::sin(half),
                     std::cos(half)};
        k.apply_ctrl_1q(a, n, g.qubits[0], g.qubits[1], u);
        break;
    }
    }
}

double StateVector::norm() const {
    return std::sqrt(kern::active().sumabs2(amps_.data(), amps_.size()));
}

int default_qubit_cap() {
    const char* env = std::getenv("QMSE_MAX_QUBITS");
    if (!env || !*env) return 26;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 62)
        fail("bad-qubit-cap", "QMSE_MAX_QUBITS must be an integer in [1, 62]");
    return static_cast<int>(v);
}

StateVector run(const Circuit& c, int qubit_cap) {
    c.validate();
    int cap = qubit_cap >= 0 ? qubit_cap : default_qubit_cap();
    if (c.n_qubits > cap) {
        double gib = 16.0 * std::pow(2.0, c.n_qubits) / (1024.0 * 1024.0 * 1024.0);
        std::ostringstream os;
        os << "circuit needs " << c.n_qubits << " qubits, cap is " << cap << " (state would take "
           << gib << " GiB); raise QMSE_MAX_QUBITS to override";
        fail("qubit-limit", os.str());
    }
    StateVector s(c.n_qubits);
    for (const auto& g : c.gates) s.apply(g);
    return s;
}

std::complex<double> overlap(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) fail("width-mismatch", "states of different widths");
    return kern::active().inner(a.amplitudes().data(), b.amplitudes().data(),
                                a.amplitudes().size());
}

double expectation(const StateVector& s, const PauliString& h) {
    if (h.width != s.n_qubits())
        fail("width-mismatch", "observable width " + std::to_string(h.width) +
                                   " != state width " + std::to_string(s.n_qubits()));
    return kern::active().expect_z(s.amplitudes().data(), s.amplitudes().size(), h.zmask);
}

double fidelity(const Circuit& p, const Circuit& q, int qubit_cap) {
    if (p.n_qubits != q.n_qubits)
        fail("width-mismatch", "fidelity of circuits with different widths");
    StateVector sp = run(p, qubit_cap);
    StateVector sq = run(q, qubit_cap);
    return std::norm(overlap(sq, sp));
}

} // namespace qmse
