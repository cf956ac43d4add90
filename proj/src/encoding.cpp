#include "qmse/encoding.hpp"
#include "qmse/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

namespace qmse {

namespace {

double eps_t(const Atom& a, bool use_stereo) {
    if (!use_stereo) return 1.0;
    return a.parity == TetraParity::Minus ? -1.0 : 1.0;
}

double eps_d(const Bond& b, bool use_stereo) {
    if (!use_stereo) return 1.0;
    return b.ez == EzFlag::Z ? -1.0 : 1.0;
}

} // namespace

CouplingMatrix build_matrix(const MolGraph& g, const EncodingParams& p) {
    if (g.n_atoms() == 0) fail("empty-graph", "cannot encode an empty graph");
    CouplingMatrix m;
    m.n = g.n_atoms();
    m.values.assign(static_cast<size_t>(m.n) * m.n, 0.0);
    for (int i = 0; i < m.n; ++i)
        m.at(i, i) = 0.5 * eps_t(g.atoms[i], p.use_stereo) * std::pow(g.atoms[i].z, p.d);
    for (const auto& b : g.bonds) {
        double v = eps_d(b, p.use_stereo) * g.atoms[b.a].z * g.atoms[b.b].z / b.order;
        m.at(b.a, b.b) = v;
        m.at(b.b, b.a) = v;
    }
    return m;
}

Circuit build_qmse_circuit(const CouplingMatrix& m, const EncodingParams& p, int width) {
    if (p.gate_1q != GateKind::Ry && p.gate_1q != GateKind::Rx && p.gate_1q != GateKind::Rz)
        fail("gate-family", "single-qubit encoding gate must be a rotation (ry/rx/rz)");
    if (p.gate_2q != GateKind::Rxx && p.gate_2q != GateKind::Ryy && p.gate_2q != GateKind::Rzz)
        fail("gate-family", "two-qubit encoding gate must be a coupling rotation (rxx/ryy/rzz)");
    if (p.layers_x < 1) fail("bad-layers", "layers_x must be >= 1");
    if (width < 0) width = m.n;
    if (width < m.n) fail("width-mismatch", "register narrower than the molecule");

    Circuit c;
    c.n_qubits = width;
    for (int rep = 0; rep < p.layers_x; ++rep) {
        for (int i = 0; i < m.n; ++i)
            c.push(Gate::one_q(p.gate_1q, i, m.at(i, i)));
        for (int i = 0; i < m.n; ++i)
            for (int j = i + 1; j < m.n; ++j)
                if (m.at(i, j) != 0.0)
                    c.push(Gate::two_q(p.gate_2q, i, j, m.at(i, j)));
    }
    return c;
}

Fingerprint::Fingerprint(int bits) : nbits(bits) {
    words.assign(static_cast<size_t>((bits + 63) / 64), 0);
}

bool Fingerprint::test(int i) const {
    return (words[static_cast<size_t>(i) / 64] >> (i % 64)) & 1;
}

void Fingerprint::set(int i) { words[static_cast<size_t>(i) / 64] |= uint64_t{1} << (i % 64); }

int Fingerprint::popcount() const {
    int n = 0;
    for (uint64_t w : words) n += std::popcount(w);
    return n;
}

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Grows every simple path starting at `u`, emitting the canonical string
// (smaller of the two read directions) for each prefix.
void grow_paths(const MolGraph& g, int u, int max_bonds, std::vector<int>& path,
                std::vector<bool>& on_path, std::set<std::string>& out) {
    auto render = [&](bool forward) {
        std::string s;
        int n = static_cast<int>(path.size());
        for (int k = 0; k < n; ++k) {
            int idx = forward ? k : n - 1 - k;
            if (k > 0) {
                int prev = forward ? path[idx - 1] : path[idx + 1];
                s += ':';
                s += std::to_string(g.find_bond(prev, path[idx])->order);
                s += ':';
            }
            s += std::to_string(g.atoms[path[idx]].z);
        }
        return s;
    };
    std::string fwd = render(true), rev = render(false);
    out.insert(fwd < rev ? fwd : rev);

    if (static_cast<int>(path.size()) - 1 >= max_bonds) return;
    for (int m : g.neighbors(u)) {
        if (on_path[m]) continue;
        path.push_back(m);
        on_path[m] = true;
        grow_paths(g, m, max_bonds, path, on_path, out);
        on_path[m] = false;
        path.pop_back();
    }
}

} // namespace

Fingerprint topological_fingerprint(const MolGraph& g, int nbits, int max_path) {
    if (nbits < 64 || (nbits & (nbits - 1)) != 0)
        fail("bad-nbits", "fingerprint width must be a power of two >= 64");
    if (max_path < 0) fail("bad-max-path", "negative path length");

    std::set<std::string> paths;
    std::vector<int> path;
    std::vector<bool> on_path(static_cast<size_t>(g.n_atoms()), false);
    for (int a = 0; a < g.n_atoms(); ++a) {
        path = {a};
        on_path[a] = true;
        grow_paths(g, a, max_path, path, on_path, paths);
        on_path[a] = false;
    }

    Fingerprint fp(nbits);
    for (const auto& s : paths)
        fp.set(static_cast<int>(fnv1a(s) % static_cast<uint64_t>(nbits)));
    return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
    if (a.nbits != b.nbits) fail("width-mismatch", "fingerprints of different widths");
    int inter = 0;
    for (size_t i = 0; i < a.words.size(); ++i)
        inter += std::popcount(a.words[i] & b.words[i]);
    int na = a.popcount(), nb = b.popcount();
    int uni = na + nb - inter;
    if (uni == 0) return 1.0; // two empty fingerprints are identical
    return static_cast<double>(inter) / uni;
}

namespace {

Eigen::VectorXd to_vector(const Fingerprint& fp) {
    Eigen::VectorXd v(fp.nbits);
    for (int i = 0; i < fp.nbits; ++i) v[i] = fp.test(i) ? 1.0 : 0.0;
    return v;
}

} // namespace

PCAModel pca_fit(const std::vector<Fingerprint>& rows, int k) {
    const int n = static_cast<int>(rows.size());
    if (n < 2) fail("pca-rows", "need at least two rows to fit");
    if (k < 1) fail("pca-rank", "component count must be positive");
    const int f = rows[0].nbits;
    for (const auto& r : rows)
        if (r.nbits != f) fail("width-mismatch", "fingerprints of different widths");

    Eigen::MatrixXd x(n, f);
    for (int i = 0; i < n; ++i) x.row(i) = to_vector(rows[i]).transpose();
    Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd xc = x.rowwise() - mean;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(xc, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double tol = sv.size() ? sv[0] * std::max(n, f) * 1e-15 : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tol) ++rank;
    if (k > rank)
        fail("pca-rank", "requested " + std::to_string(k) + " components, data rank is " +
                             std::to_string(rank));

    PCAModel m;
    m.n_features = f;
    m.k = k;
    m.mean.assign(mean.data(), mean.data() + f);
    for (int c = 0; c < k; ++c) {
        Eigen::VectorXd comp = svd.matrixV().col(c);
        // deterministic orientation: largest-magnitude coefficient positive
        int imax = 0;
        for (int i = 1; i < f; ++i)
            if (std::abs(comp[i]) > std::abs(comp[imax])) imax = i;
        if (comp[imax] < 0) comp = -comp;
        m.components.emplace_back(comp.data(), comp.data() + f);
        m.explained_variance.push_back(sv[c] * sv[c] / (n - 1));
    }
    for (int c = 0; c < k; ++c) {
        double lo = 0, hi = 0;
        bool first = true;
        for (int i = 0; i < n; ++i) {
            double t = 0;
            for (int j = 0; j < f; ++j)
                t += (x(i, j) - m.mean[static_cast<size_t>(j)]) *
                     m.components[static_cast<size_t>(c)][static_cast<size_t>(j)];
            if (first || t < lo) lo = t;
            if (first || t > hi) hi = t;
            first = false;
        }
        m.feature_range.emplace_back(lo, hi);
    }
    return m;
}

std::vector<double> pca_project(const PCAModel& m, const Fingerprint& fp) {
    if (fp.nbits != m.n_features) fail("width-mismatch", "fingerprint width != model features");
    std::vector<double> out(static_cast<size_t>(m.k), 0.0);
    for (int c = 0; c < m.k; ++c) {
        double t = 0;
        for (int j = 0; j < m.n_features; ++j) {
            double v = (fp.test(j) ? 1.0 : 0.0) - m.mean[static_cast<size_t>(j)];
            t += v * m.components[static_cast<size_t>(c)][static_cast<size_t>(j)];
        }
        out[static_cast<size_t>(c)] = t;
    }
    return out;
}

Circuit build_fingerprint_circuit(const std::vector<double>& coords, const PCAModel& m,
                                  int n_qubits, int layers_x) {
    if (static_cast<int>(coords.size()) != n_qubits)
        fail("width-mismatch", "coordinate count != qubit count");
    if (m.k != n_qubits)
        fail("width-mismatch", "model component count != qubit count");
    if (layers_x < 1) fail("bad-layers", "layers_x must be >= 1");

    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> angles(coords.size(), 0.0);
    for (size_t i = 0; i < coords.size(); ++i) {
        auto [lo, hi] = m.feature_range[i];
        if (hi > lo) {
            double t = (coords[i] - lo) / (hi - lo);
            t = std::clamp(t, 0.0, 1.0);
            angles[i] = -two_pi + 4.0 * std::numbers::pi * t;
        }
    }

    Circuit c;
    c.n_qubits = n_qubits;
    for (int rep = 0; rep < layers_x; ++rep) {
        for (int i = 0; i < n_qubits; ++i)
            c.push(Gate::one_q(GateKind::Ry, i, angles[static_cast<size_t>(i)]));
        for (int i = 0; i + 1 < n_qubits; ++i)
            c.push(Gate::two_q(GateKind::CNOT, i, i + 1));
    }
    return c;
}

} // namespace qmse
