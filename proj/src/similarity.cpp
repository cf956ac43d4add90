#include "qmse/similarity.hpp"
#include "qmse/contraction.hpp"
#include "qmse/error.hpp"
#include "qmse/statevector.hpp"

#include <json.hpp>

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace qmse {

std::string fmt12(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

namespace {

const char* kind_name(SimilarityKind k) {
    return k == SimilarityKind::Tanimoto ? "tanimoto" : "fidelity";
}

SimilarityMatrix make_empty(SimilarityKind kind, const std::vector<std::string>& labels) {
    SimilarityMatrix m;
    m.kind = kind;
    m.labels = labels;
    m.values.assign(labels.size() * labels.size(), 0.0);
    return m;
}

void check_labels(size_t n_mols, const std::vector<std::string>& labels) {
    if (n_mols != labels.size())
        fail("label-mismatch", "got " + std::to_string(n_mols) + " molecules but " +
                                   std::to_string(labels.size()) + " labels");
}

} // namespace

SimilarityMatrix tanimoto_matrix(const std::vector<MolGraph>& mols,
                                 const std::vector<std::string>& labels, int nbits,
                                 int max_path) {
    check_labels(mols.size(), labels);
    SimilarityMatrix m = make_empty(SimilarityKind::Tanimoto, labels);
    const int n = m.n();
    std::vector<Fingerprint> fps;
    fps.reserve(mols.size());
    for (const auto& g : mols) fps.push_back(topological_fingerprint(g, nbits, max_path));
    for (int i = 0; i < n; ++i) {
        m.values[static_cast<size_t>(i) * n + i] = 1.0;
        for (int j = i + 1; j < n; ++j) {
            double t = tanimoto(fps[i], fps[j]);
            m.values[static_cast<size_t>(i) * n + j] = t;
            m.values[static_cast<size_t>(j) * n + i] = t;
        }
    }
    return m;
}

SimilarityMatrix fidelity_matrix(const std::vector<MolGraph>& mols,
                                 const std::vector<std::string>& labels,
                                 const EncodingParams& params, bool contract,
                                 int qubit_cap) {
    check_labels(mols.size(), labels);
    SimilarityMatrix m = make_empty(SimilarityKind::Fidelity, labels);
    m.gate_1q = params.gate_1q;
    m.gate_2q = params.gate_2q;
    m.contracted = contract;
    const int n = m.n();
    if (contract) m.qubits.assign(static_cast<size_t>(n) * n, 0);

    for (int i = 0; i < n; ++i) {
        m.values[static_cast<size_t>(i) * n + i] = 1.0;
        if (contract)
            m.qubits[static_cast<size_t>(i) * n + i] =
                find_common_fragments(mols[i], mols[i], params).final_width;
        for (int j = i + 1; j < n; ++j) {
            double f = 0.0;
            int width = 0;
            try {
                if (contract) {
                    ContractedFidelity cf =
                        contracted_fidelity(mols[i], mols[j], params, qubit_cap);
                    f = cf.fidelity;
                    width = cf.qubits_used;
                } else {
                    width = std::max(mols[i].n_atoms(), mols[j].n_atoms());
                    Circuit a = build_qmse_circuit(build_matrix(mols[i], params), params, width);
                    Circuit b = build_qmse_circuit(build_matrix(mols[j], params), params, width);
                    f = fidelity(a, b, qubit_cap);
                }
            } catch (const Error& e) {
                if (e.kind() == "qubit-limit")
                    fail("qubit-limit", "pair (" + labels[i] + ", " + labels[j] +
                                            "): " + e.what());
                throw;
            }
            m.values[static_cast<size_t>(i) * n + j] = f;
            m.values[static_cast<size_t>(j) * n + i] = f;
            if (contract) {
                m.qubits[static_cast<size_t>(i) * n + j] = width;
                m.qubits[static_cast<size_t>(j) * n + i] = width;
            }
        }
    }
    return m;
}

std::map<GateKind, SimilarityMatrix> gate_sweep(const std::vector<MolGraph>& mols,
                                                const std::vector<std::string>& labels,
                                                const EncodingParams& base, bool contract,
                                                int qubit_cap) {
    std::map<GateKind, SimilarityMatrix> out;
    for (GateKind fam : {GateKind::Rxx, GateKind::Ryy, GateKind::Rzz}) {
        EncodingParams p = base;
        p.gate_1q = GateKind::Ry;
        p.gate_2q = fam;
        p.layers_x = 1;
        out.emplace(fam, fidelity_matrix(mols, labels, p, contract, qubit_cap));
    }
    return out;
}

double offdiag_mean(const SimilarityMatrix& m) {
    const int n = m.n();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) sum += m.at(i, j);
    return sum / (0.5 * n * (n - 1));
}

double offdiag_variance(const SimilarityMatrix& m) {
    const int n = m.n();
    const int pairs = n * (n - 1) / 2;
    if (pairs < 2) return 0.0;
    const double mean = offdiag_mean(m);
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = m.at(i, j) - mean;
            acc += d * d;
        }
    return acc / (pairs - 1);
}

std::string to_csv(const SimilarityMatrix& m) {
    std::ostringstream os;
    const int n = m.n();
    os << "name";
    for (const auto& l : m.labels) os << "," << l;
    os << "\n";
    for (int i = 0; i < n; ++i) {
        os << m.labels[i];
        for (int j = 0; j < n; ++j) os << "," << fmt12(m.at(i, j));
        os << "\n";
    }
    if (!m.qubits.empty()) {
        os << "\n# qubits used per pair\n";
        for (int i = 0; i < n; ++i) {
            os << m.labels[i];
            for (int j = 0; j < n; ++j)
                os << "," << m.qubits[static_cast<size_t>(i) * n + j];
            os << "\n";
        }
    }
    return os.str();
}

std::string to_json(const SimilarityMatrix& m) {
    nlohmann::ordered_json j;
    j["kind"] = kind_name(m.kind);
    if (m.kind == SimilarityKind::Fidelity) {
        j["gate_1q"] = gate_name(m.gate_1q);
        j["gate_2q"] = gate_name(m.gate_2q);
        j["contracted"] = m.contracted;
    }
    j["labels"] = m.labels;
    const int n = m.n();
    auto rows = nlohmann::ordered_json::array();
    for (int i = 0; i < n; ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int k = 0; k < n; ++k) row.push_back(m.at(i, k));
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    if (!m.qubits.empty()) {
        auto qrows = nlohmann::ordered_json::array();
        for (int i = 0; i < n; ++i) {
            auto row = nlohmann::ordered_json::array();
            for (int k = 0; k < n; ++k)
                row.push_back(m.qubits[static_cast<size_t>(i) * n + k]);
            qrows.push_back(std::move(row));
        }
        j["qubits"] = std::move(qrows);
    }
    return j.dump(2) + "\n";
}

std::string to_gnuplot(const SimilarityMatrix& m) {
    std::ostringstream os;
    os << "#";
    for (const auto& l : m.labels) os << " " << l;
    os << "\n";
    const int n = m.n();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) os << (j ? " " : "") << fmt12(m.at(i, j));
        os << "\n";
    }
    return os.str();
}

} // namespace qmse
