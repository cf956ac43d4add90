#pragma once

#include "qmse/encoding.hpp"
#include "qmse/molgraph.hpp"

#include <map>
#include <string>
#include <vector>

namespace qmse {

enum class SimilarityKind { Tanimoto, Fidelity };

// Symmetric all-pairs similarity with unit diagonal. For the Fidelity
// kind, `qubits` records the register width simulated per pair (filled
// when contraction was requested) and the gate metadata describes the
// encoding; both are meaningless for Tanimoto.
struct SimilarityMatrix {
    SimilarityKind kind = SimilarityKind::Fidelity;
    std::vector<std::string> labels;
    std::vector<double> values; // n*n row-major
    std::vector<int> qubits;    // n*n row-major, empty unless recorded
    GateKind gate_1q = GateKind::Ry;
    GateKind gate_2q = GateKind::Rxx;
    bool contracted = false;

    int n() const { return static_cast<int>(labels.size()); }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * n() + j]; }
};

SimilarityMatrix tanimoto_matrix(const std::vector<MolGraph>& mols,
                                 const std::vector<std::string>& labels,
                                 int nbits = 2048, int max_path = 7);

// All n(n-1)/2 pair fidelities. Each pair is embedded into a register of
// its own max width (optionally after contraction); a pair whose width
// exceeds the cap fails with an error naming the two molecules.
SimilarityMatrix fidelity_matrix(const std::vector<MolGraph>& mols,
                                 const std::vector<std::string>& labels,
                                 const EncodingParams& params, bool contract,
                                 int qubit_cap = -1);

// Fidelity matrices for the two-qubit gate family swept over Rxx, Ryy and
// Rzz with the rotation gate fixed to Ry and a single encoding layer.
std::map<GateKind, SimilarityMatrix> gate_sweep(const std::vector<MolGraph>& mols,
                                                const std::vector<std::string>& labels,
                                                const EncodingParams& base,
                                                bool contract, int qubit_cap = -1);

// Statistics over the distinct off-diagonal pairs (upper triangle).
double offdiag_mean(const SimilarityMatrix& m);
double offdiag_variance(const SimilarityMatrix& m); // sample variance

// Text renderings. Values are printed with 12 significant digits; JSON
// additionally carries the kind/gate metadata and, when recorded, the
// per-pair qubit counts. The gnuplot form is a bare whitespace grid
// suitable for `plot ... matrix with image`.
std::string to_csv(const SimilarityMatrix& m);
std::string to_json(const SimilarityMatrix& m);
std::string to_gnuplot(const SimilarityMatrix& m);

// Shortest-of-12-significant-digits rendering used for all numeric text
// output, so equal inputs serialize to equal bytes.
std::string fmt12(double v);

} // namespace qmse
