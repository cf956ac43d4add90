#pragma once

#include "qmse/circuit.hpp"
#include "qmse/molgraph.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qmse {

// Knobs of the molecular encoding. `d` is the diagonal exponent,
// `use_stereo` gates the parity/cis-trans sign factors, gate kinds pick
// the rotation families realizing diagonal and bond terms.
struct EncodingParams {
    double d = 3.0;
    bool use_stereo = true;
    int layers_x = 1;
    GateKind gate_1q = GateKind::Ry;
    GateKind gate_2q = GateKind::Rxx;
};

// Symmetric hybrid matrix: diagonal 0.5 * eps_t * Z_i^d, off-diagonal
// eps_d * Z_i * Z_j / order on covalently bonded pairs, zero elsewhere.
struct CouplingMatrix {
    int n = 0;
    std::vector<double> values; // row-major n*n

    double at(int i, int j) const { return values[static_cast<size_t>(i) * n + j]; }
    double& at(int i, int j) { return values[static_cast<size_t>(i) * n + j]; }
};

CouplingMatrix build_matrix(const MolGraph& g, const EncodingParams& p);

// Expands the matrix into gates: per repetition, one gate_1q(M_ii) per
// atom qubit in ascending order, then one gate_2q(M_ij) per bond in
// ascending (i, j) order. `width` >= n embeds the molecule into a wider
// register with untouched trailing qubits; -1 means width n.
Circuit build_qmse_circuit(const CouplingMatrix& m, const EncodingParams& p,
                           int width = -1);

// Fixed-width bit vector indexed by hashed path strings.
struct Fingerprint {
    int nbits = 0;
    std::vector<uint64_t> words;

    explicit Fingerprint(int bits = 0);
    bool test(int i) const;
    void set(int i);
    int popcount() const;
};

// Hashes every simple linear path of 0..max_path bonds (a lone atom is
// the zero-bond path) into a bit position. Paths are canonicalized by
// taking the lexicographically smaller direction; stereo is ignored.
// nbits must be a power of two.
Fingerprint topological_fingerprint(const MolGraph& g, int nbits = 2048,
                                    int max_path = 7);

double tanimoto(const Fingerprint& a, const Fingerprint& b);

// Principal axes fitted on training fingerprints. feature_range holds
// the min/max of each projected training coordinate and is reused to
// scale unseen data, so test points can fall outside it.
struct PCAModel {
    int n_features = 0;
    int k = 0;
    std::vector<double> mean;
    std::vector<std::vector<double>> components; // k rows, orthonormal
    std::vector<double> explained_variance;      // non-increasing
    std::vector<std::pair<double, double>> feature_range; // per coordinate
};

PCAModel pca_fit(const std::vector<Fingerprint>& rows, int k);
std::vector<double> pca_project(const PCAModel& m, const Fingerprint& fp);

// Baseline data-loading circuit: each coordinate min-max scaled from the
// model's frozen training range to [-2pi, 2pi] (clamped outside), loaded
// as an Ry angle, then a CNOT chain i -> i+1; repeated layers_x times.
Circuit build_fingerprint_circuit(const std::vector<double>& coords,
                                  const PCAModel& m, int n_qubits, int layers_x);

} // namespace qmse
