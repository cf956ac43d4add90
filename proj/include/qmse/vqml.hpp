#pragma once

#include "qmse/circuit.hpp"
#include "qmse/encoding.hpp"
#include "qmse/molgraph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qmse {

enum class Entanglement { Linear, Pairwise, Full };

const char* entanglement_name(Entanglement e);
Entanglement entanglement_from_name(const std::string& name); // case-insensitive

// Trainable block shape: Ry rotations on every qubit followed by an
// entangling set, repeated `layers` times. CZ entanglers carry no
// parameter; CRX entanglers are trainable.
struct AnsatzConfig {
    GateKind gate_2q = GateKind::CZ; // CZ or CRX
    Entanglement entanglement = Entanglement::Linear;
    int layers = 1;
};

// Circuit skeleton whose rotation angles are filled by bind(). Binding
// order is layer-major: within a layer, the Ry angles by ascending qubit,
// then the entangler angles in emission order.
struct ParamCircuit {
    Circuit skeleton;
    std::vector<int> slots; // gate indices that consume one parameter each
    int n_qubits = 0;

    int n_params() const { return static_cast<int>(slots.size()); }
    Circuit bind(const std::vector<double>& theta) const;
};

ParamCircuit build_ansatz(int n_qubits, const AnsatzConfig& cfg);

enum class Task { Classify, Regress };
enum class EncodingKind { QMSE, FingerprintPCA };

const char* task_name(Task t);
Task task_from_name(const std::string& name);
const char* encoding_kind_name(EncodingKind e);
EncodingKind encoding_kind_from_name(const std::string& name);

// One experiment description: which model to train on which encoding,
// and the evaluation protocol knobs.
struct RunConfig {
    Task task = Task::Classify;
    EncodingKind encoding = EncodingKind::QMSE;
    AnsatzConfig ansatz;
    std::string observable = "global-z"; // or an explicit I/Z string
    int max_iters = 1000;
    int n_restarts = 100;
    int k_folds = 5;
    uint64_t seed = 0;
    EncodingParams encoding_params;
};

// Fold index per sample, values in [0, k). Classification stratifies by
// class; regression by k-quantile bins of the target. Every stratum must
// hold at least k samples; fold sizes are balanced within one.
std::vector<int> stratified_kfold(const std::vector<double>& y, Task task, int k,
                                  uint64_t seed);

struct RunUnit {
    int fold = 0;
    int restart = 0;
    std::vector<double> trace; // best-so-far loss per improvement
    double final_loss = 0.0;
    double train_score = 0.0;
    double test_score = 0.0;
    int n_evals = 0;
    std::vector<double> params; // optimized parameters
};

struct RunResult {
    Task task = Task::Classify;
    EncodingKind encoding = EncodingKind::QMSE;
    int n_qubits = 0;
    int n_params = 0;
    std::string observable;
    std::vector<RunUnit> units; // fold-major, restart-minor

    double median_train = 0.0, median_test = 0.0;
    double train_p16 = 0.0, train_p84 = 0.0;
    double test_p16 = 0.0, test_p84 = 0.0;
    double median_final_loss = 0.0;
    int median_fold = 0, median_restart = 0; // unit supplying median_params
    std::vector<double> median_params;
};

// Interpolating percentile (the numpy "linear" rule); p in [0, 100].
double percentile(std::vector<double> values, double p);

// Full protocol: encode every molecule, stratify folds, run n_restarts
// seeded optimizations per fold, score train/test per run and aggregate
// medians with 16th/84th percentile bands. `y` holds 0/1 labels for
// classification or real targets for regression.
RunResult run_experiment(const std::vector<MolGraph>& mols, const std::vector<double>& y,
                         const RunConfig& cfg);

// Task-checked fronts for run_experiment.
RunResult train_vqc(const std::vector<MolGraph>& mols, const std::vector<double>& labels,
                    const RunConfig& cfg);
RunResult train_vqr(const std::vector<MolGraph>& mols, const std::vector<double>& targets,
                    const RunConfig& cfg);

// Deterministic serializations: a JSON document with scores, bands and
// per-run records (full double precision), and a flat CSV of the loss
// traces (12 significant digits).
std::string to_json(const RunResult& r, const RunConfig& cfg);
std::string traces_csv(const RunResult& r);

} // namespace qmse
