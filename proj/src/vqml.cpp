#include "qmse/vqml.hpp"
#include "qmse/error.hpp"
#include "qmse/optimize.hpp"
#include "qmse/similarity.hpp"
#include "qmse/statevector.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace qmse {

const char* entanglement_name(Entanglement e) {
    switch (e) {
    case Entanglement::Linear: return "linear";
    case Entanglement::Pairwise: return "pairwise";
    case Entanglement::Full: return "full";
    }
    return "?";
}

Entanglement entanglement_from_name(const std::string& name) {
    std::string s;
    for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "linear") return Entanglement::Linear;
    if (s == "pairwise") return Entanglement::Pairwise;
    if (s == "full") return Entanglement::Full;
    fail("unknown-entanglement", "unknown entanglement '" + name + "'");
}

const char* task_name(Task t) { return t == Task::Classify ? "classify" : "regress"; }

Task task_from_name(const std::string& name) {
    if (name == "classify") return Task::Classify;
    if (name == "regress") return Task::Regress;
    fail("unknown-task", "unknown task '" + name + "'");
}

const char* encoding_kind_name(EncodingKind e) {
    return e == EncodingKind::QMSE ? "qmse" : "fingerprint";
}

EncodingKind encoding_kind_from_name(const std::string& name) {
    if (name == "qmse") return EncodingKind::QMSE;
    if (name == "fingerprint") return EncodingKind::FingerprintPCA;
    fail("unknown-encoding", "unknown encoding '" + name + "'");
}

namespace {

std::vector<std::pair<int, int>> entangler_pairs(int n, Entanglement e) {
    std::vector<std::pair<int, int>> out;
    switch (e) {
    case Entanglement::Linear:
        for (int i = 0; i + 1 < n; ++i) out.emplace_back(i, i + 1);
        break;
    case Entanglement::Pairwise:
        for (int i = 0; i + 1 < n; i += 2) out.emplace_back(i, i + 1);
        for (int i = 1; i + 1 < n; i += 2) out.emplace_back(i, i + 1);
        break;
    case Entanglement::Full:
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
        break;
    }
    return out;
}

// 53-bit mantissa draw in [0, 1); avoids std::uniform_real_distribution,
// whose output is implementation-defined.
double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void shuffle_indices(std::vector<int>& idx, std::mt19937_64& rng) {
    for (size_t i = idx.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
}

} // namespace

Circuit ParamCircuit::bind(const std::vector<double>& theta) const {
    if (theta.size() != slots.size())
        fail("bad-parameter-count", "expected " + std::to_string(slots.size()) +
                                        " parameters, got " + std::to_string(theta.size()));
    Circuit c = skeleton;
    for (size_t i = 0; i < slots.size(); ++i) c.gates[slots[i]].angle = theta[i];
    return c;
}

ParamCircuit build_ansatz(int n_qubits, const AnsatzConfig& cfg) {
    if (n_qubits < 1) fail("bad-width", "ansatz needs at least one qubit");
    if (cfg.layers < 1) fail("bad-layers", "ansatz needs at least one layer");
    if (cfg.gate_2q != GateKind::CZ && cfg.gate_2q != GateKind::CRX)
        fail("bad-ansatz-gate",
             std::string("entangler must be cz or crx, got ") + gate_name(cfg.gate_2q));

    ParamCircuit pc;
    pc.n_qubits = n_qubits;
    pc.skeleton.n_qubits = n_qubits;
    const auto pairs = entangler_pairs(n_qubits, cfg.entanglement);
    for (int layer = 0; layer < cfg.layers; ++layer) {
        for (int q = 0; q < n_qubits; ++q) {
            pc.slots.push_back(static_cast<int>(pc.skeleton.gates.size()));
            pc.skeleton.push(Gate::one_q(GateKind::Ry, q));
        }
        for (const auto& [a, b] : pairs) {
            if (cfg.gate_2q == GateKind::CRX)
                pc.slots.push_back(static_cast<int>(pc.skeleton.gates.size()));
            pc.skeleton.push(Gate::two_q(cfg.gate_2q, a, b));
        }
    }
    return pc;
}

std::vector<int> stratified_kfold(const std::vector<double>& y, Task task, int k,
                                  uint64_t seed) {
    const int n = static_cast<int>(y.size());
    if (k < 2) fail("bad-folds", "k must be at least 2");
    if (n < k) fail("bad-folds", "fewer samples than folds");

    // strata as ordered lists of sample indices
    std::vector<std::vector<int>> strata;
    if (task == Task::Classify) {
        std::map<double, std::vector<int>> by_class;
        for (int i = 0; i < n; ++i) by_class[y[i]].push_back(i);
        for (auto& [cls, idx] : by_class) strata.push_back(std::move(idx));
    } else {
        // k-quantile bins: the r-th smallest target lands in bin r*k/n
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return y[a] < y[b]; });
        strata.assign(k, {});
        for (int r = 0; r < n; ++r)
            strata[static_cast<size_t>(r) * k / n].push_back(order[r]);
    }

    for (const auto& s : strata)
        if (static_cast<int>(s.size()) < k)
            fail("stratum-too-small", "a stratum holds " + std::to_string(s.size()) +
                                          " samples, fewer than k = " + std::to_string(k));

    std::mt19937_64 rng(seed);
    std::vector<int> fold_of(n, -1);
    int cursor = 0; // continues across strata so overall fold sizes balance
    for (auto& stratum : strata) {
        shuffle_indices(stratum, rng);
        for (int i : stratum) {
            fold_of[i] = cursor % k;
            ++cursor;
        }
    }
    return fold_of;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) fail("empty-sample", "percentile of an empty sample");
    std::sort(values.begin(), values.end());
    if (values.size() == 1) return values[0];
    double rank = p / 100.0 * (static_cast<double>(values.size()) - 1.0);
    size_t lo = static_cast<size_t>(rank);
    if (lo + 1 >= values.size()) return values.back();
    double frac = rank - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

namespace {

struct FoldData {
    std::vector<int> train, test;
    const std::vector<StateVector>* states = nullptr;
    std::vector<StateVector> own_states; // fingerprint encoding, per-fold PCA
    std::vector<double> train_targets;   // +-1 or normalized
    double t_min = 0.0, t_max = 0.0;     // regression de-normalization
};

double model_output(const StateVector& enc, const Circuit& bound, const PauliString& obs) {
    StateVector s = enc;
    for (const auto& g : bound.gates) s.apply(g);
    return expectation(s, obs);
}

} // namespace

RunResult run_experiment(const std::vector<MolGraph>& mols, const std::vector<double>& y,
                         const RunConfig& cfg) {
    const int n = static_cast<int>(mols.size());
    if (n < 2) fail("bad-dataset", "need at least two samples");
    if (y.size() != mols.size()) fail("bad-dataset", "one value per molecule required");
    if (cfg.n_restarts < 1) fail("bad-restarts", "n_restarts must be positive");
    if (cfg.max_iters < 1) fail("bad-budget", "max_iters must be positive");
    if (cfg.task == Task::Classify)
        for (double v : y)
            if (v != 0.0 && v != 1.0)
                fail("bad-label", "classification labels must be 0 or 1");

    int mol_width = 0;
    for (const auto& g : mols) mol_width = std::max(mol_width, g.n_atoms());

    // The observable fixes the register: "global-z" sizes it to the largest
    // molecule; an explicit I/Z string pins the width outright. A molecule
    // register can only grow past the molecules (idle qubits stay |0>); the
    // fingerprint register is free since PCA compresses to any width.
    int width = mol_width;
    PauliString obs;
    if (cfg.observable == "global-z") {
        obs = PauliString::all_z(width);
    } else {
        obs = PauliString::parse(cfg.observable);
        width = obs.width;
        if (cfg.encoding == EncodingKind::QMSE && width < mol_width)
            fail("width-mismatch", "observable covers " + std::to_string(width) +
                                       " qubits but the largest molecule needs " +
                                       std::to_string(mol_width));
    }

    ParamCircuit ansatz = build_ansatz(width, cfg.ansatz);

    RunResult res;
    res.task = cfg.task;
    res.encoding = cfg.encoding;
    res.n_qubits = width;
    res.n_params = ansatz.n_params();
    res.observable = obs.str();

    // QMSE encodings are molecule-local, so they are shared by all folds;
    // the fingerprint branch refits PCA per fold on its training split.
    std::vector<StateVector> qmse_states;
    std::vector<Fingerprint> fps;
    if (cfg.encoding == EncodingKind::QMSE) {
        qmse_states.reserve(mols.size());
        for (const auto& g : mols)
            qmse_states.push_back(run(build_qmse_circuit(
                build_matrix(g, cfg.encoding_params), cfg.encoding_params, width)));
    } else {
        fps.reserve(mols.size());
        for (const auto& g : mols) fps.push_back(topological_fingerprint(g));
    }

    const std::vector<int> fold_of = stratified_kfold(y, cfg.task, cfg.k_folds, cfg.seed);

    for (int f = 0; f < cfg.k_folds; ++f) {
        FoldData fd;
        for (int i = 0; i < n; ++i) (fold_of[i] == f ? fd.test : fd.train).push_back(i);

        if (cfg.task == Task::Classify) {
            bool has0 = false, has1 = false;
            for (int i : fd.train) (y[i] == 1.0 ? has1 : has0) = true;
            if (!has0 || !has1)
                fail("single-class-fold",
                     "training split of fold " + std::to_string(f) + " has one class");
            for (int i : fd.train) fd.train_targets.push_back(2.0 * y[i] - 1.0);
        } else {
            fd.t_min = fd.t_max = y[fd.train[0]];
            for (int i : fd.train) {
                fd.t_min = std::min(fd.t_min, y[i]);
                fd.t_max = std::max(fd.t_max, y[i]);
            }
            if (fd.t_min == fd.t_max)
                fail("constant-target",
                     "training split of fold " + std::to_string(f) + " has one target value");
            for (int i : fd.train)
                fd.train_targets.push_back((y[i] - fd.t_min) / (fd.t_max - fd.t_min) - 0.5);
        }

        if (cfg.encoding == EncodingKind::QMSE) {
            fd.states = &qmse_states;
        } else {
            std::vector<Fingerprint> train_fps;
            for (int i : fd.train) train_fps.push_back(fps[i]);
            PCAModel pca = pca_fit(train_fps, width);
            fd.own_states.reserve(mols.size());
            for (int i = 0; i < n; ++i)
                fd.own_states.push_back(
                    run(build_fingerprint_circuit(pca_project(pca, fps[i]), pca, width,
                                                  cfg.encoding_params.layers_x)));
            fd.states = &fd.own_states;
        }

        auto outputs = [&](const std::vector<double>& theta, const std::vector<int>& idx) {
            Circuit bound = ansatz.bind(theta);
            std::vector<double> out;
            out.reserve(idx.size());
            for (int i : idx) out.push_back(model_output((*fd.states)[i], bound, obs));
            return out;
        };

        Objective loss = [&](const std::vector<double>& theta) {
            std::vector<double> out = outputs(theta, fd.train);
            double acc = 0.0;
            for (size_t i = 0; i < out.size(); ++i) {
                double e = out[i] - fd.train_targets[i];
                acc += e * e;
            }
            return acc / static_cast<double>(out.size());
        };

        auto score = [&](const std::vector<double>& theta, const std::vector<int>& idx) {
            std::vector<double> out = outputs(theta, idx);
            if (cfg.task == Task::Classify) {
                int hits = 0;
                for (size_t i = 0; i < idx.size(); ++i) {
                    double pred = out[i] > 0.0 ? 1.0 : 0.0;
                    if (pred == y[idx[i]]) ++hits;
                }
                return static_cast<double>(hits) / static_cast<double>(idx.size());
            }
            double mean = 0.0;
            for (int i : idx) mean += y[i];
            mean /= static_cast<double>(idx.size());
            double ss_res = 0.0, ss_tot = 0.0;
            for (size_t i = 0; i < idx.size(); ++i) {
                double pred = (out[i] + 0.5) * (fd.t_max - fd.t_min) + fd.t_min;
                ss_res += (pred - y[idx[i]]) * (pred - y[idx[i]]);
                ss_tot += (y[idx[i]] - mean) * (y[idx[i]] - mean);
            }
            if (ss_tot == 0.0)
                fail("constant-target", "scored split has a single target value");
            return 1.0 - ss_res / ss_tot;
        };

        for (int r = 0; r < cfg.n_restarts; ++r) {
            std::mt19937_64 rng(cfg.seed ^ static_cast<uint64_t>(f) ^
                                static_cast<uint64_t>(r));
            std::vector<double> theta0(ansatz.n_params());
            for (double& t : theta0)
                t = -2.0 * M_PI + unit_double(rng) * 4.0 * M_PI;

            MinimizeResult mr = minimize(loss, std::move(theta0), cfg.max_iters);

            RunUnit u;
            u.fold = f;
            u.restart = r;
            u.trace = std::move(mr.trace);
            u.final_loss = u.trace.back();
            u.n_evals = mr.n_evals;
            u.train_score = score(mr.x, fd.train);
            u.test_score = score(mr.x, fd.test);
            u.params = std::move(mr.x);
            res.units.push_back(std::move(u));
        }
    }

    std::vector<double> train_scores, test_scores, final_losses;
    for (const auto& u : res.units) {
        train_scores.push_back(u.train_score);
        test_scores.push_back(u.test_score);
        final_losses.push_back(u.final_loss);
    }
    res.median_train = percentile(train_scores, 50.0);
    res.median_test = percentile(test_scores, 50.0);
    res.train_p16 = percentile(train_scores, 16.0);
    res.train_p84 = percentile(train_scores, 84.0);
    res.test_p16 = percentile(test_scores, 16.0);
    res.test_p84 = percentile(test_scores, 84.0);
    res.median_final_loss = percentile(final_losses, 50.0);

    // the run with the lower-median training score lends its parameters;
    // stable sort keeps fold/restart order on ties
    std::vector<int> order(res.units.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return res.units[a].train_score < res.units[b].train_score;
    });
    const RunUnit& med = res.units[order[(order.size() - 1) / 2]];
    res.median_fold = med.fold;
    res.median_restart = med.restart;
    res.median_params = med.params;
    return res;
}

RunResult train_vqc(const std::vector<MolGraph>& mols, const std::vector<double>& labels,
                    const RunConfig& cfg) {
    if (cfg.task != Task::Classify) fail("bad-task", "train_vqc needs a classify config");
    return run_experiment(mols, labels, cfg);
}

RunResult train_vqr(const std::vector<MolGraph>& mols, const std::vector<double>& targets,
                    const RunConfig& cfg) {
    if (cfg.task != Task::Regress) fail("bad-task", "train_vqr needs a regress config");
    return run_experiment(mols, targets, cfg);
}

std::string to_json(const RunResult& r, const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["task"] = task_name(r.task);
    j["encoding"] = encoding_kind_name(r.encoding);
    j["ansatz"] = {{"gate_2q", gate_name(cfg.ansatz.gate_2q)},
                   {"entanglement", entanglement_name(cfg.ansatz.entanglement)},
                   {"layers", cfg.ansatz.layers}};
    j["observable"] = r.observable;
    j["max_iters"] = cfg.max_iters;
    j["n_restarts"] = cfg.n_restarts;
    j["k_folds"] = cfg.k_folds;
    j["seed"] = cfg.seed;
    j["encoding_params"] = {{"d", cfg.encoding_params.d},
                            {"use_stereo", cfg.encoding_params.use_stereo},
                            {"layers_x", cfg.encoding_params.layers_x},
                            {"gate_1q", gate_name(cfg.encoding_params.gate_1q)},
                            {"gate_2q", gate_name(cfg.encoding_params.gate_2q)}};
    j["n_qubits"] = r.n_qubits;
    j["n_params"] = r.n_params;
    j["median_train_score"] = r.median_train;
    j["median_test_score"] = r.median_test;
    j["train_band"] = {r.train_p16, r.train_p84};
    j["test_band"] = {r.test_p16, r.test_p84};
    j["median_final_loss"] = r.median_final_loss;
    j["median_model"] = {{"fold", r.median_fold},
                         {"restart", r.median_restart},
                         {"params", r.median_params}};
    auto runs = nlohmann::ordered_json::array();
    for (const auto& u : r.units) {
        nlohmann::ordered_json ju;
        ju["fold"] = u.fold;
        ju["restart"] = u.restart;
        ju["n_evals"] = u.n_evals;
        ju["final_loss"] = u.final_loss;
        ju["train_score"] = u.train_score;
        ju["test_score"] = u.test_score;
        ju["trace"] = u.trace;
        runs.push_back(std::move(ju));
    }
    j["runs"] = std::move(runs);
    return j.dump(2) + "\n";
}

std::string traces_csv(const RunResult& r) {
    std::ostringstream os;
    os << "fold,restart,step,loss\n";
    for (const auto& u : r.units)
        for (size_t s = 0; s < u.trace.size(); ++s)
            os << u.fold << "," << u.restart << "," << s << "," << fmt12(u.trace[s])
               << "\n";
    return os.str();
}

} // namespace qmse
