#include "qmse/cli.hpp"
#include "qmse/contraction.hpp"
#include "qmse/dataset.hpp"
#include "qmse/encoding.hpp"
#include "qmse/error.hpp"
#include "qmse/molgraph.hpp"
#include "qmse/similarity.hpp"
#include "qmse/statevector.hpp"
#include "qmse/vqml.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qmse {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) fail("file-write", "cannot open " + out_path + " for writing");
    f << text;
    f.flush();
    if (!f) fail("file-write", "short write to " + out_path);
    std::cerr << "wrote " << out_path << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("file-missing", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* parity_name(TetraParity p) {
    switch (p) {
    case TetraParity::None: return "none";
    case TetraParity::Plus: return "@@";
    case TetraParity::Minus: return "@";
    }
    return "?";
}

const char* ez_name(EzFlag f) {
    switch (f) {
    case EzFlag::None: return "none";
    case EzFlag::E: return "E";
    case EzFlag::Z: return "Z";
    }
    return "?";
}

// "--gates ry,rxx": a rotation followed by a coupling gate.
void parse_gate_pair(const std::string& text, EncodingParams& p) {
    auto comma = text.find(',');
    if (comma == std::string::npos)
        fail("bad-gates", "--gates wants two names, e.g. ry,rxx");
    GateKind g1 = gate_kind_from_name(text.substr(0, comma));
    GateKind g2 = gate_kind_from_name(text.substr(comma + 1));
    if (g1 != GateKind::Ry && g1 != GateKind::Rx && g1 != GateKind::Rz)
        fail("bad-gates", std::string("encoding rotation must be ry, rx or rz, got ") +
                              gate_name(g1));
    if (g2 != GateKind::Rxx && g2 != GateKind::Ryy && g2 != GateKind::Rzz)
        fail("bad-gates", std::string("encoding coupling must be rxx, ryy or rzz, got ") +
                              gate_name(g2));
    p.gate_1q = g1;
    p.gate_2q = g2;
}

std::string graph_json(const MolGraph& g) {
    ordered_json j;
    j["smiles"] = g.source;
    j["n_atoms"] = g.n_atoms();
    j["n_bonds"] = g.n_bonds();
    auto atoms = ordered_json::array();
    for (int i = 0; i < g.n_atoms(); ++i) {
        atoms.push_back({{"index", i},
                         {"element", element_symbol(g.atoms[i].z)},
                         {"z", g.atoms[i].z},
                         {"parity", parity_name(g.atoms[i].parity)}});
    }
    j["atoms"] = std::move(atoms);
    auto bonds = ordered_json::array();
    for (const auto& b : g.bonds) {
        bonds.push_back(
            {{"a", b.a}, {"b", b.b}, {"order", b.order}, {"ez", ez_name(b.ez)}});
    }
    j["bonds"] = std::move(bonds);
    return j.dump(2) + "\n";
}

std::string encode_report(const MolGraph& g, const EncodingParams& p) {
    CouplingMatrix m = build_matrix(g, p);
    Circuit c = build_qmse_circuit(m, p);
    std::ostringstream os;
    os << "matrix " << m.n << "x" << m.n << "\n";
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) os << (j ? " " : "") << fmt12(m.at(i, j));
        os << "\n";
    }
    os << "circuit " << c.n_qubits << " qubits, " << c.gates.size() << " gates\n";
    for (const auto& gate : c.gates) {
        os << gate_name(gate.kind) << " " << gate.qubits[0];
        if (gate.qubits[1] >= 0) os << " " << gate.qubits[1];
        os << " " << fmt12(gate.angle) << "\n";
    }
    return os.str();
}

std::string plan_report(const MolGraph& a, const MolGraph& b, const ContractionPlan& plan) {
    std::ostringstream os;
    os << "segments " << plan.removed_segments.size() << "\n";
    for (const auto& s : plan.removed_segments)
        os << "  atoms " << s.atom_begin << ".." << s.atom_end << " (" << s.n_atoms()
           << " removed)\n";
    os << "molecule_a " << a.n_atoms() << " -> " << plan.width_p << " qubits\n";
    os << "molecule_b " << b.n_atoms() << " -> " << plan.width_q << " qubits\n";
    os << "final_width " << plan.final_width << "\n";
    return os.str();
}

// Shared schema for `classify` and `regress` run configs. Unknown keys
// are rejected so typos surface instead of silently becoming defaults.
RunConfig load_run_config(const std::string& path, Task task) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        fail("config-schema", std::string("invalid config JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("config-schema", "config must be a JSON object");

    static const char* known[] = {"task",         "encoding", "gate_1q",    "gate_2q",
                                  "entanglement", "layers",   "observable", "max_iters",
                                  "n_restarts",   "k_folds",  "seed",       "encoding_params"};
    for (const auto& [key, val] : doc.items()) {
        (void)val;
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            fail("config-schema", "unknown config key \"" + key + "\"");
    }

    auto want = [](const char* key, const char* type, bool ok) {
        if (!ok)
            fail("config-schema", std::string("config key \"") + key + "\" must be " + type);
    };
    auto get_str = [&](const json& j, const char* key, std::string dflt) {
        if (!j.contains(key)) return dflt;
        want(key, "a string", j[key].is_string());
        return j[key].get<std::string>();
    };
    auto get_pos_int = [&](const json& j, const char* key, int dflt) {
        if (!j.contains(key)) return dflt;
        want(key, "a positive integer",
             j[key].is_number_integer() && j[key].get<int64_t>() >= 1);
        return j[key].get<int>();
    };

    RunConfig cfg;
    cfg.task = task;
    if (doc.contains("task")) {
        want("task", "a string", doc["task"].is_string());
        if (task_from_name(doc["task"].get<std::string>()) != task)
            fail("config-schema", "config task \"" + doc["task"].get<std::string>() +
                                      "\" does not match the subcommand");
    }
    cfg.encoding = encoding_kind_from_name(get_str(doc, "encoding", "qmse"));
    GateKind g1 = gate_kind_from_name(get_str(doc, "gate_1q", "ry"));
    if (g1 != GateKind::Ry)
        fail("config-schema",
             std::string("ansatz rotation gate_1q must be ry, got ") + gate_name(g1));
    GateKind g2 = gate_kind_from_name(get_str(doc, "gate_2q", "cz"));
    if (g2 != GateKind::CZ && g2 != GateKind::CRX)
        fail("config-schema",
             std::string("ansatz entangler gate_2q must be cz or crx, got ") + gate_name(g2));
    cfg.ansatz.gate_2q = g2;
    cfg.ansatz.entanglement = entanglement_from_name(get_str(doc, "entanglement", "linear"));
    cfg.ansatz.layers = get_pos_int(doc, "layers", 1);
    cfg.observable = get_str(doc, "observable", "global-z");
    cfg.max_iters = get_pos_int(doc, "max_iters", 1000);
    cfg.n_restarts = get_pos_int(doc, "n_restarts", 100);
    cfg.k_folds = get_pos_int(doc, "k_folds", 5);
    if (doc.contains("seed")) {
        want("seed", "a nonnegative integer",
             doc["seed"].is_number_unsigned() ||
                 (doc["seed"].is_number_integer() && doc["seed"].get<int64_t>() >= 0));
        cfg.seed = doc["seed"].get<uint64_t>();
    }
    if (doc.contains("encoding_params")) {
        const json& ep = doc["encoding_params"];
        want("encoding_params", "an object", ep.is_object());
        for (const auto& [key, val] : ep.items()) {
            (void)val;
            if (key != "d" && key != "use_stereo" && key != "layers_x")
                fail("config-schema", "unknown encoding_params key \"" + key + "\"");
        }
        if (ep.contains("d")) {
            want("d", "a number", ep["d"].is_number());
            cfg.encoding_params.d = ep["d"].get<double>();
        }
        if (ep.contains("use_stereo")) {
            want("use_stereo", "a boolean", ep["use_stereo"].is_boolean());
            cfg.encoding_params.use_stereo = ep["use_stereo"].get<bool>();
        }
        cfg.encoding_params.layers_x = get_pos_int(ep, "layers_x", 1);
    }
    return cfg;
}

} // namespace

int cli_run(const std::vector<std::string>& args) {
    CLI::App app{"molecular quantum-encoding toolkit"};
    app.require_subcommand(1);
    bool error_json = false;
    app.add_flag("--error-json", error_json,
                 "on failure, print {\"error\", \"message\"} JSON to stdout");

    std::string smiles, smiles_a, smiles_b, dataset_path;
    double d = 3.0;
    std::string gates = "ry,rxx";
    int layers_x = 1;
    bool contract_flag = false;

    CLI::App* cmd_parse = app.add_subcommand("parse", "dump a molecular graph as JSON");
    cmd_parse->add_option("smiles", smiles, "SMILES string")->required();

    CLI::App* cmd_encode =
        app.add_subcommand("encode", "print the coupling matrix and gate list");
    cmd_encode->add_option("smiles", smiles, "SMILES string")->required();
    cmd_encode->add_option("--d", d, "diagonal exponent");
    cmd_encode->add_option("--gates", gates, "rotation,coupling gate pair");
    cmd_encode->add_option("--layers", layers_x, "encoding repetitions");

    CLI::App* cmd_fid = app.add_subcommand("fidelity", "state fidelity of two molecules");
    cmd_fid->add_option("a", smiles_a, "first SMILES")->required();
    cmd_fid->add_option("b", smiles_b, "second SMILES")->required();
    cmd_fid->add_flag("--contract", contract_flag, "drop shared chain fragments first");
    cmd_fid->add_option("--d", d, "diagonal exponent");
    cmd_fid->add_option("--gates", gates, "rotation,coupling gate pair");
    cmd_fid->add_option("--layers", layers_x, "encoding repetitions");

    CLI::App* cmd_contract = app.add_subcommand("contract", "report the contraction plan");
    cmd_contract->add_option("a", smiles_a, "first SMILES")->required();
    cmd_contract->add_option("b", smiles_b, "second SMILES")->required();

    std::string kind, format = "csv", out_path, traces_path, config_path;
    CLI::App* cmd_matrix = app.add_subcommand("matrix", "pairwise similarity over a dataset");
    cmd_matrix->add_option("dataset", dataset_path, "dataset file (.csv or .json)")
        ->required();
    cmd_matrix->add_option("--kind", kind, "fidelity or tanimoto")->required();
    cmd_matrix->add_option("--gates", gates, "rotation,coupling gate pair");
    cmd_matrix->add_flag("--contract", contract_flag, "contract each pair before simulating");
    cmd_matrix->add_option("--format", format, "csv, json or gnuplot");
    cmd_matrix->add_option("--out", out_path, "write the matrix here instead of stdout");

    uint64_t seed_override = 0;
    CLI::Option* seed_opt[2] = {nullptr, nullptr};
    CLI::App* cmd_train[2] = {nullptr, nullptr};
    const char* train_names[2] = {"classify", "regress"};
    for (int t = 0; t < 2; ++t) {
        CLI::App* sub = app.add_subcommand(
            train_names[t], std::string("train a variational model (") + train_names[t] + ")");
        sub->add_option("dataset", dataset_path, "dataset file (.csv or .json)")->required();
        sub->add_option("--config", config_path, "run-config JSON file")->required();
        seed_opt[t] = sub->add_option("--seed", seed_override, "override the config seed");
        sub->add_option("--out", out_path, "write the result JSON here instead of stdout");
        sub->add_option("--traces", traces_path, "also write the loss-trace CSV here");
        cmd_train[t] = sub;
    }

    bool ejson_requested =
        std::find(args.begin(), args.end(), "--error-json") != args.end();
    try {
        // CLI11's vector overload consumes the arguments back to front
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);

        const EncodingParams defaults;
        if (cmd_parse->parsed()) {
            emit(graph_json(parse_smiles(smiles)), "");
        } else if (cmd_encode->parsed()) {
            EncodingParams p = defaults;
            p.d = d;
            p.layers_x = layers_x;
            parse_gate_pair(gates, p);
            emit(encode_report(parse_smiles(smiles), p), "");
        } else if (cmd_fid->parsed()) {
            EncodingParams p = defaults;
            p.d = d;
            p.layers_x = layers_x;
            parse_gate_pair(gates, p);
            MolGraph a = parse_smiles(smiles_a);
            MolGraph b = parse_smiles(smiles_b);
            double f = 0.0;
            int qubits = 0;
            if (contract_flag) {
                ContractedFidelity cf = contracted_fidelity(a, b, p);
                f = cf.fidelity;
                qubits = cf.qubits_used;
            } else {
                qubits = std::max(a.n_atoms(), b.n_atoms());
                Circuit ca = build_qmse_circuit(build_matrix(a, p), p, qubits);
                Circuit cb = build_qmse_circuit(build_matrix(b, p), p, qubits);
                f = fidelity(ca, cb);
            }
            std::ostringstream os;
            os << "fidelity " << fmt12(f) << "\nqubits " << qubits << "\n";
            emit(os.str(), "");
        } else if (cmd_contract->parsed()) {
            MolGraph a = parse_smiles(smiles_a);
            MolGraph b = parse_smiles(smiles_b);
            emit(plan_report(a, b, find_common_fragments(a, b, defaults)), "");
        } else if (cmd_matrix->parsed()) {
            std::vector<MolGraph> mols;
            std::vector<std::string> names;
            for (const auto& rec : ingest(dataset_path)) {
                mols.push_back(parse_smiles(rec.smiles));
                names.push_back(rec.name);
            }
            SimilarityMatrix m;
            if (kind == "tanimoto") {
                m = tanimoto_matrix(mols, names);
            } else if (kind == "fidelity") {
                EncodingParams p = defaults;
                parse_gate_pair(gates, p);
                m = fidelity_matrix(mols, names, p, contract_flag);
            } else {
                fail("bad-kind", "--kind must be fidelity or tanimoto, got \"" + kind + "\"");
            }
            if (format == "csv") emit(to_csv(m), out_path);
            else if (format == "json") emit(to_json(m), out_path);
            else if (format == "gnuplot") emit(to_gnuplot(m), out_path);
            else
                fail("bad-format",
                     "--format must be csv, json or gnuplot, got \"" + format + "\"");
        } else {
            for (int t = 0; t < 2; ++t) {
                if (!cmd_train[t]->parsed()) continue;
                Task task = task_from_name(train_names[t]);
                RunConfig cfg = load_run_config(config_path, task);
                if (seed_opt[t]->count()) cfg.seed = seed_override;
                std::vector<MolGraph> mols;
                std::vector<double> y;
                for (const auto& rec : ingest(dataset_path)) {
                    if (task == Task::Classify && !rec.label)
                        fail("missing-label", "record \"" + rec.name + "\" has no label");
                    if (task == Task::Regress && !rec.target)
                        fail("missing-target", "record \"" + rec.name + "\" has no target");
                    mols.push_back(parse_smiles(rec.smiles));
                    y.push_back(task == Task::Classify ? static_cast<double>(*rec.label)
                                                       : *rec.target);
                }
                RunResult res = run_experiment(mols, y, cfg);
                emit(to_json(res, cfg), out_path);
                if (!traces_path.empty()) emit(traces_csv(res), traces_path);
            }
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0 && ejson_requested) {
            ordered_json j{{"error", "cli-parse"}, {"message", e.what()}};
            std::cout << j.dump(2) << "\n";
        }
        return app.exit(e);
    } catch (const Error& e) {
        if (error_json || ejson_requested) {
            ordered_json j{{"error", e.kind()}, {"message", e.what()}};
            std::cout << j.dump(2) << "\n";
        }
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return 1;
    }
}

} // namespace qmse
