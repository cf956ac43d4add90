#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmse/dataset.hpp"
#include "qmse/error.hpp"
#include "qmse/similarity.hpp"
#include "qmse/statevector.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace qmse;

namespace {

template <class F>
std::string thrown_kind(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

std::vector<MolGraph> parse_all(const std::vector<std::string>& smiles) {
    std::vector<MolGraph> out;
    for (const auto& s : smiles) out.push_back(parse_smiles(s));
    return out;
}

const std::vector<std::string> kAlkanes = {
    "C",      "CC",       "CCC",       "CCCC",   "CC(C)C",
    "CCCCC",  "CC(C)CC",  "CC(C)(C)C", "CCCCCC", "CC(C)CCC"};

std::vector<std::string> number_labels(size_t n) {
    std::vector<std::string> out;
    for (size_t i = 0; i < n; ++i) out.push_back("m" + std::to_string(i));
    return out;
}

} // namespace

TEST_CASE("tanimoto matrix has unit diagonal and path-set semantics") {
    auto mols = parse_all({"CCC", "CC(C)C", "CC"});
    SimilarityMatrix m = tanimoto_matrix(mols, {"propane", "isobutane", "ethane"});
    REQUIRE(m.n() == 3);
    for (int i = 0; i < 3; ++i) CHECK(m.at(i, i) == 1.0);
    CHECK(m.at(0, 1) == 1.0); // identical path sets
    CHECK(m.at(0, 2) < 1.0);
    CHECK(m.at(0, 2) > 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m.at(i, j) == m.at(j, i));
    CHECK(m.kind == SimilarityKind::Tanimoto);
    CHECK(m.qubits.empty());
}

TEST_CASE("fidelity matrix diagonal is exactly one") {
    auto mols = parse_all({"CC", "CCO", "C=CC"});
    EncodingParams ep;
    SimilarityMatrix m = fidelity_matrix(mols, number_labels(3), ep, false);
    for (int i = 0; i < 3; ++i) CHECK(m.at(i, i) == 1.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(m.at(i, j) == m.at(j, i));
            CHECK(m.at(i, j) >= 0.0);
            CHECK(m.at(i, j) <= 1.0 + 1e-12);
        }
}

TEST_CASE("duplicated molecules give identical rows") {
    auto mols = parse_all({"CC", "CC", "CCO"});
    EncodingParams ep;
    SimilarityMatrix m = fidelity_matrix(mols, number_labels(3), ep, false);
    CHECK(m.at(0, 1) == doctest::Approx(1.0).epsilon(1e-10));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(m.at(0, j) - m.at(1, j)) < 1e-10);
}

TEST_CASE("a single molecule yields the 1x1 unit matrix") {
    auto mols = parse_all({"CCO"});
    EncodingParams ep;
    SimilarityMatrix m = fidelity_matrix(mols, {"ethanol"}, ep, false);
    REQUIRE(m.n() == 1);
    CHECK(m.values == std::vector<double>{1.0});
    CHECK(offdiag_mean(m) == 0.0);
    CHECK(offdiag_variance(m) == 0.0);
}

TEST_CASE("contraction does not move the matrix") {
    auto mols = parse_all({"CCCC", "CCCO", "CC=CC", "CCCCCC"});
    EncodingParams ep;
    SimilarityMatrix direct = fidelity_matrix(mols, number_labels(4), ep, false);
    SimilarityMatrix reduced = fidelity_matrix(mols, number_labels(4), ep, true);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(direct.at(i, j) - reduced.at(i, j)) < 1e-9);

    CHECK(direct.qubits.empty());
    REQUIRE(!reduced.qubits.empty());
    CHECK(reduced.contracted);
    // hexane against itself keeps only its two endpoints
    CHECK(reduced.qubits[3 * 4 + 3] == 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(reduced.qubits[size_t(i) * 4 + j] <=
                  std::max(mols[i].n_atoms(), mols[j].n_atoms()));
}

TEST_CASE("an oversized pair is reported by name") {
    auto mols = parse_all({"CCCCC", "CC"});
    EncodingParams ep;
    try {
        fidelity_matrix(mols, {"pentane", "ethane"}, ep, false, 4);
        FAIL("expected a qubit-limit error");
    } catch (const Error& e) {
        CHECK(std::string(e.kind()) == "qubit-limit");
        CHECK(std::string(e.what()).find("pentane") != std::string::npos);
        CHECK(std::string(e.what()).find("ethane") != std::string::npos);
    }
}

TEST_CASE("label count must match the molecule count") {
    auto mols = parse_all({"CC", "CCC"});
    EncodingParams ep;
    CHECK(thrown_kind([&] { fidelity_matrix(mols, {"one"}, ep, false); }) ==
          "label-mismatch");
    CHECK(thrown_kind([&] { tanimoto_matrix(mols, {"a", "b", "c"}); }) ==
          "label-mismatch");
}

TEST_CASE("the gate sweep pins the rotation family and layer count") {
    auto mols = parse_all({"CC", "C=C", "CCO"});
    auto labels = number_labels(3);
    EncodingParams base;
    base.gate_1q = GateKind::Rz; // both get overridden
    base.gate_2q = GateKind::Ryy;
    base.layers_x = 3;

    auto sweep = gate_sweep(mols, labels, base, false);
    REQUIRE(sweep.size() == 3);
    for (GateKind fam : {GateKind::Rxx, GateKind::Ryy, GateKind::Rzz}) {
        REQUIRE(sweep.count(fam) == 1);
        CHECK(sweep.at(fam).gate_1q == GateKind::Ry);
        CHECK(sweep.at(fam).gate_2q == fam);
    }

    EncodingParams direct = base;
    direct.gate_1q = GateKind::Ry;
    direct.gate_2q = GateKind::Rxx;
    direct.layers_x = 1;
    SimilarityMatrix ref = fidelity_matrix(mols, labels, direct, false);
    CHECK(sweep.at(GateKind::Rxx).values == ref.values);

    CHECK(sweep.at(GateKind::Rxx).values != sweep.at(GateKind::Rzz).values);

    // forcing a single layer keeps the sweep usable with contraction
    auto contracted = gate_sweep(mols, labels, base, true);
    CHECK(contracted.size() == 3);
}

TEST_CASE("diagonal couplings cannot separate bond-order isomers fully") {
    // The pair state differs only in one coupling angle. Writing the shared
    // rotation as theta and the coupling gap as delta, the overlap works out
    // to cos(delta/2) + i sin(delta/2) cos^2(theta), so the fidelity is
    // cos^2(delta/2) + sin^2(delta/2) cos^4(theta): 1 only at special angles.
    auto mols = parse_all({"CC", "C=C"});
    EncodingParams ep;
    ep.gate_2q = GateKind::Rzz;
    SimilarityMatrix m = fidelity_matrix(mols, number_labels(2), ep, false);
    double half_gap = (36.0 - 18.0) / 2.0;
    double expected = std::pow(std::cos(half_gap), 2) +
                      std::pow(std::sin(half_gap), 2) * std::pow(std::cos(108.0), 4);
    CHECK(m.at(0, 1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(m.at(0, 1) < 1.0);
}

TEST_CASE("full-turn rotations erase the coupling difference") {
    // cos(theta) = +-1 collapses the fidelity formula above to exactly 1:
    // each qubit returns to the pole and diagonal phases become global.
    constexpr double two_pi = 6.283185307179586476925286766559;
    auto make = [&](double coupling) {
        Circuit c;
        c.n_qubits = 2;
        c.push(Gate::one_q(GateKind::Ry, 0, two_pi));
        c.push(Gate::one_q(GateKind::Ry, 1, two_pi));
        c.push(Gate::two_q(GateKind::Rzz, 0, 1, coupling));
        return c;
    };
    CHECK(fidelity(make(36.0), make(18.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(make(0.7), make(-2.9)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coupling families spread alkanes differently") {
    auto mols = parse_all(kAlkanes);
    auto labels = number_labels(mols.size());
    EncodingParams base;
    auto sweep = gate_sweep(mols, labels, base, false);
    double vx = offdiag_variance(sweep.at(GateKind::Rxx));
    double vz = offdiag_variance(sweep.at(GateKind::Rzz));
    CHECK(vx > vz);
}

TEST_CASE("the all-cis polyene sits farthest from the saturated acid") {
    std::vector<MolGraph> mols;
    std::vector<std::string> labels;
    for (const auto& r : fatty_acid_table()) {
        mols.push_back(parse_smiles(r.smiles));
        labels.push_back(r.name);
    }
    EncodingParams ep;
    SimilarityMatrix m = fidelity_matrix(mols, labels, ep, true);
    const int n = m.n();
    REQUIRE(n == 7);
    int argmin = -1;
    double best = 2.0;
    for (int j = 0; j < n; ++j) {
        if (j == 4) continue; // row of the mostly saturated acid
        if (m.at(4, j) < best) {
            best = m.at(4, j);
            argmin = j;
        }
    }
    CHECK(argmin == 6);
}

TEST_CASE("off-diagonal statistics use the upper triangle") {
    SimilarityMatrix m;
    m.labels = {"a", "b", "c"};
    m.values = {1.0, 0.2, 0.4, 0.2, 1.0, 0.9, 0.4, 0.9, 1.0};
    CHECK(offdiag_mean(m) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(offdiag_variance(m) == doctest::Approx(0.13).epsilon(1e-12));
}

TEST_CASE("csv and gnuplot renderings are exact and stable") {
    auto mols = parse_all({"CC", "C=C"});
    SimilarityMatrix m = tanimoto_matrix(mols, {"e", "v"});
    CHECK(m.at(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    std::string csv = to_csv(m);
    CHECK(csv ==
          "name,e,v\n"
          "e,1,0.333333333333\n"
          "v,0.333333333333,1\n");
    CHECK(to_csv(m) == csv);

    CHECK(to_gnuplot(m) ==
          "# e v\n"
          "1 0.333333333333\n"
          "0.333333333333 1\n");
}

TEST_CASE("json rendering carries metadata and qubit grids") {
    auto mols = parse_all({"CC", "CCCC"});
    EncodingParams ep;
    SimilarityMatrix m = fidelity_matrix(mols, {"a", "b"}, ep, true);
    std::string j = to_json(m);
    CHECK(j.find("\"kind\": \"fidelity\"") != std::string::npos);
    CHECK(j.find("\"gate_1q\": \"ry\"") != std::string::npos);
    CHECK(j.find("\"gate_2q\": \"rxx\"") != std::string::npos);
    CHECK(j.find("\"contracted\": true") != std::string::npos);
    CHECK(j.find("\"qubits\"") != std::string::npos);
    CHECK(j.back() == '\n');
    CHECK(to_json(m) == j);

    SimilarityMatrix t = tanimoto_matrix(mols, {"a", "b"});
    std::string tj = to_json(t);
    CHECK(tj.find("\"kind\": \"tanimoto\"") != std::string::npos);
    CHECK(tj.find("gate_1q") == std::string::npos);
    CHECK(tj.find("qubits") == std::string::npos);
}

TEST_CASE("recomputing a matrix reproduces it bitwise") {
    auto mols = parse_all({"CC", "CCO", "C=CC"});
    EncodingParams ep;
    SimilarityMatrix a = fidelity_matrix(mols, number_labels(3), ep, false);
    SimilarityMatrix b = fidelity_matrix(mols, number_labels(3), ep, false);
    CHECK(a.values == b.values);
    CHECK(to_csv(a) == to_csv(b));
}

TEST_CASE("number formatting keeps twelve significant digits") {
    CHECK(fmt12(1.0) == "1");
    CHECK(fmt12(0.25) == "0.25");
    CHECK(fmt12(1.0 / 3.0) == "0.333333333333");
    CHECK(fmt12(0.0) == "0");
}
