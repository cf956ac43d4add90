#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmse/contraction.hpp"
#include "qmse/dataset.hpp"
#include "qmse/error.hpp"
#include "qmse/statevector.hpp"

#include <cmath>
#include <random>
#include <string>

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

std::string random_chain(std::mt19937_64& rng, int n_atoms) {
    static const char atoms[] = {'C', 'N', 'O'};
    static const char* bonds[] = {"", "=", "#"};
    std::string s;
    for (int i = 0; i < n_atoms; ++i) {
        if (i) s += bonds[rng() % 3];
        s += atoms[rng() % 3];
    }
    return s;
}

// two chains sharing a verbatim head, diverging after it
std::pair<std::string, std::string> shared_head_pair(std::mt19937_64& rng) {
    static const char* bonds[] = {"", "=", "#"};
    std::string head = random_chain(rng, 3 + int(rng() % 2));
    std::string p = head, q = head;
    int tp = int(rng() % 3), tq = int(rng() % 3);
    if (tp) p += bonds[rng() % 3] + random_chain(rng, tp);
    if (tq) q += bonds[rng() % 3] + random_chain(rng, tq);
    return {p, q};
}

double direct_fidelity(const MolGraph& p, const MolGraph& q, const EncodingParams& ep) {
    int w = std::max(p.n_atoms(), q.n_atoms());
    Circuit cp = build_qmse_circuit(build_matrix(p, ep), ep, w);
    Circuit cq = build_qmse_circuit(build_matrix(q, ep), ep, w);
    return fidelity(cp, cq);
}

} // namespace

TEST_CASE("identical hexane chains contract to their endpoints") {
    MolGraph p = parse_smiles("CCCCCC");
    MolGraph q = parse_smiles("CCCCCC");
    EncodingParams ep;
    ContractionPlan plan = find_common_fragments(p, q, ep);

    REQUIRE(plan.removed_segments.size() == 1);
    CHECK(plan.removed_segments[0].atom_begin == 1);
    CHECK(plan.removed_segments[0].atom_end == 4);
    CHECK(plan.removed_segments[0].n_atoms() == 4);
    CHECK(plan.width_p == 2);
    CHECK(plan.width_q == 2);
    CHECK(plan.final_width == 2);
    CHECK(plan.kept_atoms_p == std::vector<int>{0, -1, -1, -1, -1, 1});
    CHECK(plan.kept_atoms_q == std::vector<int>{0, -1, -1, -1, -1, 1});

    ContractedFidelity cf = contracted_fidelity(p, q, ep);
    CHECK(cf.qubits_used == 2);
    CHECK(cf.fidelity == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("a differing bond blocks removal") {
    MolGraph p = parse_smiles("CC=CC");
    MolGraph q = parse_smiles("CC#CC");
    EncodingParams ep;
    ContractionPlan plan = find_common_fragments(p, q, ep);
    CHECK(plan.empty());
    CHECK(plan.final_width == 4);

    // applying the empty plan changes nothing
    auto [rp, rq] = contract_pair(p, q, plan);
    CHECK(same_graph(rp, p));
    CHECK(same_graph(rq, q));

    ContractedFidelity cf = contracted_fidelity(p, q, ep);
    CHECK(cf.qubits_used == 4);
    CHECK(cf.fidelity == doctest::Approx(direct_fidelity(p, q, ep)).epsilon(1e-9));
}

TEST_CASE("single atoms have no removable interior") {
    EncodingParams ep;
    ContractionPlan plan =
        find_common_fragments(parse_smiles("C"), parse_smiles("O"), ep);
    CHECK(plan.empty());
}

TEST_CASE("shared-head random pairs keep the overlap exactly") {
    std::mt19937_64 rng(41);
    EncodingParams ep;
    int nonempty = 0;
    for (int rep = 0; rep < 40; ++rep) {
        auto [sp, sq] = shared_head_pair(rng);
        MolGraph p = parse_smiles(sp);
        MolGraph q = parse_smiles(sq);

        ContractedFidelity cf = contracted_fidelity(p, q, ep);
        double ref = direct_fidelity(p, q, ep);
        CHECK(std::abs(cf.fidelity - ref) < 1e-9);
        CHECK(cf.qubits_used == cf.plan.final_width);
        CHECK(cf.qubits_used <= std::max(p.n_atoms(), q.n_atoms()));
        if (!cf.plan.empty()) ++nonempty;

        int removed_p = 0;
        for (int m : cf.plan.kept_atoms_p)
            if (m < 0) ++removed_p;
        CHECK(p.n_atoms() - removed_p == cf.plan.width_p);
    }
    CHECK(nonempty > 20); // the generator shares heads by construction
}

TEST_CASE("contracted fidelity is symmetric") {
    std::mt19937_64 rng(42);
    EncodingParams ep;
    for (int rep = 0; rep < 10; ++rep) {
        auto [sp, sq] = shared_head_pair(rng);
        MolGraph p = parse_smiles(sp);
        MolGraph q = parse_smiles(sq);
        double a = contracted_fidelity(p, q, ep).fidelity;
        double b = contracted_fidelity(q, p, ep).fidelity;
        CHECK(std::abs(a - b) < 1e-10);
    }
}

TEST_CASE("fatty acid pairs drop the shared saturated head") {
    const auto& table = fatty_acid_table();
    MolGraph fa1 = parse_smiles(table[0].smiles);
    MolGraph fa5 = parse_smiles(table[4].smiles);
    REQUIRE(fa1.n_atoms() == 36);
    REQUIRE(fa5.n_atoms() == 36);

    EncodingParams ep;
    ContractedFidelity cf = contracted_fidelity(fa1, fa5, ep);
    CHECK(!cf.plan.empty());
    CHECK(cf.qubits_used == 10); // 26 shared positions fall away
    CHECK(cf.fidelity >= 0.0);
    CHECK(cf.fidelity <= 1.0);

    // same pair, same answer, both directions
    ContractedFidelity again = contracted_fidelity(fa1, fa5, ep);
    CHECK(again.fidelity == cf.fidelity);
    CHECK(std::abs(contracted_fidelity(fa5, fa1, ep).fidelity - cf.fidelity) < 1e-10);
}

TEST_CASE("plans are pinned to the graphs they came from") {
    EncodingParams ep;
    MolGraph p = parse_smiles("CCCCCC");
    MolGraph q = parse_smiles("CCCCCC");
    ContractionPlan plan = find_common_fragments(p, q, ep);

    MolGraph other = parse_smiles("CCCCCO");
    CHECK(thrown_kind([&] { contract_pair(other, q, plan); }) == "stale-plan");
    CHECK(thrown_kind([&] { contract_pair(p, other, plan); }) == "stale-plan");

    auto [rp, rq] = contract_pair(p, q, plan); // the original pair still applies
    CHECK(rp.n_atoms() == 2);
    CHECK(rq.n_atoms() == 2);
}

TEST_CASE("repeated encoding layers refuse to contract") {
    EncodingParams ep;
    ep.layers_x = 2;
    MolGraph p = parse_smiles("CCCC");
    CHECK(thrown_kind([&] { contracted_fidelity(p, p, ep); }) == "contraction-layers");
}
