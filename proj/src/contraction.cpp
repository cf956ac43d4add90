#include "qmse/contraction.hpp"
#include "qmse/circuit.hpp"
#include "qmse/error.hpp"
#include "qmse/statevector.hpp"

#include <algorithm>
#include <string>

namespace qmse {

namespace {

uint64_t graph_hash(const MolGraph& g) {
    uint64_t h = 14695981039346656037ull;
    auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(static_cast<uint64_t>(g.n_atoms()));
    for (const auto& a : g.atoms) {
        mix(static_cast<uint64_t>(a.z));
        mix(static_cast<uint64_t>(a.parity));
    }
    for (const auto& b : g.bonds) {
        mix(static_cast<uint64_t>(b.a));
        mix(static_cast<uint64_t>(b.b));
        mix(static_cast<uint64_t>(b.order));
        mix(static_cast<uint64_t>(b.ez));
    }
    return h;
}

// Token chain annotated with the encoding values the match must preserve:
// the diagonal value per chain atom and the coupling value per chain bond.
struct ValuedChain {
    TokenChain tokens;
    std::vector<double> diag;
    std::vector<double> coupling;
};

ValuedChain valued_chain(const MolGraph& g, const EncodingParams& params) {
    ValuedChain vc;
    vc.tokens = to_token_chain(g);
    CouplingMatrix m = build_matrix(g, params);
    for (size_t i = 0; i < vc.tokens.atoms.size(); ++i) {
        int a = vc.tokens.atoms[i].atom_index;
        vc.diag.push_back(m.at(a, a));
        if (i + 1 < vc.tokens.atoms.size()) {
            int b = vc.tokens.atoms[i + 1].atom_index;
            vc.coupling.push_back(m.at(a, b));
        }
    }
    return vc;
}

struct Candidate {
    int len = 0; // full run length in chain positions, boundaries included
    int start_p = -1, start_q = -1;

    bool better_than(const Candidate& o) const {
        if (len != o.len) return len > o.len;
        if (start_p != o.start_p) return start_p < o.start_p;
        return start_q < o.start_q;
    }
};

} // namespace

int ContractionPlan::n_removed() const {
    int n = 0;
    for (const auto& s : removed_segments) n += s.n_atoms();
    return n;
}

ContractionPlan find_common_fragments(const MolGraph& p, const MolGraph& q,
                                      const EncodingParams& params) {
    const ValuedChain cp = valued_chain(p, params);
    const ValuedChain cq = valued_chain(q, params);
    const int np = static_cast<int>(cp.tokens.atoms.size());
    const int nq = static_cast<int>(cq.tokens.atoms.size());

    auto atom_eq = [&](int i, int k) {
        return cp.tokens.atoms[i] == cq.tokens.atoms[k] && cp.diag[i] == cq.diag[k];
    };
    auto bond_eq = [&](int i, int k) { // bond after positions i / k
        return cp.tokens.bonds[i] == cq.tokens.bonds[k] &&
               cp.coupling[i] == cq.coupling[k];
    };

    std::vector<char> used_p(np, 0), used_q(nq, 0);
    ContractionPlan plan;
    plan.hash_p = graph_hash(p);
    plan.hash_q = graph_hash(q);

    for (;;) {
        Candidate best;
        // walk every diagonal of the position grid, split into maximal
        // matchable stretches, and take the longest eligible run inside
        for (int d = -(nq - 1); d < np; ++d) {
            int i = std::max(d, 0);
            int k = i - d;
            while (i < np && k < nq) {
                if (used_p[i] || used_q[k] || !atom_eq(i, k)) {
                    ++i;
                    ++k;
                    continue;
                }
                int len = 1; // maximal stretch starting at (i, k)
                while (i + len < np && k + len < nq && !used_p[i + len] &&
                       !used_q[k + len] && bond_eq(i + len - 1, k + len - 1) &&
                       atom_eq(i + len, k + len))
                    ++len;
                // branch-free intervals of the stretch, widened by one
                // boundary atom on each side where the stretch allows
                int t = 0;
                while (t < len) {
                    if (!cp.tokens.atoms[i + t].branches.empty()) {
                        ++t;
                        continue;
                    }
                    int v = t;
                    while (v + 1 < len && cp.tokens.atoms[i + v + 1].branches.empty())
                        ++v;
                    int lo = std::max(0, t - 1);
                    int hi = std::min(len - 1, v + 1);
                    if (lo + 1 <= hi - 1) {
                        Candidate c{hi - lo + 1, i + lo, k + lo};
                        if (c.better_than(best)) best = c;
                    }
                    t = v + 1;
                }
                i += len;
                k += len;
            }
        }
        if (best.len < 3) break;

        RemovedSegment seg;
        seg.chain_begin = best.start_p + 1;
        seg.chain_end = best.start_p + best.len - 2;
        seg.atom_begin = cp.tokens.atoms[seg.chain_begin].atom_index;
        seg.atom_end = cp.tokens.atoms[seg.chain_end].atom_index;
        plan.removed_segments.push_back(seg);
        for (int t = 0; t < best.len; ++t) {
            used_p[best.start_p + t] = 1;
            used_q[best.start_q + t] = 1;
        }
    }

    std::sort(plan.removed_segments.begin(), plan.removed_segments.end(),
              [](const RemovedSegment& a, const RemovedSegment& b) {
                  return a.atom_begin < b.atom_begin;
              });

    auto build_map = [&](const ValuedChain& c, int n_chain, int n_atoms,
                         std::vector<int>& map) {
        std::vector<char> removed(n_atoms, 0);
        for (const auto& s : plan.removed_segments)
            for (int t = s.chain_begin; t <= s.chain_end; ++t)
                removed[c.tokens.atoms[t].atom_index] = 1;
        (void)n_chain;
        map.assign(n_atoms, -1);
        int next = 0;
        for (int a = 0; a < n_atoms; ++a)
            if (!removed[a]) map[a] = next++;
        return next;
    };
    plan.width_p = build_map(cp, np, p.n_atoms(), plan.kept_atoms_p);
    plan.width_q = build_map(cq, nq, q.n_atoms(), plan.kept_atoms_q);
    plan.final_width = std::max(plan.width_p, plan.width_q);
    return plan;
}

std::pair<MolGraph, MolGraph> contract_pair(const MolGraph& p, const MolGraph& q,
                                            const ContractionPlan& plan) {
    if (graph_hash(p) != plan.hash_p || graph_hash(q) != plan.hash_q)
        fail("stale-plan", "contraction plan was computed from different graphs");

    auto shrink = [](const MolGraph& g, const std::vector<int>& map) {
        MolGraph h;
        h.source = g.source;
        for (int i = 0; i < g.n_atoms(); ++i)
            if (map[i] >= 0) h.atoms.push_back(g.atoms[i]);
        for (const auto& b : g.bonds)
            if (map[b.a] >= 0 && map[b.b] >= 0)
                h.bonds.push_back({map[b.a], map[b.b], b.order, b.ez});
        return h;
    };
    return {shrink(p, plan.kept_atoms_p), shrink(q, plan.kept_atoms_q)};
}

ContractedFidelity contracted_fidelity(const MolGraph& p, const MolGraph& q,
                                       const EncodingParams& params, int qubit_cap) {
    if (params.layers_x != 1)
        fail("contraction-layers",
             "chain contraction preserves fidelity only for a single encoding "
             "repetition; got layers_x = " +
                 std::to_string(params.layers_x));

    ContractedFidelity out;
    out.plan = find_common_fragments(p, q, params);
    auto [rp, rq] = contract_pair(p, q, out.plan);
    out.qubits_used = out.plan.final_width;

    Circuit a = build_qmse_circuit(build_matrix(rp, params), params, out.qubits_used);
    Circuit b = build_qmse_circuit(build_matrix(rq, params), params, out.qubits_used);
    out.fidelity = fidelity(a, b, qubit_cap);
    return out;
}

} // namespace qmse
