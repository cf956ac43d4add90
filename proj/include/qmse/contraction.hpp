#pragma once

#include "qmse/encoding.hpp"
#include "qmse/molgraph.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qmse {

// One removed interior: a stretch of consecutive main-chain positions
// whose atoms carry identical indices, values and flanking bonds in both
// molecules. The boundary atoms just outside the stretch stay.
struct RemovedSegment {
    int chain_begin = 0; // chain positions, inclusive
    int chain_end = 0;
    int atom_begin = 0; // atom indices, inclusive; equal in both molecules
    int atom_end = 0;

    int n_atoms() const { return atom_end - atom_begin + 1; }
};

// Result of the fragment search for one ordered pair of molecules. The
// hash fields pin the plan to the exact graphs it was computed from so a
// stale plan cannot silently be applied to mutated inputs.
struct ContractionPlan {
    std::vector<RemovedSegment> removed_segments;
    std::vector<int> kept_atoms_p, kept_atoms_q; // old index -> new, -1 removed
    int width_p = 0, width_q = 0;                // kept atom counts
    int final_width = 0;                         // max(width_p, width_q)
    uint64_t hash_p = 0, hash_q = 0;

    bool empty() const { return removed_segments.empty(); }
    int n_removed() const;
};

// Searches the two main-chain token sequences for common runs whose
// interiors may be dropped without changing the encoded-state overlap:
// greedy longest-run-first over non-overlapping candidates, ties broken
// by earliest position. A run qualifies only when atoms match by index,
// value and stereo marker, every bond inside matches, and the interior is
// branch-free; the two boundary atoms are always kept. Molecules with no
// qualifying run yield an empty plan.
ContractionPlan find_common_fragments(const MolGraph& p, const MolGraph& q,
                                      const EncodingParams& params);

// Applies a plan: removed atoms disappear together with their bonds, the
// kept atoms are renumbered in ascending order. Rejects plans computed
// from different graphs.
std::pair<MolGraph, MolGraph> contract_pair(const MolGraph& p, const MolGraph& q,
                                            const ContractionPlan& plan);

struct ContractedFidelity {
    double fidelity = 0.0;
    int qubits_used = 0;
    ContractionPlan plan;
};

// Fidelity after contraction: finds fragments, reduces both molecules and
// simulates only the surviving atoms on a shared register of final_width
// qubits. Only valid for layers_x == 1; with repeated encoding layers the
// interleaved rotations break the cancellation that makes removal exact.
ContractedFidelity contracted_fidelity(const MolGraph& p, const MolGraph& q,
                                       const EncodingParams& params,
                                       int qubit_cap = -1);

} // namespace qmse
