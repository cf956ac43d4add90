#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmse {

// Tetrahedral parity marker carried by an atom. Plus/Minus are the two
// chirality senses written @@ and @ in the input; None means unmarked.
enum class TetraParity : uint8_t { None, Plus, Minus };

// Cis/trans flag resolved from directional single bonds around a double
// bond. Only bonds of order 2 ever carry E or Z.
enum class EzFlag : uint8_t { None, E, Z };

struct Atom {
    int z = 0; // atomic number
    TetraParity parity = TetraParity::None;
};

struct Bond {
    int a = 0; // endpoint indices, always a < b
    int b = 0;
    int order = 1; // 1, 2 or 3
    EzFlag ez = EzFlag::None;
};

// Heavy-atom molecular graph. Atom order is the depth-first encounter
// order of the source text and doubles as the qubit mapping, so two
// graphs with the same atoms in a different order are different objects.
// parse_smiles always yields a connected graph; reduced graphs produced
// by contraction may be disconnected.
struct MolGraph {
    std::vector<Atom> atoms;
    std::vector<Bond> bonds;
    std::string source;

    int n_atoms() const { return static_cast<int>(atoms.size()); }
    int n_bonds() const { return static_cast<int>(bonds.size()); }

    // Neighbour atom indices of `i` in ascending order.
    std::vector<int> neighbors(int i) const;
    const Bond* find_bond(int a, int b) const;
};

bool same_graph(const MolGraph& p, const MolGraph& q);

// Parses the supported SMILES subset: organic-subset and bracket atoms
// (no charges, isotopes or explicit hydrogens), Kekule bonds - = #,
// branches, ring closures 1-9, directional bonds / \ and tetrahedral
// markers @ / @@. Throws Error with a named kind on anything else.
MolGraph parse_smiles(const std::string& text);

// Element symbol for an atomic number ("C", "Cl", ...).
const std::string& element_symbol(int z);

// Re-roots the depth-first order so the first atom matching `z` gets
// index 0; bond endpoints are remapped consistently. Idempotent when
// atom 0 already matches. Throws when the element is absent.
MolGraph reorder_front(const MolGraph& g, int z);

// One atom on the serialized main chain. `branches` is a canonical text
// rendering of everything hanging off the atom besides its two chain
// bonds (branch subtrees, ring-closure edges); empty for plain chain
// atoms. Equality of two tokens means the atoms are interchangeable for
// fragment matching.
struct AtomToken {
    int atom_index = 0;
    int z = 0;
    TetraParity parity = TetraParity::None;
    std::string branches;

    bool operator==(const AtomToken& o) const {
        return atom_index == o.atom_index && z == o.z && parity == o.parity &&
               branches == o.branches;
    }
};

struct BondToken {
    int order = 1;
    EzFlag ez = EzFlag::None;

    bool operator==(const BondToken& o) const {
        return order == o.order && ez == o.ez;
    }
};

// Alternating atom/bond serialization of the main chain: atoms[i] and
// atoms[i+1] are joined by bonds[i]. The main chain starts at atom 0 and
// greedily follows the highest-index unvisited neighbour, which is the
// SMILES continuation direction for parse-ordered graphs.
struct TokenChain {
    std::vector<AtomToken> atoms;
    std::vector<BondToken> bonds;
};

TokenChain to_token_chain(const MolGraph& g);

} // namespace qmse
