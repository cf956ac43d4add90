#include "qmse/molgraph.hpp"
#include "qmse/error.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

namespace qmse {

namespace {

const std::array<const char*, 119> kSymbols = {
    "?",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
    "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
    "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
    "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
    "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
    "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
    "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
    "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
    "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

int symbol_to_z(const std::string& sym) {
    static const std::map<std::string, int> table = [] {
        std::map<std::string, int> m;
        for (int z = 1; z <= 118; ++z) m[kSymbols[z]] = z;
        return m;
    }();
    auto it = table.find(sym);
    return it == table.end() ? 0 : it->second;
}

enum class Dir : uint8_t { None, Up, Down };

// Bond as written, before endpoint normalization. `from` precedes `to`
// in the text; Dir keeps the slash orientation relative to that order.
struct PEdge {
    int from, to;
    int order;
    Dir dir;
};

struct Parser {
    const std::string& text;
    size_t pos = 0;

    std::vector<Atom> atoms;
    std::vector<PEdge> edges;

    int cur = -1; // atom new bonds attach to
    std::vector<int> branch_stack;

    bool pending = false; // an explicit bond symbol awaits its right atom
    int pending_order = 1;
    Dir pending_dir = Dir::None;

    struct RingOpen {
        int atom;
        bool has_order;
        int order;
    };
    std::map<char, RingOpen> rings;

    explicit Parser(const std::string& t) : text(t) {}

    [[noreturn]] void err(const std::string& kind, const std::string& what) {
        std::ostringstream os;
        os << what << " at position " << pos << " in \"" << text << "\"";
        fail(kind, os.str());
    }

    bool edge_exists(int a, int b) const {
        for (const auto& e : edges)
            if ((e.from == a && e.to == b) || (e.from == b && e.to == a)) return true;
        return false;
    }

    void attach(int atom_index) {
        if (cur >= 0) {
            if (edge_exists(cur, atom_index)) err("duplicate-bond", "duplicate bond");
            edges.push_back({cur, atom_index, pending ? pending_order : 1,
                             pending ? pending_dir : Dir::None});
        } else if (pending) {
            err("dangling-bond", "bond symbol with no preceding atom");
        }
        pending = false;
        pending_order = 1;
        pending_dir = Dir::None;
        cur = atom_index;
    }

    int add_atom(int z, TetraParity parity) {
        atoms.push_back({z, parity});
        int idx = static_cast<int>(atoms.size()) - 1;
        attach(idx);
        return idx;
    }

    void bond_symbol(int order, Dir dir) {
        if (pending) err("consecutive-bond-symbols", "two bond symbols in a row");
        pending = true;
        pending_order = order;
        pending_dir = dir;
    }

    void ring_digit(char d) {
        if (cur < 0) err("ring-closure-placement", "ring closure before any atom");
        if (pending_dir != Dir::None)
            err("directional-ring-closure", "directional marker on a ring closure");
        auto it = rings.find(d);
        if (it == rings.end()) {
            rings[d] = {cur, pending, pending_order};
        } else {
            RingOpen open = it->second;
            rings.erase(it);
            if (open.atom == cur) err("self-bond", "ring closure bonds an atom to itself");
            int order = 1;
            if (open.has_order && pending) {
                if (open.order != pending_order)
                    err("ring-bond-mismatch", "ring closure bond orders disagree");
                order = open.order;
            } else if (open.has_order) {
                order = open.order;
            } else if (pending) {
                order = pending_order;
            }
            if (edge_exists(open.atom, cur)) err("duplicate-bond", "duplicate bond");
            edges.push_back({open.atom, cur, order, Dir::None});
        }
        pending = false;
        pending_order = 1;
        pending_dir = Dir::None;
    }

    // [symbol(@|@@)?(H digit?)?] with charges, isotopes and bare hydrogen
    // rejected; the optional H count is dropped (hydrogens are implicit).
    void bracket_atom() {
        ++pos; // past '['
        if (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos])))
            err("isotope-not-supported", "isotope label");
        if (pos >= text.size() || !isupper(static_cast<unsigned char>(text[pos]))) {
            if (pos < text.size() && islower(static_cast<unsigned char>(text[pos])))
                err("aromatic-not-supported", "aromatic atom in brackets");
            err("unknown-atom-symbol", "expected element symbol after '['");
        }
        std::string sym(1, text[pos]);
        ++pos;
        if (pos < text.size() && islower(static_cast<unsigned char>(text[pos]))) {
            sym += text[pos];
            ++pos;
        }
        if (sym == "H") err("explicit-hydrogen", "explicit hydrogen atom");
        int z = symbol_to_z(sym);
        if (z == 0) err("unknown-atom-symbol", "unknown element symbol '" + sym + "'");

        TetraParity parity = TetraParity::None;
        if (pos < text.size() && text[pos] == '@') {
            ++pos;
            if (pos < text.size() && text[pos] == '@') {
                parity = TetraParity::Plus;
                ++pos;
            } else {
                parity = TetraParity::Minus;
            }
        }
        if (pos < text.size() && text[pos] == 'H') {
            ++pos;
            if (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-'))
            err("charge-not-supported", "charged atom");
        if (pos >= text.size() || text[pos] != ']')
            err("unbalanced-brackets", "missing ']'");
        add_atom(z, parity);
    }

    void run() {
        if (text.empty()) fail("empty-input", "empty SMILES string");
        while (pos < text.size()) {
            char c = text[pos];
            switch (c) {
            case 'C':
                if (pos + 1 < text.size() && text[pos + 1] == 'l') {
                    add_atom(17, TetraParity::None);
                    ++pos;
                } else {
                    add_atom(6, TetraParity::None);
                }
                break;
            case 'B':
                if (pos + 1 < text.size() && text[pos + 1] == 'r') {
                    add_atom(35, TetraParity::None);
                    ++pos;
                } else {
                    err("unknown-atom-symbol", "bare 'B' outside the supported organic subset");
                }
                break;
            case 'N': add_atom(7, TetraParity::None); break;
            case 'O': add_atom(8, TetraParity::None); break;
            case 'S': add_atom(16, TetraParity::None); break;
            case 'P': add_atom(15, TetraParity::None); break;
            case 'F': add_atom(9, TetraParity::None); break;
            case 'I': add_atom(53, TetraParity::None); break;
            case 'c': case 'n': case 'o': case 's': case 'p': case 'b':
                err("aromatic-not-supported", "aromatic (lowercase) atoms are not supported");
            case '[': bracket_atom(); break;
            case '-': bond_symbol(1, Dir::None); break;
            case '=': bond_symbol(2, Dir::None); break;
            case '#': bond_symbol(3, Dir::None); break;
            case '/': bond_symbol(1, Dir::Up); break;
            case '\\': bond_symbol(1, Dir::Down); break;
            case '(':
                if (cur < 0) err("dangling-branch", "branch with no atom to attach to");
                if (pending) err("dangling-bond", "bond symbol before '('");
                branch_stack.push_back(cur);
                break;
            case ')':
                if (branch_stack.empty())
                    err("unbalanced-parentheses", "')' without matching '('");
                if (pending) err("dangling-bond", "bond symbol before ')'");
                cur = branch_stack.back();
                branch_stack.pop_back();
                break;
            case '.': err("dot-disconnection", "multi-component input");
            case '%': err("ring-closure-range", "ring closures above 9 are not supported");
            default:
                if (c >= '1' && c <= '9') {
                    ring_digit(c);
                } else {
                    err("unexpected-character",
                        std::string("unexpected character '") + c + "'");
                }
            }
            ++pos;
        }
        if (!branch_stack.empty()) err("unbalanced-parentheses", "unclosed '('");
        if (pending) err("dangling-bond", "trailing bond symbol");
        if (!rings.empty()) err("unmatched-ring-closure", "unclosed ring-closure digit");
        if (atoms.empty()) fail("empty-input", "no atoms in input");
    }
};

bool in_double_bond(const std::vector<PEdge>& edges, int atom) {
    for (const auto& e : edges)
        if (e.order == 2 && (e.from == atom || e.to == atom)) return true;
    return false;
}

// Vertical side (+1 up / -1 down) of `n` relative to `u` for a marked
// single bond, given the slash was written left-to-right along the edge.
int side_of(const PEdge& e, int u, int n) {
    bool n_first = (e.from == n && e.to == u);
    int up = (e.dir == Dir::Up) ? 1 : -1;
    return n_first ? -up : up;
}

void resolve_ez(std::vector<PEdge>& edges, std::vector<Bond>& out,
                const std::string& text) {
    for (const auto& e : edges) {
        if (e.dir == Dir::None) continue;
        if (!in_double_bond(edges, e.from) && !in_double_bond(edges, e.to))
            fail("directional-bond-placement",
                 "directional bond not adjacent to a double bond in \"" + text + "\"");
    }
    for (auto& e : edges) {
        Bond b;
        b.a = std::min(e.from, e.to);
        b.b = std::max(e.from, e.to);
        b.order = e.order;
        b.ez = EzFlag::None;
        if (e.order == 2) {
            int side[2] = {0, 0}; // first marked neighbour side at each endpoint
            int ends[2] = {e.from, e.to};
            for (int k = 0; k < 2; ++k) {
                for (const auto& m : edges) {
                    if (m.dir == Dir::None || m.order != 1) continue;
                    int u = ends[k], n = -1;
                    if (m.from == u) n = m.to;
                    else if (m.to == u) n = m.from;
                    else continue;
                    int s = side_of(m, u, n);
                    if (side[k] == 0) {
                        side[k] = s;
                    } else if (side[k] == s) {
                        fail("conflicting-directional-bonds",
                             "two substituents of one atom marked on the same side in \"" +
                                 text + "\"");
                    }
                }
            }
            if (side[0] != 0 && side[1] != 0)
                b.ez = (side[0] == side[1]) ? EzFlag::Z : EzFlag::E;
        }
        out.push_back(b);
    }
    std::sort(out.begin(), out.end(),
              [](const Bond& x, const Bond& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
}

} // namespace

std::vector<int> MolGraph::neighbors(int i) const {
    std::vector<int> out;
    for (const auto& b : bonds) {
        if (b.a == i) out.push_back(b.b);
        else if (b.b == i) out.push_back(b.a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

const Bond* MolGraph::find_bond(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (const auto& e : bonds)
        if (e.a == a && e.b == b) return &e;
    return nullptr;
}

bool same_graph(const MolGraph& p, const MolGraph& q) {
    if (p.atoms.size() != q.atoms.size() || p.bonds.size() != q.bonds.size()) return false;
    for (size_t i = 0; i < p.atoms.size(); ++i)
        if (p.atoms[i].z != q.atoms[i].z || p.atoms[i].parity != q.atoms[i].parity)
            return false;
    for (size_t i = 0; i < p.bonds.size(); ++i) {
        const Bond &a = p.bonds[i], &b = q.bonds[i];
        if (a.a != b.a || a.b != b.b || a.order != b.order || a.ez != b.ez) return false;
    }
    return true;
}

MolGraph parse_smiles(const std::string& text) {
    Parser p(text);
    p.run();
    MolGraph g;
    g.atoms = std::move(p.atoms);
    resolve_ez(p.edges, g.bonds, text);
    g.source = text;
    return g;
}

const std::string& element_symbol(int z) {
    static const std::array<std::string, 119> syms = [] {
        std::array<std::string, 119> s;
        for (int i = 0; i <= 118; ++i) s[i] = kSymbols[i];
        return s;
    }();
    if (z < 1 || z > 118) fail("unknown-atom-symbol", "atomic number out of range");
    return syms[z];
}

MolGraph reorder_front(const MolGraph& g, int z) {
    int root = -1;
    for (int i = 0; i < g.n_atoms(); ++i) {
        if (g.atoms[i].z == z) {
            root = i;
            break;
        }
    }
    if (root < 0)
        fail("element-not-present",
             "no " + element_symbol(z) + " atom in \"" + g.source + "\"");
    if (root == 0) return g;

    std::vector<int> old_to_new(g.n_atoms(), -1);
    std::vector<int> stack = {root};
    int next_index = 0;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        if (old_to_new[u] >= 0) continue;
        old_to_new[u] = next_index++;
        auto nb = g.neighbors(u);
        for (auto it = nb.rbegin(); it != nb.rend(); ++it)
            if (old_to_new[*it] < 0) stack.push_back(*it);
    }

    MolGraph out;
    out.source = g.source;
    out.atoms.resize(g.atoms.size());
    for (int i = 0; i < g.n_atoms(); ++i) out.atoms[old_to_new[i]] = g.atoms[i];
    for (const auto& b : g.bonds) {
        Bond nb = b;
        nb.a = old_to_new[b.a];
        nb.b = old_to_new[b.b];
        if (nb.a > nb.b) std::swap(nb.a, nb.b);
        out.bonds.push_back(nb);
    }
    std::sort(out.bonds.begin(), out.bonds.end(),
              [](const Bond& x, const Bond& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    return out;
}

namespace {

std::string atom_text(const Atom& a) {
    std::string s = element_symbol(a.z);
    if (a.parity == TetraParity::Plus) s += "@+";
    else if (a.parity == TetraParity::Minus) s += "@-";
    return s;
}

std::string bond_text(const Bond& b) {
    std::string s = std::to_string(b.order);
    if (b.ez == EzFlag::E) s += "E";
    else if (b.ez == EzFlag::Z) s += "Z";
    return s;
}

struct ChainWriter {
    const MolGraph& g;
    const std::vector<int>& chain_pos; // atom -> chain position, -1 off chain
    std::vector<bool> visited;

    // Renders the subtree hanging below `node`, entered from `parent`.
    // Already-visited targets show up as relative ring markers so cyclic
    // structure still distinguishes tokens without absolute indices.
    std::string subtree(int node, int parent) {
        visited[node] = true;
        std::string s = atom_text(g.atoms[node]);
        for (int m : g.neighbors(node)) {
            if (m == parent) continue;
            const Bond* b = g.find_bond(node, m);
            if (chain_pos[m] >= 0) {
                s += "[~" + bond_text(*b) + "@" + std::to_string(chain_pos[m]) + "]";
            } else if (visited[m]) {
                s += "[~" + bond_text(*b) + "cyc]";
            } else {
                s += "(" + bond_text(*b) + subtree(m, node) + ")";
            }
        }
        return s;
    }
};

} // namespace

TokenChain to_token_chain(const MolGraph& g) {
    const int n = g.n_atoms();
    std::vector<int> chain;
    std::vector<int> chain_pos(n, -1);
    int cur = 0;
    while (cur >= 0) {
        chain_pos[cur] = static_cast<int>(chain.size());
        chain.push_back(cur);
        int next = -1;
        for (int m : g.neighbors(cur))
            if (chain_pos[m] < 0 && m > next) next = m;
        cur = next;
    }

    ChainWriter w{g, chain_pos, std::vector<bool>(n, false)};
    for (int c : chain) w.visited[c] = true;

    TokenChain tc;
    for (size_t i = 0; i < chain.size(); ++i) {
        int u = chain[i];
        AtomToken t;
        t.atom_index = u;
        t.z = g.atoms[u].z;
        t.parity = g.atoms[u].parity;
        int prev = i > 0 ? chain[i - 1] : -1;
        int next = i + 1 < chain.size() ? chain[i + 1] : -1;
        for (int m : g.neighbors(u)) {
            if (m == prev || m == next) continue;
            const Bond* b = g.find_bond(u, m);
            if (chain_pos[m] >= 0) {
                // ring closure between two chain atoms, stored relative
                int delta = chain_pos[m] - static_cast<int>(i);
                t.branches += "[~" + bond_text(*b) + "@" + std::to_string(delta) + "]";
            } else {
                t.branches += "(" + bond_text(*b) + w.subtree(m, u) + ")";
            }
        }
        tc.atoms.push_back(std::move(t));
        if (next >= 0) {
            const Bond* b = g.find_bond(u, next);
            tc.bonds.push_back({b->order, b->ez});
        }
    }
    return tc;
}

} // namespace qmse
