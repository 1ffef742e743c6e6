#include "eoprop/chem/molecule.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <sstream>
#include <tuple>
#include <string_view>

namespace eoprop::chem {
namespace {

constexpr std::array<std::string_view, 119> kElements{
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si", "P",  "S",
    "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As",
    "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn",
    "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho",
    "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po",
    "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md",
    "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

const char* order_symbol(BondOrder order) {
    switch (order) {
        case BondOrder::single: return "-";
        case BondOrder::double_: return "=";
        case BondOrder::triple: return "#";
        case BondOrder::aromatic: return ":";
    }
    return "?";
}

}  // namespace

int atomic_number(const std::string& element) {
    for (std::size_t z = 1; z < kElements.size(); ++z)
        if (kElements[z] == element) return static_cast<int>(z);
    return 0;
}

std::size_t Molecule::degree(std::size_t atom) const {
    return static_cast<std::size_t>(
        std::count_if(bonds.begin(), bonds.end(), [atom](const Bond& b) { return b.begin == atom || b.end == atom; }));
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> Molecule::adjacency() const {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(atoms.size());
    for (std::size_t i = 0; i < bonds.size(); ++i) {
        adj[bonds[i].begin].emplace_back(bonds[i].end, i);
        adj[bonds[i].end].emplace_back(bonds[i].begin, i);
    }
    return adj;
}

std::vector<bool> Molecule::ring_atoms() const {
    // An atom is on a cycle iff one of its bonds is not a bridge (Tarjan lowlink).
    const auto adj = adjacency();
    const std::size_t n = atoms.size();
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<bool> bridge(bonds.size(), false);
    int timer = 0;
    std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t u, std::size_t parent_bond) {
        disc[u] = low[u] = timer++;
        for (auto [v, b] : adj[u]) {
            if (b == parent_bond) continue;
            if (disc[v] < 0) {
                dfs(v, b);
                low[u] = std::min(low[u], low[v]);
                if (low[v] > disc[u]) bridge[b] = true;
            } else {
                low[u] = std::min(low[u], disc[v]);
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i)
        if (disc[i] < 0) dfs(i, bonds.size());

    std::vector<bool> in_ring(n, false);
    for (std::size_t b = 0; b < bonds.size(); ++b) {
        if (bridge[b]) continue;
        in_ring[bonds[b].begin] = true;
        in_ring[bonds[b].end] = true;
    }
    return in_ring;
}

std::string adjacency_listing(const Molecule& mol) {
    std::ostringstream os;
    for (std::size_t i = 0; i < mol.atoms.size(); ++i) {
        const Atom& a = mol.atoms[i];
        os << i << ' ' << a.element << (a.aromatic ? " ar" : "") << " q" << a.charge << " h" << a.hydrogens;
        if (a.isotope) os << " iso" << *a.isotope;
        os << '\n';
    }
    std::vector<Bond> sorted = mol.bonds;
    for (auto& b : sorted)
        if (b.begin > b.end) std::swap(b.begin, b.end);
    std::sort(sorted.begin(), sorted.end(),
              [](const Bond& x, const Bond& y) { return std::tie(x.begin, x.end) < std::tie(y.begin, y.end); });
    for (const auto& b : sorted) os << b.begin << order_symbol(b.order) << b.end << '\n';
    return os.str();
}

}  // namespace eoprop::chem
