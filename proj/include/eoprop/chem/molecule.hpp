#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace eoprop::chem {

enum class BondOrder { single = 1, double_ = 2, triple = 3, aromatic = 4 };

struct Atom {
    std::string element;
    bool aromatic = false;
    int charge = 0;
    /// Total attached hydrogens: bracket count for bracket atoms, valence-derived otherwise.
    int hydrogens = 0;
    std::optional<int> isotope;

    friend bool operator==(const Atom&, const Atom&) = default;
};

struct Bond {
    std::size_t begin = 0;
    std::size_t end = 0;
    BondOrder order = BondOrder::single;

    friend bool operator==(const Bond&, const Bond&) = default;
};

/// Heavy-atom graph. Hydrogens are counts on atoms, never atoms themselves
/// (except an explicit bracket [H]).
struct Molecule {
    std::vector<Atom> atoms;
    std::vector<Bond> bonds;

    std::size_t degree(std::size_t atom) const;
    /// Neighbor atom indices paired with the connecting bond's index.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency() const;
    /// Per-atom flag: atom lies on at least one cycle.
    std::vector<bool> ring_atoms() const;
};

/// Canonical-order textual listing (atoms in index order, bonds sorted by
/// endpoint pair) used for stable comparisons of parsed graphs.
std::string adjacency_listing(const Molecule& mol);

int atomic_number(const std::string& element);

}  // namespace eoprop::chem
