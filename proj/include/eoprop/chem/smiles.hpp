#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eoprop/chem/molecule.hpp"

namespace eoprop::chem {

enum class SmilesErrorKind {
    EmptyInput,
    UnbalancedParenthesis,
    UnpairedRingBond,
    UnknownAtomSymbol,
    UnexpectedCharacter,
    DanglingBond,
    InvalidBond,  // self-bond, duplicate bond, or conflicting ring-closure orders
};

const char* to_string(SmilesErrorKind kind);

class SmilesError : public std::runtime_error {
public:
    SmilesError(SmilesErrorKind kind, std::size_t offset, const std::string& detail);
    SmilesErrorKind kind() const noexcept { return kind_; }
    /// Byte offset into the input where the problem was detected.
    std::size_t offset() const noexcept { return offset_; }

private:
    SmilesErrorKind kind_;
    std::size_t offset_;
};

/// Parses a SMILES string into a heavy-atom graph.
///
/// Supported: organic subset (B C N O P S F Cl Br I, aromatic b c n o p s),
/// bracket atoms with isotope, element, chirality, H count, charge and atom
/// class; bonds `- = # :`; branches; ring closures 0-9 and %nn; `.` separated
/// fragments. Stereo marks (`/ \ @`) are accepted and discarded. Implicit
/// hydrogens of organic-subset atoms are derived from default valences.
Molecule parse_smiles(std::string_view text);

}  // namespace eoprop::chem
