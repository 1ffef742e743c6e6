#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eoprop/chem/molecule.hpp"

namespace eoprop::chem {

enum class FingerprintKind { ecfp, maccs, avalon, rdkit };

const char* to_string(FingerprintKind kind);
/// Accepts the lowercase kind names; throws FingerprintError(UnknownKind).
FingerprintKind parse_fingerprint_kind(std::string_view name);

enum class FingerprintErrorKind { WidthMismatch, LengthMismatch, UnknownKind, InvalidWidth, BadHex };

class FingerprintError : public std::runtime_error {
public:
    FingerprintError(FingerprintErrorKind kind, const std::string& detail);
    FingerprintErrorKind kind() const noexcept { return kind_; }

private:
    FingerprintErrorKind kind_;
};

/// Fixed-width bit vector over molecular substructures.
class Fingerprint {
public:
    Fingerprint(std::size_t n_bits, FingerprintKind kind, std::optional<int> radius = std::nullopt);

    std::size_t n_bits() const noexcept { return n_bits_; }
    FingerprintKind kind() const noexcept { return kind_; }
    /// Set only for ECFP.
    std::optional<int> radius() const noexcept { return radius_; }

    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    std::size_t popcount() const;
    std::vector<std::size_t> on_bits() const;
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    /// Hex string of ceil(n_bits/4) digits; the most significant bit of the
    /// first digit is bit 0. Unused trailing bits are zero.
    std::string to_hex() const;
    static Fingerprint from_hex(std::string_view hex, std::size_t n_bits, FingerprintKind kind);

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

private:
    std::size_t n_bits_;
    FingerprintKind kind_;
    std::optional<int> radius_;
    std::vector<std::uint64_t> words_;
};

inline constexpr int kDefaultEcfpRadius = 2;
inline constexpr std::size_t kDefaultEcfpBits = 2048;

/// Hash used for every ECFP identifier: a fold of 64-bit words through the
/// splitmix64 finalizer, starting from kEcfpHashSeed. See docs/fingerprints.md.
inline constexpr std::uint64_t kEcfpHashSeed = 0x2545F4914F6CDD1DULL;
std::uint64_t ecfp_hash(std::span<const std::uint64_t> words);

/// Per-radius identifiers: result[r][atom] is the atom's identifier after r iterations.
std::vector<std::vector<std::uint64_t>> ecfp_identifiers(const Molecule& mol, int radius);

/// Extended-connectivity circular fingerprint.
///
/// Atom invariants are (atomic number, heavy degree, formal charge, hydrogen
/// count, aromatic flag, ring flag). Each iteration rehashes (iteration,
/// own id, sorted (bond order, neighbor id) pairs). Every identifier from
/// every iteration sets bit id mod n_bits. n_bits must be a power of two.
Fingerprint ecfp(const Molecule& mol, int radius = kDefaultEcfpRadius, std::size_t n_bits = kDefaultEcfpBits);

/// |a & b| / |a | b|, or 1.0 when both are empty.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

/// Wraps an externally computed 0/1 row. Only maccs, avalon and rdkit may be imported.
Fingerprint import_fingerprint(std::span<const std::uint8_t> bits, FingerprintKind kind, std::size_t n_bits);

/// Reads the import CSV (`compound_id,kind,n_bits,bits`, bits as hex).
/// Keys are compound ids.
std::map<std::string, Fingerprint> read_fingerprint_csv(const std::filesystem::path& path);

}  // namespace eoprop::chem
