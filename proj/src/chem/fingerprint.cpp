#include "eoprop/chem/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "eoprop/csv.hpp"

namespace eoprop::chem {

const char* to_string(FingerprintKind kind) {
    switch (kind) {
        case FingerprintKind::ecfp: return "ecfp";
        case FingerprintKind::maccs: return "maccs";
        case FingerprintKind::avalon: return "avalon";
        case FingerprintKind::rdkit: return "rdkit";
    }
    return "unknown";
}

FingerprintKind parse_fingerprint_kind(std::string_view name) {
    if (name == "ecfp") return FingerprintKind::ecfp;
    if (name == "maccs") return FingerprintKind::maccs;
    if (name == "avalon") return FingerprintKind::avalon;
    if (name == "rdkit") return FingerprintKind::rdkit;
    throw FingerprintError(FingerprintErrorKind::UnknownKind, "unknown fingerprint kind '" + std::string(name) + "'");
}

namespace {

const char* kind_name(FingerprintErrorKind kind) {
    switch (kind) {
        case FingerprintErrorKind::WidthMismatch: return "WidthMismatch";
        case FingerprintErrorKind::LengthMismatch: return "LengthMismatch";
        case FingerprintErrorKind::UnknownKind: return "UnknownKind";
        case FingerprintErrorKind::InvalidWidth: return "InvalidWidth";
        case FingerprintErrorKind::BadHex: return "BadHex";
    }
    return "FingerprintError";
}

std::uint64_t splitmix_finalize(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t bond_code(BondOrder order) { return static_cast<std::uint64_t>(order); }

}  // namespace

FingerprintError::FingerprintError(FingerprintErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail), kind_(kind) {}

Fingerprint::Fingerprint(std::size_t n_bits, FingerprintKind kind, std::optional<int> radius)
    : n_bits_(n_bits), kind_(kind), radius_(radius), words_((n_bits + 63) / 64, 0) {
    if (n_bits == 0) throw FingerprintError(FingerprintErrorKind::InvalidWidth, "n_bits must be positive");
}

std::size_t Fingerprint::popcount() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::vector<std::size_t> Fingerprint::on_bits() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_bits_; ++i)
        if (test(i)) out.push_back(i);
    return out;
}

std::string Fingerprint::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t n_digits = (n_bits_ + 3) / 4;
    std::string hex(n_digits, '0');
    for (std::size_t d = 0; d < n_digits; ++d) {
        unsigned nibble = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            const std::size_t bit = d * 4 + k;
            if (bit < n_bits_ && test(bit)) nibble |= 8U >> k;
        }
        hex[d] = kDigits[nibble];
    }
    return hex;
}

Fingerprint Fingerprint::from_hex(std::string_view hex, std::size_t n_bits, FingerprintKind kind) {
    Fingerprint fp(n_bits, kind);
    const std::size_t n_digits = (n_bits + 3) / 4;
    if (hex.size() != n_digits) {
        throw FingerprintError(FingerprintErrorKind::LengthMismatch, "expected " + std::to_string(n_digits) +
                                                                         " hex digits for " + std::to_string(n_bits) +
                                                                         " bits, got " + std::to_string(hex.size()));
    }
    for (std::size_t d = 0; d < n_digits; ++d) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[d])));
        unsigned nibble;
        if (c >= '0' && c <= '9') nibble = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f') nibble = static_cast<unsigned>(c - 'a' + 10);
        else throw FingerprintError(FingerprintErrorKind::BadHex, std::string("invalid hex digit '") + hex[d] + "'");
        for (std::size_t k = 0; k < 4; ++k) {
            if (!(nibble & (8U >> k))) continue;
            const std::size_t bit = d * 4 + k;
            if (bit >= n_bits) {
                throw FingerprintError(FingerprintErrorKind::LengthMismatch, "padding bit " + std::to_string(bit) +
                                                                                 " set beyond width " +
                                                                                 std::to_string(n_bits));
            }
            fp.set(bit);
        }
    }
    return fp;
}

std::uint64_t ecfp_hash(std::span<const std::uint64_t> words) {
    std::uint64_t h = kEcfpHashSeed;
    for (std::uint64_t w : words) h = splitmix_finalize(h ^ (w + 0x9E3779B97F4A7C15ULL));
    return h;
}

std::vector<std::vector<std::uint64_t>> ecfp_identifiers(const Molecule& mol, int radius) {
    if (radius < 0) throw std::invalid_argument("ecfp radius must be >= 0");
    const std::size_t n = mol.atoms.size();
    const auto adj = mol.adjacency();
    const auto in_ring = mol.ring_atoms();

    std::vector<std::vector<std::uint64_t>> ids;
    std::vector<std::uint64_t> current(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Atom& a = mol.atoms[i];
        const std::uint64_t words[] = {
            static_cast<std::uint64_t>(atomic_number(a.element)),
            static_cast<std::uint64_t>(adj[i].size()),
            static_cast<std::uint64_t>(static_cast<std::int64_t>(a.charge)),
            static_cast<std::uint64_t>(a.hydrogens),
            a.aromatic ? 1U : 0U,
            in_ring[i] ? 1U : 0U,
        };
        current[i] = ecfp_hash(words);
    }
    ids.push_back(current);

    for (int r = 1; r <= radius; ++r) {
        std::vector<std::uint64_t> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
            for (auto [nbr, bond] : adj[i]) env.emplace_back(bond_code(mol.bonds[bond].order), current[nbr]);
            std::sort(env.begin(), env.end());
            std::vector<std::uint64_t> words{static_cast<std::uint64_t>(r), current[i]};
            for (auto [code, id] : env) {
                words.push_back(code);
                words.push_back(id);
            }
            next[i] = ecfp_hash(words);
        }
        current = std::move(next);
        ids.push_back(current);
    }
    return ids;
}

Fingerprint ecfp(const Molecule& mol, int radius, std::size_t n_bits) {
    if (n_bits == 0 || !std::has_single_bit(n_bits)) {
        throw FingerprintError(FingerprintErrorKind::InvalidWidth, "ECFP width must be a power of two, got " +
                                                                       std::to_string(n_bits));
    }
    Fingerprint fp(n_bits, FingerprintKind::ecfp, radius);
    for (const auto& layer : ecfp_identifiers(mol, radius))
        for (std::uint64_t id : layer) fp.set(static_cast<std::size_t>(id % n_bits));
    return fp;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
    if (a.n_bits() != b.n_bits()) {
        throw FingerprintError(FingerprintErrorKind::WidthMismatch,
                               std::to_string(a.n_bits()) + " vs " + std::to_string(b.n_bits()) + " bits");
    }
    std::size_t both = 0, either = 0;
    auto wa = a.words();
    auto wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        both += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
        either += static_cast<std::size_t>(std::popcount(wa[i] | wb[i]));
    }
    if (either == 0) return 1.0;
    return static_cast<double>(both) / static_cast<double>(either);
}

Fingerprint import_fingerprint(std::span<const std::uint8_t> bits, FingerprintKind kind, std::size_t n_bits) {
    if (kind == FingerprintKind::ecfp) {
        throw FingerprintError(FingerprintErrorKind::UnknownKind, "ecfp is computed natively and cannot be imported");
    }
    if (bits.size() != n_bits) {
        throw FingerprintError(FingerprintErrorKind::LengthMismatch, "row has " + std::to_string(bits.size()) +
                                                                         " entries, declared n_bits=" +
                                                                         std::to_string(n_bits));
    }
    Fingerprint fp(n_bits, kind);
    for (std::size_t i = 0; i < n_bits; ++i) {
        if (bits[i] > 1) throw FingerprintError(FingerprintErrorKind::BadHex, "bit values must be 0 or 1");
        if (bits[i]) fp.set(i);
    }
    return fp;
}

std::map<std::string, Fingerprint> read_fingerprint_csv(const std::filesystem::path& path) {
    const auto table = io::CsvTable::read(path);
    const auto c_id = table.require_column("compound_id");
    const auto c_kind = table.require_column("kind");
    const auto c_bits = table.require_column("n_bits");
    const auto c_hex = table.require_column("bits");

    std::map<std::string, Fingerprint> out;
    for (const auto& row : table.rows()) {
        try {
            const auto kind = parse_fingerprint_kind(table.field(row, c_kind));
            if (kind == FingerprintKind::ecfp) {
                throw FingerprintError(FingerprintErrorKind::UnknownKind, "ecfp cannot be imported");
            }
            const std::string width_text = table.field(row, c_bits);
            std::size_t consumed = 0;
            const unsigned long width = std::stoul(width_text, &consumed);
            if (consumed != width_text.size() || width == 0) throw std::invalid_argument("n_bits");
            auto fp = Fingerprint::from_hex(table.field(row, c_hex), width, kind);
            out.insert_or_assign(table.field(row, c_id), std::move(fp));
        } catch (const FingerprintError& e) {
            throw io::InputError(kind_name(e.kind()), path, row.line, e.what());
        } catch (const std::logic_error&) {
            throw io::InputError("InvalidWidth", path, row.line, "n_bits must be a positive integer");
        }
    }
    return out;
}

}  // namespace eoprop::chem
