#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <set>

#include "eoprop/chem/fingerprint.hpp"
#include "eoprop/chem/smiles.hpp"
#include "eoprop/csv.hpp"
#include "support/oracles.hpp"

using namespace eoprop::chem;
using eoprop::autodiff::Rng;

namespace {

SmilesErrorKind parse_error(std::string_view text, std::size_t* offset = nullptr) {
    try {
        parse_smiles(text);
    } catch (const SmilesError& e) {
        if (offset) *offset = e.offset();
        return e.kind();
    }
    FAIL("expected a SmilesError for " << text);
    return SmilesErrorKind::EmptyInput;
}

Fingerprint bits_of(std::size_t n_bits, std::initializer_list<std::size_t> on) {
    Fingerprint fp(n_bits, FingerprintKind::maccs);
    for (auto b : on) fp.set(b);
    return fp;
}

const std::vector<std::string> kMolecules = {
    "CCO",
    "CC(C)=CCCC(C)(O)C=C",
    "CC1=CCC(CC1)C(C)=C",
    "CC1=CCC2CC1C2(C)C",
    "CC12CCC(CC1)C(C)(C)O2",
    "CC1(C)C2CCC1(C)C(=O)C2",
    "Cc1ccc(C(C)C)c(O)c1",
    "COc1cc(CC=C)ccc1O",
    "O=C(OCc1ccccc1)c1ccccc1",
    "C/C1=C/CCC(=C)[C@@H]2CC(C)(C)[C@H]2CC1",
    "c1ccc2ccccc2c1",
    "[NH4+].[Cl-]",
    "C#N",
    "c1cc[nH]c1",
};

}  // namespace

TEST_CASE("parse_smiles reads ethanol") {
    const auto m = parse_smiles("CCO");
    REQUIRE(m.atoms.size() == 3);
    CHECK(m.atoms[0].element == "C");
    CHECK(m.atoms[2].element == "O");
    REQUIRE(m.bonds.size() == 2);
    for (const auto& b : m.bonds) CHECK(b.order == BondOrder::single);
    CHECK(m.atoms[0].hydrogens == 3);
    CHECK(m.atoms[1].hydrogens == 2);
    CHECK(m.atoms[2].hydrogens == 1);
}

TEST_CASE("ring closure adds the closing bond") {
    const auto m = parse_smiles("C1CC1");
    REQUIRE(m.atoms.size() == 3);
    REQUIRE(m.bonds.size() == 3);
    const bool closes = std::any_of(m.bonds.begin(), m.bonds.end(), [](const Bond& b) {
        return (b.begin == 0 && b.end == 2) || (b.begin == 2 && b.end == 0);
    });
    CHECK(closes);
    CHECK(m.ring_atoms() == std::vector<bool>{true, true, true});
}

TEST_CASE("benzene is six aromatic carbons with aromatic bonds") {
    const auto m = parse_smiles("c1ccccc1");
    REQUIRE(m.atoms.size() == 6);
    REQUIRE(m.bonds.size() == 6);
    for (const auto& a : m.atoms) {
        CHECK(a.aromatic);
        CHECK(a.hydrogens == 1);
    }
    for (const auto& b : m.bonds) CHECK(b.order == BondOrder::aromatic);
}

TEST_CASE("parse errors carry kind and byte offset") {
    std::size_t offset = 0;
    CHECK(parse_error("C1CC", &offset) == SmilesErrorKind::UnpairedRingBond);
    CHECK(offset == 1);
    CHECK(parse_error("") == SmilesErrorKind::EmptyInput);
    CHECK(parse_error("CC(C") == SmilesErrorKind::UnbalancedParenthesis);
    CHECK(parse_error("CC)C", &offset) == SmilesErrorKind::UnbalancedParenthesis);
    CHECK(offset == 2);
    CHECK(parse_error("CXC", &offset) == SmilesErrorKind::UnknownAtomSymbol);
    CHECK(offset == 1);
    CHECK(parse_error("C[Xx]") == SmilesErrorKind::UnknownAtomSymbol);
    CHECK(parse_error("CC=") == SmilesErrorKind::DanglingBond);
    CHECK(parse_error("C11") == SmilesErrorKind::InvalidBond);
}

TEST_CASE("bracket atoms keep isotope, charge and hydrogens; stereo is dropped") {
    const auto m = parse_smiles("[13CH3][C@@H](N)[O-]");
    REQUIRE(m.atoms.size() == 4);
    CHECK(m.atoms[0].isotope == 13);
    CHECK(m.atoms[0].hydrogens == 3);
    CHECK(m.atoms[1].hydrogens == 1);
    CHECK(m.atoms[3].charge == -1);
    CHECK(m.atoms[3].hydrogens == 0);
    CHECK(parse_smiles("[Fe+++]").atoms[0].charge == 3);
    CHECK(parse_smiles("[NH4+:1]").atoms[0].hydrogens == 4);
    CHECK(adjacency_listing(parse_smiles("F/C=C/F")) == adjacency_listing(parse_smiles("FC=CF")));
    CHECK(adjacency_listing(parse_smiles("N[C@H](C)C(=O)O")) == adjacency_listing(parse_smiles("NC(C)C(=O)O")));
}

TEST_CASE("two-digit ring closures and bond orders") {
    const auto m = parse_smiles("C%12CC%12");
    CHECK(m.bonds.size() == 3);
    const auto n = parse_smiles("C#N");
    CHECK(n.bonds[0].order == BondOrder::triple);
    CHECK(n.atoms[0].hydrogens == 1);
    CHECK(parse_smiles("C=1CC1").bonds.back().order == BondOrder::double_);
}

TEST_CASE("adjacency listing is stable across parses") {
    for (const auto& s : kMolecules) CHECK(adjacency_listing(parse_smiles(s)) == adjacency_listing(parse_smiles(s)));
}

TEST_CASE("ECFP of CCO at radius 1 matches the frozen golden file") {
    std::ifstream in(EOPROP_GOLDEN_DIR "/ecfp_cco_r1_2048.txt");
    REQUIRE(in);
    std::vector<std::size_t> expected;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') expected.push_back(std::stoul(line));
    REQUIRE(expected.size() == 6);
    const auto fp = ecfp(parse_smiles("CCO"), 1, 2048);
    CHECK(fp.on_bits() == expected);
    CHECK(fp.kind() == FingerprintKind::ecfp);
    CHECK(fp.radius() == 1);
}

TEST_CASE("ECFP is invariant to the SMILES traversal start") {
    Rng rng(2024);
    for (const auto& s : kMolecules) {
        const auto mol = parse_smiles(s);
        const auto reference = ecfp(mol, 2, 2048);
        for (int trial = 0; trial < 8; ++trial) {
            const std::size_t start = rng.below(mol.atoms.size());
            const std::string rewritten = oracle::write_smiles(mol, start, rng);
            if (s.find('.') != std::string::npos) continue;  // one component per walk
            INFO(s << " rewritten as " << rewritten);
            CHECK(ecfp(parse_smiles(rewritten), 2, 2048) == reference);
        }
    }
}

TEST_CASE("ECFP bits at radius r are a subset of bits at radius r+1") {
    for (const auto& s : kMolecules) {
        const auto mol = parse_smiles(s);
        for (int r = 0; r < 4; ++r) {
            const auto lo = ecfp(mol, r, 1024);
            const auto hi = ecfp(mol, r + 1, 1024);
            for (auto b : lo.on_bits()) CHECK(hi.test(b));
        }
    }
}

TEST_CASE("ECFP rejects widths that are not powers of two") {
    CHECK_THROWS_AS(ecfp(parse_smiles("CC"), 2, 1000), FingerprintError);
    CHECK(ecfp(parse_smiles("CC")).n_bits() == kDefaultEcfpBits);
    CHECK(ecfp(parse_smiles("CC")).radius() == kDefaultEcfpRadius);
}

TEST_CASE("tanimoto examples") {
    const auto x = bits_of(16, {1, 5, 9});
    CHECK(tanimoto(x, x) == 1.0);
    CHECK(tanimoto(bits_of(16, {1, 2, 3}), bits_of(16, {2, 3, 4})) == 0.5);
    CHECK(tanimoto(bits_of(16, {}), bits_of(16, {7})) == 0.0);
    CHECK(tanimoto(bits_of(16, {}), bits_of(16, {})) == 1.0);
    try {
        tanimoto(bits_of(16, {}), bits_of(32, {}));
        FAIL("expected WidthMismatch");
    } catch (const FingerprintError& e) {
        CHECK(e.kind() == FingerprintErrorKind::WidthMismatch);
    }
}

TEST_CASE("tanimoto is symmetric and bounded on random pairs") {
    Rng rng(99);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 1 + rng.below(300);
        Fingerprint a(n, FingerprintKind::rdkit), b(n, FingerprintKind::rdkit);
        const double pa = rng.uniform(), pb = rng.uniform();
        for (std::size_t i = 0; i < n; ++i) {
            if (rng.uniform() < pa) a.set(i);
            if (rng.uniform() < pb) b.set(i);
        }
        const double ab = tanimoto(a, b);
        CHECK(ab == tanimoto(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(tanimoto(a, a) == 1.0);
    }
}

TEST_CASE("import_fingerprint") {
    std::vector<std::uint8_t> row(167, 0);
    row[0] = row[166] = 1;
    const auto fp = import_fingerprint(row, FingerprintKind::maccs, 167);
    CHECK(fp.n_bits() == 167);
    CHECK(fp.popcount() == 2);
    CHECK(import_fingerprint(std::vector<std::uint8_t>(167, 0), FingerprintKind::maccs, 167).popcount() == 0);
    try {
        import_fingerprint(std::vector<std::uint8_t>(166, 0), FingerprintKind::maccs, 167);
        FAIL("expected LengthMismatch");
    } catch (const FingerprintError& e) {
        CHECK(e.kind() == FingerprintErrorKind::LengthMismatch);
    }
    CHECK_THROWS_AS(import_fingerprint(row, FingerprintKind::ecfp, 167), FingerprintError);
    CHECK_THROWS_AS(parse_fingerprint_kind("morgan"), FingerprintError);
}

TEST_CASE("hex encoding puts bit 0 in the most significant bit of the first digit") {
    const auto fp = Fingerprint::from_hex("8001", 16, FingerprintKind::avalon);
    CHECK(fp.on_bits() == std::vector<std::size_t>{0, 15});
    CHECK(fp.to_hex() == "8001");
    CHECK(Fingerprint::from_hex("4", 3, FingerprintKind::maccs).on_bits() == std::vector<std::size_t>{1});
    CHECK_THROWS_AS(Fingerprint::from_hex("1", 3, FingerprintKind::maccs), FingerprintError);  // padding bit
    CHECK_THROWS_AS(Fingerprint::from_hex("80", 16, FingerprintKind::maccs), FingerprintError);
    CHECK_THROWS_AS(Fingerprint::from_hex("zz", 8, FingerprintKind::maccs), FingerprintError);
}

TEST_CASE("fingerprint import CSV reports the failing line") {
    const auto dir = std::filesystem::temp_directory_path() / "eoprop_chem_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "ok.csv");
        out << "compound_id,kind,n_bits,bits\nlinalool,maccs,8,81\ncamphor,maccs,8,00\n";
    }
    const auto fps = read_fingerprint_csv(dir / "ok.csv");
    CHECK(fps.size() == 2);
    CHECK(fps.at("linalool").on_bits() == std::vector<std::size_t>{0, 7});
    {
        std::ofstream out(dir / "bad.csv");
        out << "compound_id,kind,n_bits,bits\nlinalool,maccs,8,81\ncamphor,maccs,8,000\n";
    }
    try {
        read_fingerprint_csv(dir / "bad.csv");
        FAIL("expected InputError");
    } catch (const eoprop::io::InputError& e) {
        CHECK(e.line() == 3);
        CHECK(e.kind() == "LengthMismatch");
    }
    {
        std::ofstream out(dir / "kind.csv");
        out << "compound_id,kind,n_bits,bits\nlinalool,morgan,8,81\n";
    }
    try {
        read_fingerprint_csv(dir / "kind.csv");
        FAIL("expected InputError");
    } catch (const eoprop::io::InputError& e) {
        CHECK(e.kind() == "UnknownKind");
    }
}
