#include "eoprop/chem/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <vector>

namespace eoprop::chem {

const char* to_string(SmilesErrorKind kind) {
    switch (kind) {
        case SmilesErrorKind::EmptyInput: return "EmptyInput";
        case SmilesErrorKind::UnbalancedParenthesis: return "UnbalancedParenthesis";
        case SmilesErrorKind::UnpairedRingBond: return "UnpairedRingBond";
        case SmilesErrorKind::UnknownAtomSymbol: return "UnknownAtomSymbol";
        case SmilesErrorKind::UnexpectedCharacter: return "UnexpectedCharacter";
        case SmilesErrorKind::DanglingBond: return "DanglingBond";
        case SmilesErrorKind::InvalidBond: return "InvalidBond";
    }
    return "Unknown";
}

SmilesError::SmilesError(SmilesErrorKind kind, std::size_t offset, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " at offset " + std::to_string(offset) + ": " + detail),
      kind_(kind),
      offset_(offset) {}

namespace {

struct OrganicValence {
    std::string_view element;
    std::array<int, 3> valences;  // ascending, 0 = unused
};

constexpr std::array<OrganicValence, 10> kOrganic{{
    {"B", {3, 0, 0}},
    {"C", {4, 0, 0}},
    {"N", {3, 5, 0}},
    {"O", {2, 0, 0}},
    {"P", {3, 5, 0}},
    {"S", {2, 4, 6}},
    {"F", {1, 0, 0}},
    {"Cl", {1, 0, 0}},
    {"Br", {1, 0, 0}},
    {"I", {1, 0, 0}},
}};

const OrganicValence* organic(std::string_view element) {
    for (const auto& o : kOrganic)
        if (o.element == element) return &o;
    return nullptr;
}

bool is_aromatic_symbol(std::string_view s) {
    return s == "b" || s == "c" || s == "n" || s == "o" || s == "p" || s == "s" || s == "se" || s == "as";
}

std::string upcase_first(std::string_view s) {
    std::string out(s);
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

struct RingOpen {
    std::size_t atom;
    std::optional<BondOrder> order;
    std::size_t offset;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Molecule run() {
        if (text_.empty()) throw SmilesError(SmilesErrorKind::EmptyInput, 0, "empty SMILES");
        while (pos_ < text_.size()) step();
        if (pending_) throw SmilesError(SmilesErrorKind::DanglingBond, pending_offset_, "bond without a second atom");
        if (!branches_.empty()) {
            throw SmilesError(SmilesErrorKind::UnbalancedParenthesis, branches_.back().second, "unclosed branch");
        }
        if (!rings_.empty()) {
            const auto& [label, open] = *rings_.begin();
            throw SmilesError(SmilesErrorKind::UnpairedRingBond, open.offset,
                              "ring bond " + std::to_string(label) + " never closed");
        }
        assign_implicit_hydrogens();
        return std::move(mol_);
    }

private:
    void step() {
        const char ch = text_[pos_];
        if (static_cast<unsigned char>(ch) >= 0x80) unexpected("non-ASCII byte");
        switch (ch) {
            case '-': set_bond(BondOrder::single); return;
            case '=': set_bond(BondOrder::double_); return;
            case '#': set_bond(BondOrder::triple); return;
            case ':': set_bond(BondOrder::aromatic); return;
            case '/':
            case '\\':
                // Directional single bond; stereo is discarded.
                if (pending_) unexpected("two consecutive bond symbols");
                ++pos_;
                return;
            case '(':
                if (!prev_ || pending_) unexpected("branch must follow an atom");
                branches_.emplace_back(*prev_, pos_);
                ++pos_;
                return;
            case ')':
                if (branches_.empty()) {
                    throw SmilesError(SmilesErrorKind::UnbalancedParenthesis, pos_, "')' without matching '('");
                }
                if (pending_) throw SmilesError(SmilesErrorKind::DanglingBond, pending_offset_, "bond before ')'");
                prev_ = branches_.back().first;
                branches_.pop_back();
                ++pos_;
                return;
            case '.':
                if (pending_) throw SmilesError(SmilesErrorKind::DanglingBond, pending_offset_, "bond before '.'");
                prev_.reset();
                ++pos_;
                return;
            case '%': {
                const std::size_t start = pos_;
                if (pos_ + 2 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
                    !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
                    unexpected("'%' must be followed by two digits");
                }
                const int label = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
                pos_ += 3;
                ring_bond(label, start);
                return;
            }
            case '[': bracket_atom(); return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            ring_bond(ch - '0', pos_);
            ++pos_;
            return;
        }
        organic_atom();
    }

    [[noreturn]] void unexpected(const std::string& detail) {
        throw SmilesError(SmilesErrorKind::UnexpectedCharacter, pos_, detail);
    }

    void set_bond(BondOrder order) {
        if (pending_) unexpected("two consecutive bond symbols");
        if (!prev_) unexpected("bond symbol must follow an atom");
        pending_ = order;
        pending_offset_ = pos_;
        ++pos_;
    }

    void organic_atom() {
        const std::size_t start = pos_;
        std::string_view two = text_.substr(pos_, 2);
        std::string symbol;
        if (two == "Cl" || two == "Br") {
            symbol = std::string(two);
            pos_ += 2;
        } else {
            const char ch = text_[pos_];
            const std::string one(1, ch);
            if (organic(one) == nullptr && !(is_aromatic_symbol(one) && one != "se" && one != "as")) {
                if (std::isalpha(static_cast<unsigned char>(ch))) {
                    throw SmilesError(SmilesErrorKind::UnknownAtomSymbol, start,
                                      "'" + one + "' is not in the organic subset; use a bracket atom");
                }
                unexpected(std::string("unexpected character '") + ch + "'");
            }
            symbol = one;
            ++pos_;
        }
        Atom atom;
        atom.aromatic = std::islower(static_cast<unsigned char>(symbol[0])) != 0;
        atom.element = atom.aromatic ? upcase_first(symbol) : symbol;
        add_atom(std::move(atom), /*bracket=*/false);
    }

    void bracket_atom() {
        const std::size_t open = pos_;
        const std::size_t close = text_.find(']', pos_);
        if (close == std::string_view::npos) unexpected("unterminated bracket atom");
        ++pos_;
        Atom atom;
        if (std::isdigit(static_cast<unsigned char>(text_[pos_]))) atom.isotope = read_int();

        const std::size_t sym_start = pos_;
        std::string symbol;
        if (pos_ < close && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            const std::string_view two = text_.substr(pos_, std::min<std::size_t>(2, close - pos_));
            if (two.size() == 2 && (is_aromatic_symbol(two) ||
                                    (std::isupper(static_cast<unsigned char>(two[0])) &&
                                     std::islower(static_cast<unsigned char>(two[1])) && atomic_number(std::string(two)) > 0))) {
                symbol = std::string(two);
            } else {
                symbol = std::string(1, text_[pos_]);
            }
        } else if (pos_ < close && text_[pos_] == '*') {
            symbol = "*";
        }
        if (symbol.empty()) throw SmilesError(SmilesErrorKind::UnknownAtomSymbol, sym_start, "missing element in bracket atom");
        atom.aromatic = std::islower(static_cast<unsigned char>(symbol[0])) != 0;
        if (atom.aromatic && !is_aromatic_symbol(symbol)) {
            throw SmilesError(SmilesErrorKind::UnknownAtomSymbol, sym_start, "unknown aromatic symbol '" + symbol + "'");
        }
        atom.element = atom.aromatic ? upcase_first(symbol) : symbol;
        if (atom.element != "*" && atomic_number(atom.element) == 0) {
            throw SmilesError(SmilesErrorKind::UnknownAtomSymbol, sym_start, "unknown element '" + symbol + "'");
        }
        pos_ += symbol.size();

        // Chirality: @, @@, or @TH1-style classes. Discarded.
        if (pos_ < close && text_[pos_] == '@') {
            while (pos_ < close && text_[pos_] == '@') ++pos_;
            static constexpr std::array<std::string_view, 5> kClasses{"TH", "AL", "SP", "TB", "OH"};
            const std::string_view rest = text_.substr(pos_, close - pos_);
            for (auto cls : kClasses) {
                if (rest.starts_with(cls)) {
                    pos_ += cls.size();
                    read_int();
                    break;
                }
            }
        }

        if (pos_ < close && text_[pos_] == 'H') {
            ++pos_;
            atom.hydrogens = (pos_ < close && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ? read_int() : 1;
        }
        if (pos_ < close && (text_[pos_] == '+' || text_[pos_] == '-')) {
            const char sign = text_[pos_];
            int magnitude = 1;
            ++pos_;
            if (pos_ < close && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                magnitude = read_int();
            } else {
                while (pos_ < close && text_[pos_] == sign) {
                    ++magnitude;
                    ++pos_;
                }
            }
            atom.charge = sign == '+' ? magnitude : -magnitude;
        }
        if (pos_ < close && text_[pos_] == ':') {
            ++pos_;
            if (pos_ >= close || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) unexpected("atom class needs digits");
            read_int();
        }
        if (pos_ != close) unexpected("unexpected character in bracket atom starting at " + std::to_string(open));
        pos_ = close + 1;
        add_atom(std::move(atom), /*bracket=*/true);
    }

    int read_int() {
        int v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            ++pos_;
        }
        return v;
    }

    void add_atom(Atom atom, bool bracket) {
        const std::size_t idx = mol_.atoms.size();
        mol_.atoms.push_back(std::move(atom));
        bracket_.push_back(bracket);
        if (prev_) connect(*prev_, idx, pending_, pending_offset_);
        else if (pending_) throw SmilesError(SmilesErrorKind::DanglingBond, pending_offset_, "bond without a first atom");
        pending_.reset();
        prev_ = idx;
    }

    void ring_bond(int label, std::size_t offset) {
        if (!prev_) throw SmilesError(SmilesErrorKind::UnexpectedCharacter, offset, "ring bond must follow an atom");
        auto it = rings_.find(label);
        if (it == rings_.end()) {
            rings_.emplace(label, RingOpen{*prev_, pending_, offset});
            pending_.reset();
            return;
        }
        const RingOpen open = it->second;
        rings_.erase(it);
        std::optional<BondOrder> order = open.order;
        if (pending_) {
            if (order && *order != *pending_) {
                throw SmilesError(SmilesErrorKind::InvalidBond, offset, "conflicting ring-closure bond orders");
            }
            order = pending_;
        }
        pending_.reset();
        connect(open.atom, *prev_, order, offset);
    }

    void connect(std::size_t a, std::size_t b, std::optional<BondOrder> order, std::size_t offset) {
        if (a == b) throw SmilesError(SmilesErrorKind::InvalidBond, offset, "atom bonded to itself");
        for (const auto& bond : mol_.bonds) {
            if ((bond.begin == a && bond.end == b) || (bond.begin == b && bond.end == a)) {
                throw SmilesError(SmilesErrorKind::InvalidBond, offset, "duplicate bond");
            }
        }
        BondOrder resolved = BondOrder::single;
        if (order) resolved = *order;
        else if (mol_.atoms[a].aromatic && mol_.atoms[b].aromatic) resolved = BondOrder::aromatic;
        mol_.bonds.push_back({a, b, resolved});
    }

    void assign_implicit_hydrogens() {
        std::vector<int> bond_sum(mol_.atoms.size(), 0);
        for (const auto& b : mol_.bonds) {
            const int v = b.order == BondOrder::aromatic ? 1 : static_cast<int>(b.order);
            bond_sum[b.begin] += v;
            bond_sum[b.end] += v;
        }
        for (std::size_t i = 0; i < mol_.atoms.size(); ++i) {
            if (bracket_[i]) continue;
            Atom& atom = mol_.atoms[i];
            const OrganicValence* ov = organic(atom.element);
            if (ov == nullptr) continue;
            if (atom.aromatic) {
                // One valence unit is taken by the delocalized pi system.
                atom.hydrogens = std::max(0, ov->valences[0] - bond_sum[i] - 1);
                continue;
            }
            atom.hydrogens = 0;
            for (int valence : ov->valences) {
                if (valence != 0 && valence >= bond_sum[i]) {
                    atom.hydrogens = valence - bond_sum[i];
                    break;
                }
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Molecule mol_;
    std::vector<bool> bracket_;
    std::optional<std::size_t> prev_;
    std::optional<BondOrder> pending_;
    std::size_t pending_offset_ = 0;
    std::vector<std::pair<std::size_t, std::size_t>> branches_;  // (atom, offset of '(')
    std::map<int, RingOpen> rings_;
};

}  // namespace

Molecule parse_smiles(std::string_view text) { return Parser(text).run(); }

}  // namespace eoprop::chem
