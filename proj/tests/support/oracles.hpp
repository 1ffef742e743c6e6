#pragma once

// Brute-force reference implementations and fixture builders shared by the
// unit and acceptance tests. None of these call into the code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "eoprop/autodiff/random.hpp"
#include "eoprop/autodiff/tensor.hpp"
#include "eoprop/chem/molecule.hpp"
#include "eoprop/dataset/dataset.hpp"

namespace oracle {

using eoprop::autodiff::Rng;
using eoprop::autodiff::Tensor;

inline Tensor random_tensor(std::size_t rows, std::size_t cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Tensor t(rows, cols);
    for (auto& v : t.values()) v = rng.uniform(lo, hi);
    return t;
}

/// Pairwise win count: (wins + ties/2) / (P*N).
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0, ties = 0.0, pos = 0.0, neg = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) (labels[i] ? pos : neg) += 1.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) ties += 1.0;
        }
    }
    return (wins + ties / 2.0) / (pos * neg);
}

/// ROC by enumerating every distinct threshold t (score >= t is positive),
/// plus the "nothing positive" point.
inline std::vector<std::pair<double, double>> threshold_roc(const std::vector<double>& scores,
                                                            const std::vector<int>& labels) {
    std::vector<double> thresholds = scores;
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    double pos = 0, neg = 0;
    for (int y : labels) (y ? pos : neg) += 1;
    std::vector<std::pair<double, double>> out{{0.0, 0.0}};
    for (double t : thresholds) {
        double tp = 0, fp = 0;
        for (std::size_t i = 0; i < scores.size(); ++i)
            if (scores[i] >= t) (labels[i] ? tp : fp) += 1;
        out.emplace_back(fp / neg, tp / pos);
    }
    return out;
}

inline Tensor loop_normalize(const Tensor& w) {
    const std::size_t n = w.rows();
    Tensor out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double di = 0, dj = 0;
            for (std::size_t k = 0; k < n; ++k) {
                di += w(i, k);
                dj += w(j, k);
            }
            out(i, j) = w(i, j) / (std::sqrt(di) * std::sqrt(dj));
        }
    return out;
}

/// out[i][f'] = act(sum_j A[i][j] sum_f H[j][f] W[f][f'])
inline Tensor loop_gcn(const Tensor& a, const Tensor& h, const Tensor& w, bool relu) {
    Tensor out(h.rows(), w.cols());
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t o = 0; o < w.cols(); ++o) {
            double s = 0;
            for (std::size_t j = 0; j < h.rows(); ++j)
                for (std::size_t f = 0; f < h.cols(); ++f) s += a(i, j) * h(j, f) * w(f, o);
            out(i, o) = relu ? std::max(0.0, s) : s;
        }
    return out;
}

/// One attention head:
///   z = H W
///   e_ij = leaky(a_src . z_i + a_dst . z_j) + edge_scale * S_ij
///   alpha_ij = exp(e_ij) / sum_k exp(e_ik)
///   out_i = sum_j alpha_ij z_j
inline Tensor loop_gat_head(const Tensor& h, const Tensor& s, const Tensor& w, const Tensor& a_src,
                            const Tensor& a_dst, double edge_scale, double slope, Tensor* alpha_out = nullptr) {
    const std::size_t n = h.rows(), fo = w.cols();
    Tensor z(n, fo);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t o = 0; o < fo; ++o)
            for (std::size_t f = 0; f < h.cols(); ++f) z(i, o) += h(i, f) * w(f, o);
    Tensor alpha(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> e(n);
        for (std::size_t j = 0; j < n; ++j) {
            double raw = 0;
            for (std::size_t o = 0; o < fo; ++o) raw += a_src[o] * z(i, o) + a_dst[o] * z(j, o);
            e[j] = (raw > 0 ? raw : slope * raw) + edge_scale * s(i, j);
        }
        double denom = 0;
        for (double v : e) denom += std::exp(v);
        for (std::size_t j = 0; j < n; ++j) alpha(i, j) = std::exp(e[j]) / denom;
    }
    Tensor out(n, fo);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t o = 0; o < fo; ++o) out(i, o) += alpha(i, j) * z(j, o);
    if (alpha_out) *alpha_out = alpha;
    return out;
}

/// Random symmetric positive weights with unit diagonal, like a Tanimoto matrix.
inline Tensor random_similarity(std::size_t n, Rng& rng) {
    Tensor s(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        s(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) s(i, j) = s(j, i) = rng.uniform(0.0, 1.0);
    }
    return s;
}

/// Writes `mol` as SMILES starting the depth-first walk at `start`, visiting
/// neighbours in an order drawn from `rng`. Every atom is bracketed with its
/// hydrogen count so the reparse does not depend on valence rules.
inline std::string write_smiles(const eoprop::chem::Molecule& mol, std::size_t start, Rng& rng) {
    using eoprop::chem::BondOrder;
    const auto adj = mol.adjacency();
    const std::size_t n = mol.atoms.size();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = adj[i];
        for (std::size_t k = order[i].size(); k > 1; --k) std::swap(order[i][k - 1], order[i][rng.below(k)]);
    }
    // Pass 1: DFS tree and ring-closure (non-tree) bonds.
    std::vector<int> visit(n, -1);
    std::vector<bool> tree_bond(mol.bonds.size(), false);
    std::vector<std::vector<std::size_t>> children(n);
    int counter = 0;
    std::function<void(std::size_t)> dfs = [&](std::size_t a) {
        visit[a] = counter++;
        for (auto [nb, bond] : order[a]) {
            if (visit[nb] >= 0) continue;
            tree_bond[bond] = true;
            children[a].push_back(bond);
            dfs(nb);
        }
    };
    dfs(start);
    std::map<std::size_t, int> ring_number;
    int next_ring = 1;
    auto bond_symbol = [&](std::size_t bond) -> std::string {
        switch (mol.bonds[bond].order) {
            case BondOrder::single: return "-";
            case BondOrder::double_: return "=";
            case BondOrder::triple: return "#";
            case BondOrder::aromatic: return ":";
        }
        return "";
    };
    auto ring_label = [](int r) { return r < 10 ? std::to_string(r) : "%" + std::to_string(r); };
    // Pass 2: emit in the same preorder.
    std::function<void(std::size_t, std::string&)> emit = [&](std::size_t a, std::string& out) {
        const auto& atom = mol.atoms[a];
        out += '[';
        if (atom.isotope) out += std::to_string(*atom.isotope);
        std::string sym = atom.element;
        if (atom.aromatic) sym[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(sym[0])));
        out += sym;
        if (atom.hydrogens > 0) out += "H" + std::to_string(atom.hydrogens);
        if (atom.charge > 0) out += "+" + std::to_string(atom.charge);
        if (atom.charge < 0) out += "-" + std::to_string(-atom.charge);
        out += ']';
        for (auto [nb, bond] : order[a]) {
            if (tree_bond[bond]) continue;
            if (auto it = ring_number.find(bond); it != ring_number.end()) {
                out += ring_label(it->second);  // closing side
            } else {
                ring_number[bond] = next_ring;
                out += bond_symbol(bond) + ring_label(next_ring++);
            }
        }
        for (std::size_t c = 0; c < children[a].size(); ++c) {
            const std::size_t bond = children[a][c];
            const auto& b = mol.bonds[bond];
            const std::size_t child = b.begin == a ? b.end : b.begin;
            const bool last = c + 1 == children[a].size();
            if (!last) out += '(';
            out += bond_symbol(bond);
            emit(child, out);
            if (!last) out += ')';
        }
    };
    std::string out;
    emit(start, out);
    return out;
}

/// Oils drawn from a shared library of 40 background compounds (random bits
/// beyond the first `n_labels` positions, density 0.15). Sample i has class
/// c = i % n_labels is planted on the first compound: a library entry with
/// bit c also set. 3..6 compounds per oil.
inline eoprop::dataset::Dataset planted_dataset(std::size_t n_samples, std::size_t n_bits, std::size_t n_labels,
                                                std::uint64_t seed) {
    using namespace eoprop;
    Rng rng(seed);
    constexpr std::size_t kLibrary = 40;
    std::vector<chem::Fingerprint> library;
    for (std::size_t j = 0; j < kLibrary; ++j) {
        chem::Fingerprint fp(n_bits, chem::FingerprintKind::ecfp, 2);
        for (std::size_t b = n_labels; b < n_bits; ++b)
            if (rng.uniform() < 0.15) fp.set(b);
        library.push_back(std::move(fp));
    }
    std::vector<dataset::OilSample> oils;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const std::size_t cls = i % n_labels;
        dataset::OilSample oil;
        oil.oil_name = "oil_" + std::to_string(i);
        oil.plant_name = "plant_" + std::to_string(i);
        oil.tissue_name = "T" + std::to_string(cls);
        const std::size_t n = 3 + rng.below(4);
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t pick = rng.below(kLibrary);
            chem::Fingerprint fp = library[pick];
            if (c == 0) fp.set(cls);
            oil.compounds.push_back((c == 0 ? "carrier_" : "lib_") + std::to_string(pick));
            oil.area_percents.push_back(rng.uniform(1.0, 60.0));
            oil.fingerprints.push_back(std::move(fp));
        }
        oils.push_back(std::move(oil));
    }
    dataset::FingerprintSettings fps;
    fps.n_bits = n_bits;
    return dataset::assemble_dataset(std::move(oils), fps, 1);
}

}  // namespace oracle
