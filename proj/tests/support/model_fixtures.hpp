#pragma once

#include <vector>

#include "eoprop/autodiff/grad_check.hpp"
#include "eoprop/models/model.hpp"
#include "support/oracles.hpp"

namespace oracle {

/// An oil of `n` compounds with random areas and `n_bits`-wide random fingerprints.
inline eoprop::dataset::OilSample random_oil(std::size_t n, std::size_t n_bits, Rng& rng) {
    eoprop::dataset::OilSample oil;
    oil.oil_name = "random";
    for (std::size_t i = 0; i < n; ++i) {
        eoprop::chem::Fingerprint fp(n_bits, eoprop::chem::FingerprintKind::ecfp, 2);
        for (std::size_t b = 0; b < n_bits; ++b)
            if (rng.uniform() < 0.4) fp.set(b);
        oil.compounds.push_back("c" + std::to_string(i));
        oil.area_percents.push_back(rng.uniform(0.5, 50.0));
        oil.fingerprints.push_back(std::move(fp));
    }
    return oil;
}

inline std::vector<eoprop::models::ModelConfig> all_model_configs(std::size_t input_dim, std::size_t n_labels,
                                                                  std::size_t hidden, std::size_t layers,
                                                                  std::size_t heads = 1) {
    std::vector<eoprop::models::ModelConfig> out;
    for (auto a : eoprop::models::kAllArchitectures)
        for (auto l : eoprop::models::kAllLossDesigns) {
            eoprop::models::ModelConfig m;
            m.architecture = a;
            m.loss_design = l;
            m.input_dim = input_dim;
            m.n_labels = n_labels;
            m.hidden_dim = hidden;
            m.layers = layers;
            m.gat_heads = heads;
            m.n_max = 8;
            out.push_back(m);
        }
    return out;
}

/// Finite-difference check of the full model loss on two random oils.
inline eoprop::autodiff::GradCheckReport model_grad_check(const eoprop::models::ModelConfig& config,
                                                          std::uint64_t seed) {
    using namespace eoprop;
    Rng rng(seed);
    models::Model model(config, seed);
    // A non-zero edge scale so the similarity path is exercised too.
    for (auto p : model.named_parameters())
        if (p.name.find("edge_scale") != std::string::npos) p.value.mutable_data()[0] = 0.7;
    std::vector<models::ModelInput> inputs;
    std::vector<std::vector<int>> targets;
    for (int s = 0; s < 2; ++s) {
        inputs.push_back(models::prepare_input(random_oil(2 + rng.below(4), config.input_dim - 1, rng), config));
        std::vector<int> t(config.n_labels, 0);
        t[rng.below(config.n_labels)] = 1;
        targets.push_back(t);
    }
    auto params = model.parameters();
    auto fn = [&] {
        autodiff::Value total = models::loss(model.logits(inputs[0]), targets[0], config.loss_design);
        total = autodiff::add(total, models::loss(model.logits(inputs[1]), targets[1], config.loss_design));
        return total;
    };
    return autodiff::grad_check(fn, params);
}

}  // namespace oracle
