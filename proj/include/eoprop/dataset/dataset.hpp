#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "eoprop/chem/fingerprint.hpp"
#include "eoprop/dataset/samples.hpp"

namespace eoprop::dataset {

struct FingerprintSettings {
    chem::FingerprintKind kind = chem::FingerprintKind::ecfp;
    int radius = chem::kDefaultEcfpRadius;
    std::size_t n_bits = chem::kDefaultEcfpBits;
};

/// One essential oil with featurized components.
struct OilSample {
    std::string oil_name;
    std::string plant_name;
    std::string tissue_name;
    std::vector<std::string> compounds;
    std::vector<double> area_percents;
    std::vector<chem::Fingerprint> fingerprints;
    std::vector<int> target;  // filled by assemble_dataset

    std::size_t num_components() const noexcept { return compounds.size(); }
    GraphSample graph() const { return assemble_graph_sample(area_percents, fingerprints); }
    StackedSample stacked(std::size_t n_max) const { return assemble_stacked_sample(area_percents, fingerprints, n_max); }
};

/// Why a compound (or, with an empty compound name, a whole oil) was left out.
struct Exclusion {
    std::string oil_name;
    std::string compound_name;
    std::string reason;
};

struct Dataset {
    LabelSpace labels;
    FingerprintSettings fingerprint;
    std::vector<OilSample> samples;
    std::vector<Exclusion> exclusions;

    std::size_t feature_width() const noexcept { return 1 + fingerprint.n_bits; }
    std::size_t max_components() const;
};

struct DatasetSources {
    std::filesystem::path property_table;
    std::filesystem::path analytical_dir;
    std::optional<std::filesystem::path> smiles_map;
    std::vector<std::filesystem::path> fingerprint_imports;
};

/// Encodes labels over `oils` and keeps only those whose tissue survives;
/// dropped oils are appended to `exclusions`. Checks a common fingerprint width.
Dataset assemble_dataset(std::vector<OilSample> oils, const FingerprintSettings& fingerprint,
                         std::size_t min_count = kDefaultMinCount, std::vector<Exclusion> exclusions = {});

/// Reads the property table and each oil's analytical table, resolves one
/// fingerprint per compound (ECFP from the SMILES map, or an imported
/// fingerprint of the configured kind) and assembles the labelled dataset.
/// Compounds without a fingerprint are dropped with a warning; oils left with
/// no compounds are excluded.
Dataset build_dataset(const DatasetSources& sources, const FingerprintSettings& fingerprint,
                      std::size_t min_count = kDefaultMinCount, std::ostream* warnings = nullptr);

/// Archive layout: `index.json` (labels, settings, per-sample metadata and
/// byte offsets, exclusion log) and `features.bin` (per sample, the N x F
/// node-feature block then the N x N similarity block, little-endian f64).
void write_archive(const Dataset& data, const std::filesystem::path& dir);
Dataset read_archive(const std::filesystem::path& dir);

}  // namespace eoprop::dataset
