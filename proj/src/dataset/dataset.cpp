#include "eoprop/dataset/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "json.hpp"

#include "eoprop/binary_io.hpp"
#include "eoprop/chem/smiles.hpp"
#include "eoprop/dataset/tables.hpp"

namespace eoprop::dataset {

std::size_t Dataset::max_components() const {
    std::size_t n = 0;
    for (const auto& s : samples) n = std::max(n, s.num_components());
    return n;
}

Dataset assemble_dataset(std::vector<OilSample> oils, const FingerprintSettings& fingerprint, std::size_t min_count,
                         std::vector<Exclusion> exclusions) {
    for (const auto& oil : oils) {
        for (const auto& fp : oil.fingerprints) {
            if (fp.n_bits() != fingerprint.n_bits) {
                throw DatasetError(DatasetErrorKind::WidthMismatch,
                                   oil.oil_name + ": fingerprint width " + std::to_string(fp.n_bits()) +
                                       ", configured " + std::to_string(fingerprint.n_bits));
            }
        }
        if (oil.fingerprints.size() != oil.compounds.size() || oil.area_percents.size() != oil.compounds.size()) {
            throw DatasetError(DatasetErrorKind::InvalidArgument, oil.oil_name + ": ragged component lists");
        }
    }
    std::vector<std::string> tissues;
    for (const auto& oil : oils) tissues.push_back(oil.tissue_name);
    auto enc = encode_labels(tissues, min_count);

    Dataset data;
    data.labels = enc.space;
    data.fingerprint = fingerprint;
    data.exclusions = std::move(exclusions);
    for (std::size_t i : enc.excluded) {
        data.exclusions.push_back({oils[i].oil_name, "",
                                   "tissue '" + oils[i].tissue_name + "' has fewer than " + std::to_string(min_count) +
                                       " oils"});
    }
    for (std::size_t k = 0; k < enc.kept.size(); ++k) {
        OilSample& oil = oils[enc.kept[k]];
        oil.target = std::move(enc.targets[k]);
        data.samples.push_back(std::move(oil));
    }
    return data;
}

Dataset build_dataset(const DatasetSources& sources, const FingerprintSettings& fingerprint, std::size_t min_count,
                      std::ostream* warnings) {
    const auto stubs = parse_property_table(sources.property_table);
    std::map<std::string, std::string> smiles;
    if (sources.smiles_map) smiles = parse_smiles_map(*sources.smiles_map);
    std::map<std::string, chem::Fingerprint> imported;
    for (const auto& path : sources.fingerprint_imports) imported.merge(chem::read_fingerprint_csv(path));

    std::map<std::string, chem::Fingerprint> cache;
    std::vector<Exclusion> exclusions;
    auto warn = [&](const Exclusion& e) {
        exclusions.push_back(e);
        if (!warnings) return;
        *warnings << "warning: " << e.oil_name;
        if (!e.compound_name.empty()) *warnings << " / " << e.compound_name;
        *warnings << ": " << e.reason << '\n';
    };
    auto resolve = [&](const std::string& compound, std::string& reason) -> std::optional<chem::Fingerprint> {
        if (auto it = cache.find(compound); it != cache.end()) return it->second;
        if (fingerprint.kind == chem::FingerprintKind::ecfp) {
            const auto it = smiles.find(compound);
            if (it == smiles.end()) {
                reason = "no SMILES in the compound map";
                return std::nullopt;
            }
            try {
                auto fp = chem::ecfp(chem::parse_smiles(it->second), fingerprint.radius, fingerprint.n_bits);
                cache.emplace(compound, fp);
                return fp;
            } catch (const chem::SmilesError& e) {
                reason = std::string("unparsable SMILES: ") + e.what();
                return std::nullopt;
            }
        }
        const auto it = imported.find(compound);
        if (it == imported.end()) {
            reason = std::string("no imported ") + chem::to_string(fingerprint.kind) + " fingerprint";
            return std::nullopt;
        }
        if (it->second.kind() != fingerprint.kind || it->second.n_bits() != fingerprint.n_bits) {
            reason = std::string("imported fingerprint is ") + chem::to_string(it->second.kind()) + "/" +
                     std::to_string(it->second.n_bits()) + " bits, configured " + chem::to_string(fingerprint.kind) +
                     "/" + std::to_string(fingerprint.n_bits);
            return std::nullopt;
        }
        return it->second;
    };

    std::vector<OilSample> oils;
    for (const auto& stub : stubs) {
        const auto components = parse_analytical_table(sources.analytical_dir / stub.analytical_ref);
        OilSample oil{stub.oil_name, stub.plant_name, stub.tissue_name, {}, {}, {}, {}};
        for (const auto& c : components) {
            std::string reason;
            auto fp = resolve(c.compound_name, reason);
            if (!fp) {
                warn({stub.oil_name, c.compound_name, reason});
                continue;
            }
            oil.compounds.push_back(c.compound_name);
            oil.area_percents.push_back(c.area_percent);
            oil.fingerprints.push_back(std::move(*fp));
        }
        if (oil.compounds.empty()) {
            warn({stub.oil_name, "", "no component has a fingerprint"});
            continue;
        }
        oils.push_back(std::move(oil));
    }
    if (oils.empty()) {
        throw DatasetError(DatasetErrorKind::EmptyInput, "every oil was excluded (" + std::to_string(exclusions.size()) +
                                                             " exclusions)");
    }
    return assemble_dataset(std::move(oils), fingerprint, min_count, std::move(exclusions));
}

namespace {

constexpr const char* kIndexFile = "index.json";
constexpr const char* kFeatureFile = "features.bin";

}  // namespace

void write_archive(const Dataset& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream bin(dir / kFeatureFile, std::ios::binary | std::ios::trunc);
    if (!bin) throw std::runtime_error("cannot write " + (dir / kFeatureFile).string());

    nlohmann::ordered_json index;
    index["format"] = "eoprop-dataset";
    index["version"] = 1;
    index["fingerprint"] = {{"kind", chem::to_string(data.fingerprint.kind)},
                            {"radius", data.fingerprint.radius},
                            {"n_bits", data.fingerprint.n_bits}};
    index["feature_width"] = data.feature_width();
    index["labels"] = {{"categories", data.labels.categories}, {"min_count", data.labels.min_count}};
    index["sample_count"] = data.samples.size();

    std::uint64_t offset = 0;
    auto samples = nlohmann::ordered_json::array();
    for (const auto& s : data.samples) {
        const auto g = s.graph();
        nlohmann::ordered_json entry;
        entry["oil_name"] = s.oil_name;
        entry["plant_name"] = s.plant_name;
        entry["tissue_name"] = s.tissue_name;
        entry["target"] = s.target;
        entry["compounds"] = s.compounds;
        entry["area_percent"] = s.area_percents;
        entry["rows"] = g.num_nodes();
        entry["features_offset"] = offset;
        for (double v : g.nodes.values()) io::write_le<double>(bin, v);
        offset += g.nodes.size() * sizeof(double);
        entry["weights_offset"] = offset;
        for (double v : g.weights.values()) io::write_le<double>(bin, v);
        offset += g.weights.size() * sizeof(double);
        samples.push_back(std::move(entry));
    }
    index["samples"] = std::move(samples);
    auto excl = nlohmann::ordered_json::array();
    for (const auto& e : data.exclusions)
        excl.push_back({{"oil_name", e.oil_name}, {"compound_name", e.compound_name}, {"reason", e.reason}});
    index["exclusions"] = std::move(excl);
    if (!bin) throw std::runtime_error("write failed for " + (dir / kFeatureFile).string());

    std::ofstream out(dir / kIndexFile, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / kIndexFile).string());
    out << index.dump(2) << '\n';
}

Dataset read_archive(const std::filesystem::path& dir) {
    std::ifstream in(dir / kIndexFile);
    if (!in) throw std::runtime_error("no dataset archive at " + dir.string() + " (missing index.json)");
    const auto index = nlohmann::json::parse(in);
    if (index.value("format", "") != "eoprop-dataset") throw std::runtime_error("not an eoprop dataset archive");
    std::ifstream bin(dir / kFeatureFile, std::ios::binary);
    if (!bin) throw std::runtime_error("missing " + (dir / kFeatureFile).string());

    Dataset data;
    data.fingerprint.kind = chem::parse_fingerprint_kind(index.at("fingerprint").at("kind").get<std::string>());
    data.fingerprint.radius = index.at("fingerprint").at("radius").get<int>();
    data.fingerprint.n_bits = index.at("fingerprint").at("n_bits").get<std::size_t>();
    data.labels.categories = index.at("labels").at("categories").get<std::vector<std::string>>();
    data.labels.min_count = index.at("labels").at("min_count").get<std::size_t>();
    const std::size_t width = data.feature_width();
    const std::optional<int> radius =
        data.fingerprint.kind == chem::FingerprintKind::ecfp ? std::optional<int>(data.fingerprint.radius) : std::nullopt;

    for (const auto& entry : index.at("samples")) {
        OilSample s;
        s.oil_name = entry.at("oil_name").get<std::string>();
        s.plant_name = entry.at("plant_name").get<std::string>();
        s.tissue_name = entry.at("tissue_name").get<std::string>();
        s.target = entry.at("target").get<std::vector<int>>();
        s.compounds = entry.at("compounds").get<std::vector<std::string>>();
        s.area_percents = entry.at("area_percent").get<std::vector<double>>();
        const auto rows = entry.at("rows").get<std::size_t>();
        bin.seekg(static_cast<std::streamoff>(entry.at("features_offset").get<std::uint64_t>()));
        for (std::size_t r = 0; r < rows; ++r) {
            chem::Fingerprint fp(data.fingerprint.n_bits, data.fingerprint.kind, radius);
            for (std::size_t c = 0; c < width; ++c) {
                const double v = io::read_le<double>(bin);
                if (c > 0 && v != 0.0) fp.set(c - 1);
            }
            s.fingerprints.push_back(std::move(fp));
        }
        data.samples.push_back(std::move(s));
    }
    for (const auto& e : index.at("exclusions")) {
        data.exclusions.push_back({e.at("oil_name").get<std::string>(), e.at("compound_name").get<std::string>(),
                                   e.at("reason").get<std::string>()});
    }
    return data;
}

}  // namespace eoprop::dataset
