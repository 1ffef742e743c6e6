#include "eoprop/dataset/tables.hpp"

#include <charconv>
#include <cmath>

namespace eoprop::dataset {

std::vector<OilStub> parse_property_table(const std::filesystem::path& path) {
    return parse_property_table(io::CsvTable::read(path));
}

std::vector<OilStub> parse_property_table(const io::CsvTable& table) {
    const auto c_oil = table.require_column("oil_name");
    const auto c_plant = table.require_column("plant_name");
    const auto c_tissue = table.require_column("tissue_name");
    const auto c_ref = table.require_column("analytical_ref");
    if (table.rows().empty()) throw io::InputError("EmptyFile", table.origin(), 0, "property table has no data rows");

    std::vector<OilStub> stubs;
    stubs.reserve(table.rows().size());
    for (const auto& row : table.rows()) {
        stubs.push_back({table.field(row, c_oil), table.field(row, c_plant), table.field(row, c_tissue),
                         table.field(row, c_ref), row.line});
    }
    return stubs;
}

std::optional<double> parse_area(std::string_view text) {
    const std::string t = io::trim(text);
    if (t == "Trace") return kTraceAreaPercent;
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::vector<Component> parse_analytical_table(const std::filesystem::path& path) {
    return parse_analytical_table(io::CsvTable::read(path));
}

std::vector<Component> parse_analytical_table(const io::CsvTable& table) {
    const auto c_name = table.require_column("compound_name");
    const auto c_area = table.require_column("area_percent");

    std::vector<Component> out;
    for (const auto& row : table.rows()) {
        const std::string raw = table.field(row, c_area);
        const auto area = parse_area(raw);
        if (!area) throw io::InputError("UnparsableArea", table.origin(), row.line, "area_percent '" + raw + "'");
        if (*area < 0.0) throw io::InputError("NegativeArea", table.origin(), row.line, "area_percent " + raw);
        if (*area == 0.0 || *area > 100.0) {
            throw io::InputError("AreaOutOfRange", table.origin(), row.line, "area_percent " + raw + " not in (0, 100]");
        }
        out.push_back({table.field(row, c_name), *area, raw == "Trace"});
    }
    return out;
}

std::map<std::string, std::string> parse_smiles_map(const std::filesystem::path& path) {
    const auto table = io::CsvTable::read(path);
    const auto c_name = table.require_column("compound_name");
    const auto c_smiles = table.require_column("smiles");
    std::map<std::string, std::string> out;
    for (const auto& row : table.rows()) {
        std::string smiles = table.field(row, c_smiles);
        if (!smiles.empty()) out.insert_or_assign(table.field(row, c_name), std::move(smiles));
    }
    return out;
}

}  // namespace eoprop::dataset
