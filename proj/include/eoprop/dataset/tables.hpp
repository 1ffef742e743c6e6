#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eoprop/csv.hpp"

namespace eoprop::dataset {

/// Area% substituted for components reported as "Trace".
inline constexpr double kTraceAreaPercent = 0.01;

/// One row of the property table, before its analytical table is read.
struct OilStub {
    std::string oil_name;
    std::string plant_name;
    std::string tissue_name;
    std::string analytical_ref;  // analytical table file, relative to the analytical directory
    std::size_t line = 0;
};

struct Component {
    std::string compound_name;
    double area_percent = 0.0;
    bool trace = false;
};

/// Columns: oil_name, plant_name, tissue_name, analytical_ref. Fields are
/// trimmed; duplicate oil names stay distinct rows.
/// Throws io::InputError with kind MissingColumn or EmptyFile.
std::vector<OilStub> parse_property_table(const std::filesystem::path& path);
std::vector<OilStub> parse_property_table(const io::CsvTable& table);

/// Columns: compound_name, area_percent (a number in (0, 100] or "Trace").
/// Throws io::InputError with kind NegativeArea, AreaOutOfRange or UnparsableArea.
std::vector<Component> parse_analytical_table(const std::filesystem::path& path);
std::vector<Component> parse_analytical_table(const io::CsvTable& table);

/// Columns: compound_name, smiles. Later rows win on duplicate names.
std::map<std::string, std::string> parse_smiles_map(const std::filesystem::path& path);

/// Parses one area% cell. Returns nullopt for text that is neither a number nor "Trace".
std::optional<double> parse_area(std::string_view text);

}  // namespace eoprop::dataset
