#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eoprop::io {

/// Error tied to a location in an input file.
class InputError : public std::runtime_error {
public:
    InputError(std::string kind, const std::filesystem::path& file, std::size_t line, const std::string& detail);
    const std::string& kind() const noexcept { return kind_; }
    const std::filesystem::path& file() const noexcept { return file_; }
    /// 1-based; 0 when the problem is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::string kind_;
    std::filesystem::path file_;
    std::size_t line_;
};

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

/// Comma-separated table with a header row. Double-quoted fields may contain
/// commas and doubled quotes; a UTF-8 BOM is skipped. Blank lines are ignored.
class CsvTable {
public:
    static CsvTable read(const std::filesystem::path& path);
    static CsvTable parse(std::string_view text, const std::filesystem::path& origin = "<memory>");

    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<CsvRow>& rows() const noexcept { return rows_; }
    const std::filesystem::path& origin() const noexcept { return origin_; }

    std::optional<std::size_t> find_column(std::string_view name) const;
    /// Throws InputError("MissingColumn") naming the column.
    std::size_t require_column(std::string_view name) const;
    /// Field of `row` in `column`, whitespace-trimmed; empty if the row is short.
    std::string field(const CsvRow& row, std::size_t column) const;

private:
    std::filesystem::path origin_;
    std::vector<std::string> header_;
    std::vector<CsvRow> rows_;
};

std::string trim(std::string_view s);

}  // namespace eoprop::io
