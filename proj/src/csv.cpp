#include "eoprop/csv.hpp"

#include <fstream>
#include <sstream>

namespace eoprop::io {

InputError::InputError(std::string kind, const std::filesystem::path& file, std::size_t line, const std::string& detail)
    : std::runtime_error(kind + ": " + file.string() + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         detail),
      kind_(std::move(kind)),
      file_(file),
      line_(line) {}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("MissingFile", path, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

CsvTable CsvTable::parse(std::string_view text, const std::filesystem::path& origin) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    CsvTable table;
    table.origin_ = origin;

    std::vector<CsvRow> records;
    CsvRow current;
    std::string field;
    bool in_quotes = false;
    bool row_has_content = false;
    std::size_t line = 1;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(field);
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        if (row_has_content) records.push_back(std::move(current));
        current = CsvRow{};
        row_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                in_quotes = true;
                row_has_content = true;
                break;
            case ',':
                row_has_content = true;
                end_field();
                break;
            case '\r': break;
            case '\n':
                end_row();
                ++line;
                current.line = line;
                break;
            default:
                if (ch != ' ' && ch != '\t') row_has_content = true;
                field.push_back(ch);
        }
    }
    if (in_quotes) throw InputError("UnterminatedQuote", origin, line, "quoted field runs to end of file");
    end_row();

    if (records.empty()) throw InputError("EmptyFile", origin, 0, "no header row");
    for (const auto& h : records.front().fields) table.header_.push_back(trim(h));
    records.erase(records.begin());
    table.rows_ = std::move(records);
    return table;
}

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return i;
    return std::nullopt;
}

std::size_t CsvTable::require_column(std::string_view name) const {
    if (auto idx = find_column(name)) return *idx;
    throw InputError("MissingColumn", origin_, 1, std::string(name));
}

std::string CsvTable::field(const CsvRow& row, std::size_t column) const {
    return column < row.fields.size() ? trim(row.fields[column]) : std::string();
}

}  // namespace eoprop::io
