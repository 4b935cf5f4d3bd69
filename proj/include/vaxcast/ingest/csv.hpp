#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vaxcast::ingest {

/// Comma-separated text with a header row. Fields may be double-quoted.
struct CsvTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;  ///< 1-based line number of each row

    /// ParseError unless every row has as many fields as the header.
    void require_rectangular() const;
};

std::vector<std::string> split_csv_line(std::string_view line);

CsvTable read_csv(std::istream& in, const std::string& source);
/// DomainError naming the path when it cannot be opened.
CsvTable read_csv_file(const std::filesystem::path& path);

/// Whole-field decimal parse (no trailing garbage, finite).
std::optional<double> parse_number(std::string_view text);

/// printf-style "%.10g"; the text written to every data CSV.
std::string format_number(double value);

}  // namespace vaxcast::ingest
