#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "vaxcast/dated_series.hpp"

namespace vaxcast::ingest {

/// Daily first-dose counts from `date,first_doses` CSV text.
/// ParseError (with line) for malformed, negative, duplicate or out-of-order
/// rows; DomainError naming the first missing date for a gap.
DatedSeries parse_clinical_csv(std::istream& in, const std::string& source = "<clinical>");
DatedSeries parse_clinical_csv(const std::filesystem::path& path);

/// Reads a `date,<name>` CSV written by write_series_csv.
DatedSeries read_series_csv(const std::filesystem::path& path);
std::string series_csv(const DatedSeries& series, const std::string& value_header);

}  // namespace vaxcast::ingest
