#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "vaxcast/dated_series.hpp"

namespace vaxcast::ingest {

/// A cell reported below the export's resolution, e.g. "<1".
struct Censored {
    std::string marker;
    friend bool operator==(const Censored&, const Censored&) = default;
};

using TrendsCell = std::variant<double, Censored>;

/// One search-interest export: up to five query columns over the same days,
/// one of which is the shared reference query.
struct TrendsBatch {
    std::string source;
    Date start;
    std::vector<std::string> columns;
    std::vector<std::vector<TrendsCell>> cells;  ///< [column][day]
    std::string reference_name = "Joker";

    std::size_t days() const { return cells.empty() ? 0 : cells.front().size(); }
    Date end_date() const { return start + static_cast<long>(days()) - 1; }
    std::size_t reference_index() const;
    /// DomainError unless 1..5 columns, exactly one named reference_name, equal lengths.
    void validate() const;

    friend bool operator==(const TrendsBatch&, const TrendsBatch&) = default;
};

/// Header `date,<q1>,...,<qk>,<reference>`; cells decimal in [0, 100] or
/// a marker starting with '<'. Dates must be consecutive.
TrendsBatch parse_trends_csv(std::istream& in, const std::string& source, const std::string& reference_name = "Joker");
TrendsBatch parse_trends_csv(const std::filesystem::path& path, const std::string& reference_name = "Joker");

struct RepairResult {
    TrendsBatch batch;
    std::size_t repairs = 0;
};

/// "<1" becomes 0.5; any other marker is a ParseError.
RepairResult repair_censoring(const TrendsBatch& batch);

/// Rescales batch b by mean(reference in batch 0) / mean(reference in batch b)
/// and returns every non-reference column, keyed by query label. Cells must
/// already be repaired.
std::map<std::string, DatedSeries> standardize_batches(const std::vector<TrendsBatch>& batches);

enum class Attitude { positive, neutral, negative };

/// Query labels per attitude, 12 each, disjoint.
struct CategoryMap {
    std::array<std::vector<std::string>, 3> labels;  ///< indexed by Attitude

    const std::vector<std::string>& of(Attitude a) const { return labels[static_cast<std::size_t>(a)]; }
    /// `per_category` = 0 skips the size check.
    void validate(std::size_t per_category = 12) const;

    /// JSON object {"positive": [...], "neutral": [...], "negative": [...]}.
    static CategoryMap from_json(const std::string& text, const std::string& source = "<categories>");
    static CategoryMap load(const std::filesystem::path& path);
};

/// Series names of the aggregates: "pt", "nt", "ng".
std::string series_name(Attitude a);

/// Per-date sums of each category's members, returned as (pt, nt, ng).
std::array<DatedSeries, 3> aggregate_categories(const std::map<std::string, DatedSeries>& standardized,
                                                const CategoryMap& map);

}  // namespace vaxcast::ingest
