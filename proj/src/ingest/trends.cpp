#include "vaxcast/ingest/trends.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "vaxcast/error.hpp"
#include "vaxcast/ingest/csv.hpp"

namespace vaxcast::ingest {

std::size_t TrendsBatch::reference_index() const {
    const auto it = std::find(columns.begin(), columns.end(), reference_name);
    if (it == columns.end()) throw DomainError(source + ": no reference column '" + reference_name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

void TrendsBatch::validate() const {
    if (columns.empty() || columns.size() > 5) {
        throw DomainError(source + ": a batch holds 1 to 5 query columns, found " + std::to_string(columns.size()));
    }
    if (std::count(columns.begin(), columns.end(), reference_name) != 1) {
        throw DomainError(source + ": expected exactly one '" + reference_name + "' column");
    }
    if (cells.size() != columns.size()) throw DomainError(source + ": column count mismatch");
    for (const auto& c : cells) {
        if (c.size() != days() || c.empty()) throw DomainError(source + ": columns differ in length");
    }
}

TrendsBatch parse_trends_csv(std::istream& in, const std::string& source, const std::string& reference_name) {
    const CsvTable table = read_csv(in, source);
    if (table.header.size() < 2 || table.header[0] != "date") {
        throw ParseError("expected header 'date,<queries>...'", 1, source);
    }
    table.require_rectangular();
    if (table.rows.empty()) throw ParseError("no data rows", 0, source);

    TrendsBatch batch;
    batch.source = source;
    batch.reference_name = reference_name;
    batch.columns.assign(table.header.begin() + 1, table.header.end());
    batch.cells.resize(batch.columns.size());
    Date prev;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line = table.lines[i];
        const auto date = Date::parse(row[0]);
        if (!date) throw ParseError("bad date '" + row[0] + "'", line, source);
        if (i == 0) {
            batch.start = *date;
        } else if (*date != prev + 1) {
            throw ParseError("expected date " + (prev + 1).iso() + ", found " + date->iso(), line, source);
        }
        prev = *date;
        for (std::size_t j = 1; j < row.size(); ++j) {
            const std::string& text = row[j];
            if (!text.empty() && text.front() == '<') {
                batch.cells[j - 1].push_back(Censored{text});
                continue;
            }
            const auto v = parse_number(text);
            if (!v || *v < 0.0 || *v > 100.0) {
                throw ParseError("cell '" + text + "' is not a value in [0, 100]", line, source);
            }
            batch.cells[j - 1].push_back(*v);
        }
    }
    batch.validate();
    return batch;
}

TrendsBatch parse_trends_csv(const std::filesystem::path& path, const std::string& reference_name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path.string());
    return parse_trends_csv(in, path.string(), reference_name);
}

RepairResult repair_censoring(const TrendsBatch& batch) {
    RepairResult out{batch, 0};
    for (std::size_t j = 0; j < out.batch.cells.size(); ++j) {
        for (std::size_t t = 0; t < out.batch.cells[j].size(); ++t) {
            auto& cell = out.batch.cells[j][t];
            if (const auto* c = std::get_if<Censored>(&cell)) {
                if (c->marker != "<1") {
                    // header is line 1 and rows are consecutive
                    throw ParseError("unsupported censoring marker '" + c->marker + "' in column " +
                                         batch.columns[j],
                                     t + 2, batch.source);
                }
                cell = 0.5;
                ++out.repairs;
            }
        }
    }
    return out;
}

std::map<std::string, DatedSeries> standardize_batches(const std::vector<TrendsBatch>& batches) {
    if (batches.empty()) throw DomainError("standardize_batches: no batches");
    auto numeric = [](const TrendsBatch& b, std::size_t col) {
        std::vector<double> v;
        v.reserve(b.days());
        for (const auto& cell : b.cells[col]) {
            const auto* d = std::get_if<double>(&cell);
            if (!d) throw DomainError(b.source + ": column " + b.columns[col] + " has unrepaired censored cells");
            v.push_back(*d);
        }
        return v;
    };
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };

    const TrendsBatch& anchor = batches.front();
    anchor.validate();
    const double anchor_mean = mean(numeric(anchor, anchor.reference_index()));
    if (!(anchor_mean > 0.0)) throw DomainError(anchor.source + ": reference column has zero mean");

    std::map<std::string, DatedSeries> out;
    for (const auto& b : batches) {
        b.validate();
        if (b.start != anchor.start || b.days() != anchor.days()) {
            throw DomainError(b.source + ": date range differs from " + anchor.source);
        }
        const std::size_t ref = b.reference_index();
        const double ref_mean = mean(numeric(b, ref));
        if (!(ref_mean > 0.0)) throw DomainError(b.source + ": reference column has zero mean");
        const double factor = &b == &anchor ? 1.0 : anchor_mean / ref_mean;
        for (std::size_t j = 0; j < b.columns.size(); ++j) {
            if (j == ref) continue;
            auto v = numeric(b, j);
            for (double& x : v) x *= factor;
            if (!out.emplace(b.columns[j], DatedSeries(b.start, std::move(v), b.columns[j])).second) {
                throw DomainError("query '" + b.columns[j] + "' appears in more than one batch");
            }
        }
    }
    return out;
}

std::string series_name(Attitude a) {
    switch (a) {
        case Attitude::positive: return "pt";
        case Attitude::neutral: return "nt";
        case Attitude::negative: return "ng";
    }
    return "?";
}

namespace {
constexpr const char* kAttitudeKeys[] = {"positive", "neutral", "negative"};
}

void CategoryMap::validate(std::size_t per_category) const {
    std::set<std::string> seen;
    for (std::size_t a = 0; a < 3; ++a) {
        if (per_category != 0 && labels[a].size() != per_category) {
            throw DomainError(std::string("category ") + kAttitudeKeys[a] + " lists " +
                              std::to_string(labels[a].size()) + " labels, expected " + std::to_string(per_category));
        }
        if (labels[a].empty()) throw DomainError(std::string("category ") + kAttitudeKeys[a] + " is empty");
        for (const auto& l : labels[a]) {
            if (!seen.insert(l).second) throw DomainError("label '" + l + "' appears in more than one category");
        }
    }
}

CategoryMap CategoryMap::from_json(const std::string& text, const std::string& source) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), 0, source);
    }
    if (!j.is_object()) throw ParseError("expected a JSON object", 0, source);
    CategoryMap map;
    for (std::size_t a = 0; a < 3; ++a) {
        const auto it = j.find(kAttitudeKeys[a]);
        if (it == j.end() || !it->is_array()) {
            throw ParseError(std::string("missing array '") + kAttitudeKeys[a] + "'", 0, source);
        }
        for (const auto& label : *it) {
            if (!label.is_string()) throw ParseError("labels must be strings", 0, source);
            map.labels[a].push_back(label.get<std::string>());
        }
    }
    return map;
}

CategoryMap CategoryMap::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return from_json(text.str(), path.string());
}

std::array<DatedSeries, 3> aggregate_categories(const std::map<std::string, DatedSeries>& standardized,
                                                const CategoryMap& map) {
    std::vector<DatedSeries> out;
    for (std::size_t a = 0; a < 3; ++a) {
        const auto& labels = map.labels[a];
        if (labels.empty()) throw DomainError(std::string("category ") + kAttitudeKeys[a] + " is empty");
        std::optional<Date> start;
        std::vector<double> total;
        for (const auto& label : labels) {
            const auto it = standardized.find(label);
            if (it == standardized.end()) throw DomainError("query '" + label + "' missing from the search data");
            const DatedSeries& s = it->second;
            if (!start) {
                start = s.start_date();
                total.assign(s.size(), 0.0);
            } else if (s.start_date() != *start || s.size() != total.size()) {
                throw DomainError("query '" + label + "' covers different dates");
            }
            for (std::size_t t = 0; t < total.size(); ++t) total[t] += s[t];
        }
        out.emplace_back(*start, std::move(total), series_name(static_cast<Attitude>(a)));
    }
    return {out[0], out[1], out[2]};
}

}  // namespace vaxcast::ingest
