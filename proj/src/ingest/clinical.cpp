#include "vaxcast/ingest/clinical.hpp"

#include <fstream>

#include "vaxcast/error.hpp"
#include "vaxcast/ingest/csv.hpp"

namespace vaxcast::ingest {

namespace {

DatedSeries dense_series(const CsvTable& table, bool nonnegative) {
    if (table.header.size() != 2 || table.header[0] != "date") {
        throw ParseError("expected header 'date,<value>'", 1, table.source);
    }
    table.require_rectangular();
    if (table.rows.empty()) throw ParseError("no data rows", 0, table.source);

    std::vector<double> values;
    Date start, prev;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t line = table.lines[i];
        const auto date = Date::parse(row[0]);
        if (!date) throw ParseError("bad date '" + row[0] + "'", line, table.source);
        const auto value = parse_number(row[1]);
        if (!value) throw ParseError("bad value '" + row[1] + "'", line, table.source);
        if (nonnegative && *value < 0.0) throw ParseError("negative value " + row[1], line, table.source);
        if (i == 0) {
            start = *date;
        } else if (*date == prev) {
            throw ParseError("duplicate date " + date->iso(), line, table.source);
        } else if (*date < prev) {
            throw ParseError("date " + date->iso() + " out of order", line, table.source);
        } else if (*date != prev + 1) {
            throw DomainError(table.source + ": missing date " + (prev + 1).iso());
        }
        prev = *date;
        values.push_back(*value);
    }
    return DatedSeries(start, std::move(values), table.header[1]);
}

}  // namespace

DatedSeries parse_clinical_csv(std::istream& in, const std::string& source) {
    return dense_series(read_csv(in, source), true);
}

DatedSeries parse_clinical_csv(const std::filesystem::path& path) { return dense_series(read_csv_file(path), true); }

DatedSeries read_series_csv(const std::filesystem::path& path) { return dense_series(read_csv_file(path), false); }

std::string series_csv(const DatedSeries& series, const std::string& value_header) {
    std::string out = "date," + value_header + "\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += series.date_at(i).iso() + "," + format_number(series[i]) + "\n";
    }
    return out;
}

}  // namespace vaxcast::ingest
