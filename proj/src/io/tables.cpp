#include "vaxcast/io/tables.hpp"

#include <fstream>

#include "vaxcast/error.hpp"
#include "vaxcast/ingest/csv.hpp"

namespace vaxcast::io {

std::string feature_csv(const regress::FeatureMatrix& x) {
    std::string out = "date";
    for (const auto& c : x.column_names()) out += "," + c;
    out += '\n';
    for (std::size_t i = 0; i < x.rows(); ++i) {
        out += x.date_at(i).iso();
        for (std::size_t j = 0; j < x.cols(); ++j) {
            out += ',';
            out += ingest::format_number(x.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
        out += '\n';
    }
    return out;
}

regress::FeatureMatrix read_feature_csv(const std::filesystem::path& path) {
    const auto table = ingest::read_csv_file(path);
    table.require_rectangular();
    if (table.header.size() < 2 || table.header.front() != "date") {
        throw ParseError("expected header date,<feature>,...", 1, table.source);
    }
    if (table.rows.empty()) throw ParseError("no data rows", 0, table.source);
    const std::vector<std::string> columns(table.header.begin() + 1, table.header.end());
    Eigen::MatrixXd values(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(columns.size()));
    Date start;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const auto date = Date::parse(row[0]);
        if (!date) throw ParseError("bad date '" + row[0] + "'", table.lines[i], table.source);
        if (i == 0) {
            start = *date;
        } else if (*date != start + static_cast<long>(i)) {
            throw ParseError("expected date " + (start + static_cast<long>(i)).iso(), table.lines[i], table.source);
        }
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const auto v = ingest::parse_number(row[j + 1]);
            if (!v) throw ParseError("bad value '" + row[j + 1] + "'", table.lines[i], table.source);
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *v;
        }
    }
    return regress::FeatureMatrix(start, columns, std::move(values));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw DomainError("cannot write " + path.string());
}

}  // namespace vaxcast::io
