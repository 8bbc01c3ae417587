// SPDX-License-Identifier: Apache-2.0
#include "latdpc/table.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "latdpc/errors.hpp"

namespace latdpc {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ResultTable::write_csv(std::ostream& os) const {
    for (const auto& [key, value] : metadata) os << "# " << key << ": " << value << "\n";
    const bool labeled = !row_labels.empty();
    if (labeled && row_labels.size() != rows.size())
        throw ConfigError("table: row label count disagrees with row count");
    if (labeled) os << label_header << ",";
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) os << ",";
        os << header[i];
    }
    os << "\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != header.size())
            throw ConfigError("table: row width disagrees with header");
        if (labeled) os << row_labels[r] << ",";
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            if (c) os << ",";
            os << format_g17(rows[r][c]);
        }
        os << "\n";
    }
}

void ResultTable::write_json(std::ostream& os) const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta;
    for (const auto& [key, value] : metadata) meta[key] = value;
    meta["columns"] = header;
    if (!row_labels.empty()) meta["label_column"] = label_header;
    j["metadata"] = meta;
    nlohmann::ordered_json out_rows = nlohmann::ordered_json::array();
    const bool labeled = !row_labels.empty();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        if (labeled) row.push_back(row_labels[r]);
        for (double v : rows[r]) row.push_back(v);
        out_rows.push_back(std::move(row));
    }
    j["rows"] = std::move(out_rows);
    os << j.dump(2) << "\n";
}

void ResultTable::write(std::ostream& os, const std::string& format) const {
    if (format == "csv")
        write_csv(os);
    else if (format == "json")
        write_json(os);
    else
        throw ConfigError("table: unknown format '" + format + "'");
}

}  // namespace latdpc
