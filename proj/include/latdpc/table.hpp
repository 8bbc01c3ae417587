// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace latdpc {

// %.17g rendering: lossless double round-trip, byte-stable across reruns.
std::string format_g17(double v);

// Numeric result table with ordered metadata. Optional row labels appear as
// a leading column. CSV carries metadata as '#'-prefixed comment lines; JSON
// is one object with "metadata" and "rows".
struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> row_labels;  // empty or one label per row
    std::vector<std::pair<std::string, std::string>> metadata;
    std::string label_header = "check";

    void add_meta(const std::string& key, const std::string& value) {
        metadata.emplace_back(key, value);
    }
    void add_row(std::vector<double> row) { rows.push_back(std::move(row)); }

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;
    void write(std::ostream& os, const std::string& format) const;
};

}  // namespace latdpc
