#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "scp/errors.hpp"
#include "scp/labeling.hpp"

namespace scp {

// Shortest round-trip decimal form; keeps file output byte-stable across runs.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw DataError("not a number: '" + s + "'");
    return v;
}

// Feature rows with binary labels. row_ids carry provenance across
// resampling: non-negative ids are original row indices, -1 marks synthetic
// rows. Empty row_ids means provenance is not tracked.
struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    std::vector<long long> row_ids;

    std::size_t size() const { return rows.size(); }
    std::size_t dim() const { return feature_names.size(); }

    void validate() const {
        if (labels.size() != rows.size()) throw DataError("dataset: labels/rows length mismatch");
        if (!row_ids.empty() && row_ids.size() != rows.size())
            throw DataError("dataset: row_ids length mismatch");
        for (const auto& r : rows)
            if (r.size() != dim()) throw DataError("dataset: row dimension mismatch");
    }

    void tag_rows() {
        row_ids.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            row_ids[i] = static_cast<long long>(i);
    }

    Dataset subset(const std::vector<std::size_t>& indices) const {
        Dataset out;
        out.feature_names = feature_names;
        for (std::size_t i : indices) {
            out.rows.push_back(rows[i]);
            out.labels.push_back(labels[i]);
            if (!row_ids.empty()) out.row_ids.push_back(row_ids[i]);
        }
        return out;
    }

    ClassCounts class_counts() const { return count_classes(labels); }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

// CSV layout: optional '#' comment lines, then a header of feature names with
// a final 'y' column, then one row per example.
inline void write_dataset_csv(const Dataset& ds, std::ostream& os,
                              const std::vector<std::string>& comments = {}) {
    ds.validate();
    for (const auto& c : comments) os << "# " << c << "\n";
    for (const auto& name : ds.feature_names) os << name << ",";
    os << "y\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (double v : ds.rows[i]) os << format_double(v) << ",";
        os << ds.labels[i] << "\n";
    }
}

inline void write_dataset_csv(const Dataset& ds, const std::string& path,
                              const std::vector<std::string>& comments = {}) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    write_dataset_csv(ds, f, comments);
}

inline Dataset read_dataset_csv(std::istream& is, const std::string& origin = "<stream>") {
    Dataset ds;
    std::string line;
    long long line_no = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto fields = detail::split_csv_line(line);
        if (!have_header) {
            if (fields.size() < 2 || fields.back() != "y")
                throw DataError(origin + ":" + std::to_string(line_no) +
                                ": header must list feature names ending in 'y'");
            fields.pop_back();
            ds.feature_names = fields;
            have_header = true;
            continue;
        }
        if (fields.size() != ds.dim() + 1)
            throw DataError(origin + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(ds.dim() + 1) + " fields, got " +
                            std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(ds.dim());
        for (std::size_t j = 0; j < ds.dim(); ++j) {
            double v;
            try {
                v = parse_double(fields[j]);
            } catch (const DataError& e) {
                throw DataError(origin + ":" + std::to_string(line_no) + ": " + e.what());
            }
            if (!std::isfinite(v))
                throw DataError(origin + ":" + std::to_string(line_no) +
                                ": non-finite feature value");
            row.push_back(v);
        }
        const std::string& ls = fields.back();
        if (ls != "0" && ls != "1")
            throw DataError(origin + ":" + std::to_string(line_no) +
                            ": label must be 0 or 1, got '" + ls + "'");
        ds.rows.push_back(std::move(row));
        ds.labels.push_back(ls == "1" ? 1 : 0);
    }
    if (!have_header) throw DataError(origin + ": empty dataset file");
    return ds;
}

inline Dataset read_dataset_csv_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open: " + path);
    return read_dataset_csv(f, path);
}

}  // namespace scp
