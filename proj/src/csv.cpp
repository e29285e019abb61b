#include "tlsgap/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace tlsgap::csv {

std::string fmt(double value) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

Writer::Writer(const std::filesystem::path& path) : path_(path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary); // binary: no platform newline surprises
    if (!out_)
        throw std::runtime_error("csv: cannot open " + path.string() + " for writing");
}

void Writer::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void Writer::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void Writer::raw(const std::string& line) { out_ << line << '\n'; }

std::vector<std::pair<double, double>> read_two_columns(const std::filesystem::path& path) {
    std::vector<std::pair<double, double>> rows;
    for (const auto& r : read_numeric_rows(path))
        if (r.size() >= 2) rows.emplace_back(r[0], r[1]);
    if (rows.empty())
        throw std::runtime_error("csv: no two-column numeric rows in " + path.string());
    return rows;
}

std::vector<std::vector<double>> read_numeric_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        ss.clear();
        std::string rest;
        if (ss >> rest) continue; // header or mixed row
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw std::runtime_error("csv: no numeric rows in " + path.string());
    return rows;
}

} // namespace tlsgap::csv
