#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace tlsgap::csv {

// Shortest decimal form that parses back to the same double; locale
// independent, so data files are byte-stable across runs.
std::string fmt(double value);

// Line-oriented writer; creates parent directories on open.
class Writer {
public:
    explicit Writer(const std::filesystem::path& path);

    void comment(const std::string& text);          // "# text"
    void row(const std::vector<std::string>& cells);
    void raw(const std::string& line);

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

// Reads a two-column numeric CSV (skipping '#' comments and an optional
// non-numeric header row). Used for suppression-vs-angle curves.
std::vector<std::pair<double, double>> read_two_columns(const std::filesystem::path& path);

// All-numeric rows of a CSV, comments and non-numeric header skipped.
std::vector<std::vector<double>> read_numeric_rows(const std::filesystem::path& path);

} // namespace tlsgap::csv
