// table_io.hpp: tabular output (CSV with a commented metadata header, or JSON)
// and a strict CSV reader for the fit command.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qthermo/config.hpp"

namespace qthermo {

struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    // Throws IoError when the column is absent.
    std::size_t column_index(const std::string& name) const;
    bool has_column(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
    void add_row(std::vector<double> row);
};

// Lines: "# key: value" metadata, one header row, then values at %.17g.
// Non-finite values are written as nan / inf / -inf.
void write_csv(std::ostream& out, const Table& table);

// {"metadata": {...}, "columns": [...], "rows": [[...], ...]}; non-finite values become null.
void write_json(std::ostream& out, const Table& table);

void write_table(std::ostream& out, const Table& table, OutputFormat format);

// Empty path writes to stdout.
void write_table(const std::string& path, const Table& table, OutputFormat format);

// Errors name the source, line and column.
Table read_csv(std::istream& in, const std::string& source = "<input>");
Table read_csv_file(const std::string& path);

std::string format_double(double v);

}  // namespace qthermo
