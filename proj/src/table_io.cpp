#include "qthermo/table_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "qthermo/errors.hpp"

namespace qthermo {

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw IoError("table has no column '" + name + "'");
}

bool Table::has_column(const std::string& name) const {
    for (const auto& c : columns) {
        if (c == name) return true;
    }
    return false;
}

std::vector<double> Table::column(const std::string& name) const {
    const std::size_t idx = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[idx]);
    return out;
}

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
        throw IoError("row has " + std::to_string(row.size()) + " values, table has " +
                      std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const Table& table) {
    for (const auto& [k, v] : table.metadata) {
        // keep each entry on one line
        std::string flat = v;
        for (char& ch : flat) {
            if (ch == '\n' || ch == '\r') ch = ' ';
        }
        out << "# " << k << ": " << flat << '\n';
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& r : table.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table) {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.metadata) {
        auto parsed = nlohmann::ordered_json::parse(v, nullptr, false);
        meta[k] = (!parsed.is_discarded() && parsed.is_structured()) ? parsed : nlohmann::ordered_json(v);
    }
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : table.rows) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (double v : r) row.push_back(std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr));
        rows.push_back(std::move(row));
    }
    nlohmann::ordered_json doc;
    doc["metadata"] = std::move(meta);
    doc["columns"] = table.columns;
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

void write_table(std::ostream& out, const Table& table, OutputFormat format) {
    if (format == OutputFormat::json) {
        write_json(out, table);
    } else {
        write_csv(out, table);
    }
}

void write_table(const std::string& path, const Table& table, OutputFormat format) {
    if (path.empty() || path == "-") {
        write_table(std::cout, table, format);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_table(out, table, format);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::pair<std::string_view, std::size_t>> split_fields(std::string_view line) {
    std::vector<std::pair<std::string_view, std::size_t>> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? line.size() : comma;
        out.emplace_back(line.substr(start, end - start), start + 1);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

Table read_csv(std::istream& in, const std::string& source) {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    auto where = [&](std::size_t col) {
        return source + ":" + std::to_string(lineno) + ":" + std::to_string(col) + ": ";
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        if (view.front() == '#') {
            if (have_header) continue;
            std::string_view body = trim(view.substr(1));
            const auto colon = body.find(':');
            if (colon != std::string_view::npos) {
                t.metadata.emplace_back(std::string(trim(body.substr(0, colon))), std::string(trim(body.substr(colon + 1))));
            }
            continue;
        }
        const auto fields = split_fields(view);
        if (!have_header) {
            for (const auto& [f, col] : fields) {
                const auto name = trim(f);
                if (name.empty()) throw IoError(where(col) + "empty column name");
                t.columns.emplace_back(name);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != t.columns.size()) {
            throw IoError(where(1) + "expected " + std::to_string(t.columns.size()) + " fields, found " +
                          std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& [f, col] : fields) {
            const auto s = trim(f);
            double v{};
            const char* first = s.data();
            const char* last = s.data() + s.size();
            if (!s.empty() && *first == '+') ++first;
            const auto res = std::from_chars(first, last, v);
            if (s.empty() || res.ec != std::errc() || res.ptr != last) {
                throw IoError(where(col) + "cannot parse '" + std::string(s) + "' as a number (column '" +
                              t.columns[row.size()] + "')");
            }
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw IoError(source + ": no header row");
    return t;
}

Table read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_csv(in, path);
}

}  // namespace qthermo
