#include "rvflight/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "rvflight/errors.hpp"

namespace rvflight {

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

void write_trajectory_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
    for (std::size_t i = 0; i < kColumnCount; ++i) {
        out << (i ? "," : "") << kColumnNames[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < kColumnCount; ++i) {
            if (i) out << ',';
            if (row[i]) out << format_double(*row[i]);
        }
        out << '\n';
    }
}

void write_trajectory_csv(const std::string& path, const std::vector<CsvRow>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    write_trajectory_csv(out, rows);
    if (!out) throw Error("write to '" + path + "' failed");
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace

std::vector<CsvRow> read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DomainError("empty trajectory file");
    const auto header = split(line);
    if (header.size() != kColumnCount) throw DomainError("unexpected trajectory header");
    for (std::size_t i = 0; i < kColumnCount; ++i) {
        if (header[i] != kColumnNames[i]) throw DomainError("unexpected column '" + std::string(header[i]) + "'");
    }
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != kColumnCount) throw DomainError("wrong cell count in trajectory row");
        CsvRow row;
        for (std::size_t i = 0; i < kColumnCount; ++i) {
            if (cells[i].empty()) continue;
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(cells[i].data(), cells[i].data() + cells[i].size(), value);
            if (ec != std::errc() || ptr != cells[i].data() + cells[i].size()) {
                throw DomainError("unparseable cell '" + std::string(cells[i]) + "'");
            }
            row[i] = value;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<CsvRow> read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return read_trajectory_csv(in);
}

}  // namespace rvflight
