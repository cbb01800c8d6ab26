#include "mgbt/table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mgbt {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delimiter)) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == delimiter) cells.push_back("");
    return cells;
}

}  // namespace

bool RawTable::has_column(const std::string& name) const {
    return std::find(column_names.begin(), column_names.end(), name) != column_names.end();
}

size_t RawTable::column_index(const std::string& name) const {
    auto it = std::find(column_names.begin(), column_names.end(), name);
    if (it == column_names.end()) {
        throw std::invalid_argument("table has no column named '" + name + "'");
    }
    return static_cast<size_t>(it - column_names.begin());
}

const std::vector<std::string>& RawTable::column(const std::string& name) const {
    return columns[column_index(name)];
}

RawTable parse_csv(const std::string& text, bool has_header, const std::string& missing_token,
                   char delimiter) {
    RawTable table;
    std::stringstream ss(text);
    std::string line;
    size_t line_no = 0;
    size_t data_row = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_line(line, delimiter);
        if (table.column_names.empty()) {
            if (has_header) {
                table.column_names = cells;
            } else {
                table.column_names.resize(cells.size());
                for (size_t c = 0; c < cells.size(); ++c) {
                    table.column_names[c] = "c" + std::to_string(c);
                }
            }
            table.columns.resize(table.column_names.size());
            if (has_header) continue;
        }
        if (cells.size() != table.column_names.size()) {
            throw std::runtime_error("row " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(table.column_names.size()));
        }
        for (size_t c = 0; c < cells.size(); ++c) {
            table.columns[c].push_back(cells[c] == missing_token ? "missing" : cells[c]);
        }
        ++data_row;
    }
    (void)data_row;
    return table;
}

RawTable load_csv(const std::string& path, bool has_header, const std::string& missing_token,
                  char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), has_header, missing_token, delimiter);
}

std::vector<double> numeric_column(const RawTable& table, const std::string& name) {
    const auto& col = table.column(name);
    std::vector<double> out(col.size());
    for (size_t i = 0; i < col.size(); ++i) {
        const std::string& cell = col[i];
        char* end = nullptr;
        out[i] = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0') {
            throw std::runtime_error("column '" + name + "' row " + std::to_string(i + 1) +
                                     ": not numeric: '" + cell + "'");
        }
    }
    return out;
}

}  // namespace mgbt
