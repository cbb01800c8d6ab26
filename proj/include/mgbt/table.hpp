#pragma once

#include <string>
#include <vector>

namespace mgbt {

/// Column-oriented table of text cells as read from delimiter-separated
/// input. Numeric interpretation happens downstream once a schema is known.
struct RawTable {
    std::vector<std::string> column_names;
    std::vector<std::vector<std::string>> columns;

    size_t row_count() const { return columns.empty() ? 0 : columns.front().size(); }
    size_t column_count() const { return columns.size(); }

    bool has_column(const std::string& name) const;
    size_t column_index(const std::string& name) const;  // throws if absent
    const std::vector<std::string>& column(const std::string& name) const;
};

/// Reads delimiter-separated text. Cells equal to `missing_token` are
/// replaced by the sentinel category "missing". Rows whose cell count
/// differs from the header/first row produce a parse error naming the row.
RawTable load_csv(const std::string& path, bool has_header = true,
                  const std::string& missing_token = "?", char delimiter = ',');

/// Same as load_csv but over an in-memory document (used by tests).
RawTable parse_csv(const std::string& text, bool has_header = true,
                   const std::string& missing_token = "?", char delimiter = ',');

/// Parses a column as numeric; throws naming the column on bad cells.
std::vector<double> numeric_column(const RawTable& table, const std::string& name);

}  // namespace mgbt
