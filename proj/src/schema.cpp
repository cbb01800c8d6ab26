#include "mgbt/schema.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace mgbt {

namespace {

struct AdultColumn {
    const char* name;
    FeatureKind kind;
    int direction;
};

// Column roster of the 1994 census-income extract; age, education_num and
// hours_per_week are treated as monotone increasing in the label.
constexpr AdultColumn kAdultColumns[] = {
    {"age", FeatureKind::kContinuous, +1},
    {"workclass", FeatureKind::kCategorical, 0},
    {"fnlwgt", FeatureKind::kContinuous, 0},
    {"education", FeatureKind::kCategorical, 0},
    {"education_num", FeatureKind::kContinuous, +1},
    {"marital_status", FeatureKind::kCategorical, 0},
    {"occupation", FeatureKind::kCategorical, 0},
    {"relationship", FeatureKind::kCategorical, 0},
    {"race", FeatureKind::kCategorical, 0},
    {"sex", FeatureKind::kCategorical, 0},
    {"capital_gain", FeatureKind::kContinuous, 0},
    {"capital_loss", FeatureKind::kContinuous, 0},
    {"hours_per_week", FeatureKind::kContinuous, +1},
    {"native_country", FeatureKind::kCategorical, 0},
};

bool parses_numeric(const std::vector<std::string>& col) {
    for (const auto& cell : col) {
        char* end = nullptr;
        std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0') return false;
    }
    return !col.empty();
}

}  // namespace

size_t FeatureSchema::feature_index(const std::string& name) const {
    auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) {
        throw std::invalid_argument("schema has no feature named '" + name + "'");
    }
    return static_cast<size_t>(it - feature_names.begin());
}

void FeatureSchema::validate(const RawTable& table) const {
    for (const auto& name : feature_names) {
        if (!table.has_column(name)) {
            throw std::invalid_argument("schema feature '" + name + "' missing from table");
        }
    }
    for (size_t f = 0; f < feature_count(); ++f) {
        if (monotone_directions[f] != 0 && kinds[f] != FeatureKind::kContinuous) {
            throw std::invalid_argument("monotone direction on categorical feature '" +
                                        feature_names[f] + "'");
        }
    }
}

bool looks_like_adult(const RawTable& table) {
    for (const auto& col : kAdultColumns) {
        if (!table.has_column(col.name)) return false;
    }
    return table.has_column("income") || table.has_column("label");
}

std::pair<RawTable, FeatureSchema> preprocess_adult(const RawTable& raw) {
    for (const auto& col : kAdultColumns) {
        if (!raw.has_column(col.name)) {
            throw std::invalid_argument("adult table missing expected column '" +
                                        std::string(col.name) + "'");
        }
    }
    const bool has_income = raw.has_column("income");
    if (!has_income && !raw.has_column("label")) {
        throw std::invalid_argument("adult table missing expected column 'income'");
    }

    RawTable out;
    FeatureSchema schema;
    schema.label_name = "label";
    for (const auto& col : kAdultColumns) {
        if (std::string(col.name) == "education") continue;  // bijective with education_num
        out.column_names.push_back(col.name);
        out.columns.push_back(raw.column(col.name));
        schema.feature_names.push_back(col.name);
        schema.kinds.push_back(col.kind);
        schema.monotone_directions.push_back(col.direction);
    }

    std::vector<std::string> label(raw.row_count());
    if (has_income) {
        const auto& income = raw.column("income");
        for (size_t i = 0; i < income.size(); ++i) {
            label[i] = (income[i] == ">50K" || income[i] == ">50K.") ? "1" : "0";
        }
    } else {
        label = raw.column("label");
    }
    out.column_names.push_back("label");
    out.columns.push_back(std::move(label));
    return {std::move(out), std::move(schema)};
}

std::pair<RawTable, FeatureSchema> one_hot_encode(const RawTable& raw,
                                                  const FeatureSchema& schema) {
    schema.validate(raw);
    RawTable out;
    FeatureSchema out_schema;
    out_schema.label_name = schema.label_name;

    for (size_t f = 0; f < schema.feature_count(); ++f) {
        const auto& name = schema.feature_names[f];
        const auto& col = raw.column(name);
        if (schema.kinds[f] == FeatureKind::kContinuous) {
            out.column_names.push_back(name);
            out.columns.push_back(col);
            out_schema.feature_names.push_back(name);
            out_schema.kinds.push_back(FeatureKind::kContinuous);
            out_schema.monotone_directions.push_back(schema.monotone_directions[f]);
            continue;
        }
        std::set<std::string> values(col.begin(), col.end());
        for (const auto& value : values) {
            std::vector<std::string> bits(col.size());
            for (size_t i = 0; i < col.size(); ++i) bits[i] = (col[i] == value) ? "1" : "0";
            out.column_names.push_back(name + "=" + value);
            out.columns.push_back(std::move(bits));
            out_schema.feature_names.push_back(out.column_names.back());
            out_schema.kinds.push_back(FeatureKind::kContinuous);
            out_schema.monotone_directions.push_back(0);
        }
    }

    if (raw.has_column(schema.label_name)) {
        out.column_names.push_back(schema.label_name);
        out.columns.push_back(raw.column(schema.label_name));
    }
    return {std::move(out), std::move(out_schema)};
}

FeatureSchema infer_schema(const RawTable& table, const std::string& label_name) {
    if (!table.has_column(label_name)) {
        throw std::invalid_argument("label column '" + label_name + "' missing from table");
    }
    FeatureSchema schema;
    schema.label_name = label_name;
    for (size_t c = 0; c < table.column_count(); ++c) {
        if (table.column_names[c] == label_name) continue;
        schema.feature_names.push_back(table.column_names[c]);
        schema.kinds.push_back(parses_numeric(table.columns[c]) ? FeatureKind::kContinuous
                                                                : FeatureKind::kCategorical);
        schema.monotone_directions.push_back(0);
    }
    return schema;
}

void apply_schema_override(FeatureSchema* schema, const std::string& json_text) {
    nlohmann::json doc = nlohmann::json::parse(json_text);
    if (!doc.is_object()) throw std::invalid_argument("schema override must be a JSON object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const size_t f = schema->feature_index(it.key());
        const auto& entry = it.value();
        if (entry.contains("kind")) {
            const std::string kind = entry["kind"].get<std::string>();
            if (kind == "continuous") {
                schema->kinds[f] = FeatureKind::kContinuous;
            } else if (kind == "categorical") {
                schema->kinds[f] = FeatureKind::kCategorical;
            } else {
                throw std::invalid_argument("unknown kind '" + kind + "' for feature '" +
                                            it.key() + "'");
            }
        }
        if (entry.contains("monotone_direction")) {
            const int dir = entry["monotone_direction"].get<int>();
            if (dir < -1 || dir > 1) {
                throw std::invalid_argument("monotone_direction must be -1, 0 or 1");
            }
            schema->monotone_directions[f] = dir;
        }
    }
}

}  // namespace mgbt
