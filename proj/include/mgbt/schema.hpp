#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mgbt/table.hpp"

namespace mgbt {

enum class FeatureKind { kContinuous, kCategorical };

/// Per-feature metadata: kind, monotone direction (-1/0/+1, nonzero only
/// on continuous features), plus the label column name.
struct FeatureSchema {
    std::vector<std::string> feature_names;
    std::vector<FeatureKind> kinds;
    std::vector<int> monotone_directions;
    std::string label_name = "label";

    size_t feature_count() const { return feature_names.size(); }
    size_t feature_index(const std::string& name) const;  // throws if absent
    void validate(const RawTable& table) const;
};

/// Applies the census-income preparation recipe: drops `education`
/// (bijective with education_num), maps income to a 0/1 `label` column
/// (">50K" / ">50K." become 1), and marks age, education_num and
/// hours_per_week as monotone increasing.
std::pair<RawTable, FeatureSchema> preprocess_adult(const RawTable& raw);

/// True when the table carries the 14 census columns plus income.
bool looks_like_adult(const RawTable& table);

/// Expands every categorical feature with k distinct values into k binary
/// columns named `<feature>=<value>` (values sorted for determinism).
/// Continuous features pass through with their monotone directions.
std::pair<RawTable, FeatureSchema> one_hot_encode(const RawTable& raw,
                                                  const FeatureSchema& schema);

/// Infers a schema for a generic numeric / mixed table: columns that parse
/// fully as numbers are continuous, the rest categorical; all directions 0.
FeatureSchema infer_schema(const RawTable& table, const std::string& label_name);

/// Applies a JSON override document mapping feature name ->
/// {"kind": "continuous"|"categorical", "monotone_direction": -1|0|1}.
void apply_schema_override(FeatureSchema* schema, const std::string& json_text);

}  // namespace mgbt
