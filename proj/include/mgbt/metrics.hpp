#pragma once

#include <span>

namespace mgbt {

/// Mean binary cross entropy -[y ln p + (1-y) ln(1-p)]; inputs must be
/// probabilities already clamped away from 0/1.
double logloss(std::span<const double> probabilities, std::span<const double> labels);

/// Fraction of rows where (p >= threshold) matches the 0/1 label.
double accuracy(std::span<const double> probabilities, std::span<const double> labels,
                double threshold = 0.5);

/// Area under the ROC curve via the Mann-Whitney rank statistic, ties
/// credited 0.5. Throws if only one class is present.
double auc(std::span<const double> scores, std::span<const double> labels);

/// Mean squared error.
double mse(std::span<const double> predictions, std::span<const double> targets);

}  // namespace mgbt
