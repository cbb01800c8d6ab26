#include "mgbt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mgbt {

namespace {
void check_lengths(size_t a, size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": length mismatch");
    if (a == 0) throw std::invalid_argument(std::string(what) + ": empty input");
}
}  // namespace

double logloss(std::span<const double> probabilities, std::span<const double> labels) {
    check_lengths(probabilities.size(), labels.size(), "logloss");
    double sum = 0.0;
    for (size_t i = 0; i < probabilities.size(); ++i) {
        const double p = probabilities[i];
        sum -= labels[i] * std::log(p) + (1.0 - labels[i]) * std::log(1.0 - p);
    }
    return sum / static_cast<double>(probabilities.size());
}

double accuracy(std::span<const double> probabilities, std::span<const double> labels,
                double threshold) {
    check_lengths(probabilities.size(), labels.size(), "accuracy");
    size_t hits = 0;
    for (size_t i = 0; i < probabilities.size(); ++i) {
        const double predicted = probabilities[i] >= threshold ? 1.0 : 0.0;
        if (predicted == labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(probabilities.size());
}

double auc(std::span<const double> scores, std::span<const double> labels) {
    check_lengths(scores.size(), labels.size(), "auc");
    const size_t n = scores.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return scores[a] < scores[b]; });

    // Mid-ranks for tied scores, 1-based.
    double rank_sum_pos = 0.0;
    size_t n_pos = 0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
        for (size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1.0) {
                rank_sum_pos += mid_rank;
                ++n_pos;
            }
        }
        i = j;
    }
    const size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw std::invalid_argument("auc: undefined with a single class");
    }
    const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double mse(std::span<const double> predictions, std::span<const double> targets) {
    check_lengths(predictions.size(), targets.size(), "mse");
    double sum = 0.0;
    for (size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - targets[i];
        sum += d * d;
    }
    return sum / static_cast<double>(predictions.size());
}

}  // namespace mgbt
