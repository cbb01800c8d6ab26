#include <cmath>
#include <vector>

#include "doctest.h"
#include "mgbt/metrics.hpp"
#include "mgbt/objective.hpp"
#include "mgbt/rng.hpp"
#include "support/oracles.hpp"

using namespace mgbt;

TEST_CASE("sigmoid basics") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(1000.0) == 1.0 - 1e-15);
    CHECK(sigmoid(-1000.0) == 1e-15);
    CHECK(sigmoid(-1.7) == doctest::Approx(1.0 - sigmoid(1.7)).epsilon(1e-12));
}

TEST_CASE("grad_hess closed forms") {
    const GradHess b = grad_hess(ObjectiveKind::kBinaryLogloss, 0.0, 1.0);
    CHECK(b.grad == doctest::Approx(-0.5));
    CHECK(b.hess == doctest::Approx(0.25));
    const GradHess l = grad_hess(ObjectiveKind::kL2, 0.3, 0.7);
    CHECK(l.grad == doctest::Approx(-0.4));
    CHECK(l.hess == 1.0);
}

TEST_CASE("binary gradients match finite differences of the logloss") {
    const auto fd = oracle::logloss_finite_diff(0.8, 0.0);
    const GradHess gh = grad_hess(ObjectiveKind::kBinaryLogloss, 0.8, 0.0);
    CHECK(gh.grad == doctest::Approx(fd.grad).epsilon(1e-6));
    CHECK(gh.hess == doctest::Approx(fd.hess).epsilon(1e-5));

    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const double margin = rng.uniform(-4.0, 4.0);
        const double label = rng.next_below(2) ? 1.0 : 0.0;
        // Wider step for the second difference: the squared step must stay
        // well clear of double rounding.
        const auto ref_g = oracle::logloss_finite_diff(margin, label, 1e-5);
        const auto ref_h = oracle::logloss_finite_diff(margin, label, 1e-4);
        const GradHess g = grad_hess(ObjectiveKind::kBinaryLogloss, margin, label);
        CHECK(std::abs(g.grad - ref_g.grad) <= 1e-5);
        CHECK(std::abs(g.hess - ref_h.hess) <= 1e-5);
    }
}

TEST_CASE("logloss values") {
    CHECK(logloss(std::vector<double>{0.5}, std::vector<double>{1.0}) ==
          doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(logloss(std::vector<double>{1.0 - 1e-15}, std::vector<double>{1.0}) ==
          doctest::Approx(0.0).epsilon(1e-9));
    // Direct formula evaluation: -(ln 0.9 + ln 0.9)/2.
    const double expected = -(std::log(0.9) + std::log(0.9)) / 2.0;
    CHECK(logloss(std::vector<double>{0.9, 0.1}, std::vector<double>{1.0, 0.0}) ==
          doctest::Approx(expected).epsilon(1e-9));
    CHECK(expected == doctest::Approx(0.105361).epsilon(1e-5));
    CHECK_THROWS_AS(logloss(std::vector<double>{0.5}, std::vector<double>{1.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("logloss over constant predictors is minimized at the label mean") {
    const std::vector<double> labels = {1, 0, 0, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0};
    double mean = 0.0;
    for (double y : labels) mean += y;
    mean /= static_cast<double>(labels.size());
    double best_p = -1.0, best = 1e300;
    for (int i = 1; i < 1000; ++i) {
        const double p = i / 1000.0;
        const std::vector<double> probs(labels.size(), p);
        const double value = logloss(probs, labels);
        if (value < best) {
            best = value;
            best_p = p;
        }
    }
    CHECK(best_p == doctest::Approx(mean).epsilon(1e-3));
}

TEST_CASE("accuracy thresholding is inclusive") {
    CHECK(accuracy(std::vector<double>{0.9, 0.2}, std::vector<double>{1.0, 0.0}) == 1.0);
    CHECK(accuracy(std::vector<double>{0.4}, std::vector<double>{1.0}) == 0.0);
    CHECK(accuracy(std::vector<double>{0.5}, std::vector<double>{1.0}) == 1.0);
}

TEST_CASE("auc reference values") {
    const std::vector<double> scores = {0.1, 0.4, 0.35, 0.8};
    const std::vector<double> labels = {0, 0, 1, 1};
    CHECK(oracle::brute_force_auc(scores, labels) == doctest::Approx(0.75));
    CHECK(auc(scores, labels) == doctest::Approx(0.75));
    CHECK(auc(std::vector<double>{1, 2, 3, 4}, std::vector<double>{0, 0, 1, 1}) == 1.0);
    CHECK(auc(std::vector<double>{2, 2, 2, 2}, std::vector<double>{0, 1, 0, 1}) == 0.5);
    CHECK_THROWS_AS(auc(std::vector<double>{1, 2}, std::vector<double>{1, 1}),
                    std::invalid_argument);
}

TEST_CASE("auc rank statistic equals pairwise brute force on random vectors") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = 2 + rng.next_below(49);
        std::vector<double> scores(n), labels(n);
        bool has_pos = false, has_neg = false;
        for (size_t i = 0; i < n; ++i) {
            // Coarse grid of score values to generate plenty of ties.
            scores[i] = static_cast<double>(rng.next_below(8)) / 4.0;
            labels[i] = rng.next_below(2) ? 1.0 : 0.0;
            (labels[i] == 1.0 ? has_pos : has_neg) = true;
        }
        if (!has_pos || !has_neg) continue;
        CHECK(auc(scores, labels) == oracle::brute_force_auc(scores, labels));
    }
}
