#pragma once

// Pearson and Spearman correlation between objective scores and MOS.
// Spearman is Pearson over fractional (tie-averaged) ranks. Fewer than three
// points or a constant vector is refused rather than answered.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "metricfuse/error.hpp"

namespace metricfuse {

struct PairedSample {
    std::vector<double> objective;
    std::vector<double> subjective;
};

constexpr double kVarianceTol = 1e-12;

inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) raise(Errc::TooFewPoints, "paired vectors differ in length");
    const std::size_t n = x.size();
    if (n < 3) {
        raise(Errc::TooFewPoints, "need at least 3 points, got " + std::to_string(n));
    }
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double nd = static_cast<double>(n);
    if (sxx / nd < kVarianceTol || syy / nd < kVarianceTol) {
        raise(Errc::DegenerateVariance, "constant vector: correlation undefined");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline double pearson(const PairedSample& p) { return pearson(p.objective, p.subjective); }

// 1-based fractional ranks; tied values share the average of the ranks they
// span ([10,10,30] -> [1.5, 1.5, 3]).
inline std::vector<double> ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> out(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) out[order[k]] = rank;
        i = j + 1;
    }
    return out;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) raise(Errc::TooFewPoints, "paired vectors differ in length");
    if (x.size() < 3) {
        raise(Errc::TooFewPoints, "need at least 3 points, got " + std::to_string(x.size()));
    }
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    return pearson(rx, ry);
}

inline double spearman(const PairedSample& p) { return spearman(p.objective, p.subjective); }

}  // namespace metricfuse
