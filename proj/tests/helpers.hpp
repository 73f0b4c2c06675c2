#pragma once

// Shared test utilities: seeded path generation and comparison metrics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sigkit/kernels.hpp"

namespace testutil {

/// Random-walk paths with standard-normal increments, deterministic per seed.
inline sigkit::PathBatch random_paths(std::uint64_t seed, std::size_t batch, std::size_t len,
                                      int dim, double step_scale = 1.0) {
    sigkit::PathBatch paths;
    paths.batch = batch;
    paths.len = len;
    paths.dim = dim;
    paths.values.assign(batch * len * static_cast<std::size_t>(dim), 0.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t d = static_cast<std::size_t>(dim);
    for (std::size_t b = 0; b < batch; ++b) {
        double* row = paths.values.data() + b * len * d;
        for (std::size_t c = 0; c < d; ++c) row[c] = normal(rng);
        for (std::size_t t = 1; t < len; ++t) {
            for (std::size_t c = 0; c < d; ++c) {
                row[t * d + c] = row[(t - 1) * d + c] + step_scale * normal(rng);
            }
        }
    }
    return paths;
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// max |a-b| / (1 + max |a|): absolute near zero, relative at scale.
inline double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    return max_abs_diff(a, b) / (1.0 + max_abs(a));
}

}  // namespace testutil
