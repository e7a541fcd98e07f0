#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "smoothperf/sparse_data.hpp"

namespace smoothperf::testing {

using Rng = std::mt19937_64;

/// n examples over p features with entries uniform in [-1, 1], each present
/// with probability `density`. At least one example of each class.
Dataset random_dataset(Rng& rng, std::size_t n, std::size_t p, double density = 0.7);

/// Like random_dataset but with exactly n_plus positives first, then negatives.
Dataset random_dataset(Rng& rng, std::size_t n_plus, std::size_t n_minus, std::size_t p,
                       double density);

/// Uniform sample from the unit ball in R^p.
std::vector<double> random_unit_ball(Rng& rng, std::size_t p);

/// Two overlapping Gaussian classes with dense features, class means at
/// +/- `separation` / sqrt(p) along every axis; positive rate `pos_rate`.
Dataset gaussian_classes(Rng& rng, std::size_t n, std::size_t p, double separation = 1.0,
                         double pos_rate = 0.3);

/// Single-feature two-point set: x1 = [1] positive, x2 = [-1] negative.
Dataset two_point_dataset();

}  // namespace smoothperf::testing
