#pragma once

#include <span>

#include "smoothperf/smoothing.hpp"

namespace smoothperf {

/// Precision among the n+ highest-scoring examples (equal to recall at that
/// cutoff). Equal scores rank the lower index first. Throws if there are no
/// positives.
double prbep_metric(std::span<const double> scores, std::span<const int> labels);

/// Fraction of (positive, negative) pairs ranked correctly, ties counting 1/2.
/// Throws unless both classes are present.
double rocarea_metric(std::span<const double> scores, std::span<const int> labels);

/// The metric that matches a training loss.
double performance_metric(Loss loss, std::span<const double> scores, std::span<const int> labels);

}  // namespace smoothperf
