#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smoothperf {

/// Dense weight vector, one entry per feature.
using Weights = std::vector<double>;

struct SparseEntry {
  std::size_t index;  // 0-based feature id
  double value;
};

/// Sparse feature vector with strictly increasing indices and finite,
/// nonzero values. The constructor enforces both.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::vector<SparseEntry> entries);

  std::span<const SparseEntry> entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// One past the largest index, or 0 when empty.
  std::size_t dimension() const {
    return entries_.empty() ? 0 : entries_.back().index + 1;
  }

  double squared_norm() const;

 private:
  std::vector<SparseEntry> entries_;
};

/// Labelled examples partitioned into positives (y = +1) and negatives
/// (y = -1). Immutable once built.
class Dataset {
 public:
  Dataset() = default;

  /// `num_features` is a lower bound on the feature count; the actual
  /// count is raised to cover every index present in `examples`.
  Dataset(std::vector<SparseVector> examples, std::vector<int> labels,
          std::size_t num_features = 0);

  std::size_t size() const { return examples_.size(); }
  std::size_t num_features() const { return num_features_; }

  const SparseVector& example(std::size_t i) const { return examples_[i]; }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }
  std::span<const SparseVector> examples() const { return examples_; }
  /// Entries of example i from a contiguous copy; preferred in hot loops.
  std::span<const SparseEntry> row(std::size_t i) const {
    return std::span<const SparseEntry>(entries_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }

  std::span<const std::size_t> positives() const { return pos_idx_; }
  std::span<const std::size_t> negatives() const { return neg_idx_; }
  std::size_t n_plus() const { return pos_idx_.size(); }
  std::size_t n_minus() const { return neg_idx_.size(); }

  /// Throws std::invalid_argument unless both classes are present.
  void require_both_classes() const;

 private:
  std::vector<SparseVector> examples_;
  std::vector<SparseEntry> entries_;
  std::vector<std::size_t> offsets_{0};
  std::vector<int> labels_;
  std::vector<std::size_t> pos_idx_;
  std::vector<std::size_t> neg_idx_;
  std::size_t num_features_ = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads SVMlight/LibSVM text: `<label> <idx>:<val> ...` with 1-based
/// indices. Labels must be "+1", "1" or "-1". Lines starting with '#' and
/// blank lines are skipped. Zero-valued entries are dropped.
Dataset parse_svmlight(std::istream& in);
Dataset parse_svmlight(std::string_view text);
Dataset read_svmlight_file(const std::filesystem::path& path);

/// Writes values with 17 significant digits so a parse round-trip is exact.
void write_svmlight(std::ostream& out, const Dataset& d);

/// Throws std::out_of_range if an index of x is not below w.size().
double dot(std::span<const double> w, const SparseVector& x);
double dot(std::span<const double> w, std::span<const SparseEntry> x);

/// y += a * x. Same range check as dot.
void add_scaled(std::span<double> y, double a, const SparseVector& x);
void add_scaled(std::span<double> y, double a, std::span<const SparseEntry> x);

std::vector<double> scores(std::span<const double> w, const Dataset& d);

/// Largest Euclidean norm over the examples.
double radius(const Dataset& d);

}  // namespace smoothperf
