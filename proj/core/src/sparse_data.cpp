#include "smoothperf/sparse_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace smoothperf {

SparseVector::SparseVector(std::vector<SparseEntry> entries)
    : entries_(std::move(entries)) {
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (!std::isfinite(entries_[k].value) || entries_[k].value == 0.0) {
      throw std::invalid_argument("sparse vector values must be finite and nonzero");
    }
    if (k > 0 && entries_[k].index <= entries_[k - 1].index) {
      throw std::invalid_argument("sparse vector indices must be strictly increasing");
    }
  }
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.value * e.value;
  return s;
}

Dataset::Dataset(std::vector<SparseVector> examples, std::vector<int> labels,
                 std::size_t num_features)
    : examples_(std::move(examples)),
      labels_(std::move(labels)),
      num_features_(num_features) {
  if (examples_.size() != labels_.size()) {
    throw std::invalid_argument("dataset: example and label counts differ");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == 1) {
      pos_idx_.push_back(i);
    } else if (labels_[i] == -1) {
      neg_idx_.push_back(i);
    } else {
      throw std::invalid_argument("dataset: labels must be +1 or -1");
    }
    num_features_ = std::max(num_features_, examples_[i].dimension());
  }
  std::size_t total = 0;
  for (const auto& x : examples_) total += x.nnz();
  entries_.reserve(total);
  offsets_.reserve(examples_.size() + 1);
  for (const auto& x : examples_) {
    entries_.insert(entries_.end(), x.entries().begin(), x.entries().end());
    offsets_.push_back(entries_.size());
  }
}

void Dataset::require_both_classes() const {
  if (pos_idx_.empty() || neg_idx_.empty()) {
    throw std::invalid_argument("dataset must contain both positive and negative examples");
  }
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

int parse_label(std::string_view tok, std::size_t line_no) {
  if (tok == "+1" || tok == "1") return 1;
  if (tok == "-1") return -1;
  throw ParseError(line_no, "label must be +1 or -1, got '" + std::string(tok) + "'");
}

SparseEntry parse_feature(std::string_view tok, std::size_t line_no) {
  auto colon = tok.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size()) {
    throw ParseError(line_no, "malformed feature '" + std::string(tok) + "'");
  }
  auto idx_part = tok.substr(0, colon);
  auto val_part = tok.substr(colon + 1);
  if (idx_part == "qid") throw ParseError(line_no, "qid fields are not supported");

  std::size_t index = 0;
  auto [iend, iec] = std::from_chars(idx_part.data(), idx_part.data() + idx_part.size(), index);
  if (iec != std::errc() || iend != idx_part.data() + idx_part.size() || index == 0) {
    throw ParseError(line_no, "bad feature index '" + std::string(idx_part) + "'");
  }
  // from_chars rejects a leading '+', which some writers emit.
  if (val_part.front() == '+') val_part.remove_prefix(1);
  double value = 0.0;
  auto [vend, vec] = std::from_chars(val_part.data(), val_part.data() + val_part.size(), value);
  if (vec != std::errc() || vend != val_part.data() + val_part.size()) {
    throw ParseError(line_no, "bad feature value '" + std::string(val_part) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line_no, "non-finite feature value");
  return {index - 1, value};
}

}  // namespace

Dataset parse_svmlight(std::istream& in) {
  std::vector<SparseVector> examples;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;

    labels.push_back(parse_label(tokens.front(), line_no));
    std::vector<SparseEntry> entries;
    entries.reserve(tokens.size() - 1);
    std::size_t next_min = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      SparseEntry e = parse_feature(tokens[t], line_no);
      if (e.index < next_min) {
        throw ParseError(line_no, "feature indices must be strictly increasing");
      }
      next_min = e.index + 1;
      if (e.value != 0.0) entries.push_back(e);
    }
    examples.emplace_back(std::move(entries));
  }
  return Dataset(std::move(examples), std::move(labels));
}

Dataset parse_svmlight(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_svmlight(in);
}

Dataset read_svmlight_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_svmlight(in);
}

void write_svmlight(std::ostream& out, const Dataset& d) {
  char buf[64];
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << (d.label(i) > 0 ? "+1" : "-1");
    for (const auto& e : d.example(i).entries()) {
      std::snprintf(buf, sizeof buf, " %zu:%.17g", e.index + 1, e.value);
      out << buf;
    }
    out << '\n';
  }
}

// Entries are sorted by index, so the last one bounds the dimension.
double dot(std::span<const double> w, std::span<const SparseEntry> x) {
  if (!x.empty() && x.back().index >= w.size()) {
    throw std::out_of_range("feature index exceeds weight dimension");
  }
  double s = 0.0;
  for (const auto& e : x) s += w[e.index] * e.value;
  return s;
}

double dot(std::span<const double> w, const SparseVector& x) { return dot(w, x.entries()); }

void add_scaled(std::span<double> y, double a, std::span<const SparseEntry> x) {
  if (!x.empty() && x.back().index >= y.size()) {
    throw std::out_of_range("feature index exceeds weight dimension");
  }
  if (a == 0.0) return;
  for (const auto& e : x) y[e.index] += a * e.value;
}

void add_scaled(std::span<double> y, double a, const SparseVector& x) { add_scaled(y, a, x.entries()); }

std::vector<double> scores(std::span<const double> w, const Dataset& d) {
  std::vector<double> s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s[i] = dot(w, d.row(i));
  return s;
}

double radius(const Dataset& d) {
  if (d.size() == 0) throw std::invalid_argument("radius of an empty dataset");
  double r2 = 0.0;
  for (const auto& x : d.examples()) r2 = std::max(r2, x.squared_norm());
  return std::sqrt(r2);
}

}  // namespace smoothperf
