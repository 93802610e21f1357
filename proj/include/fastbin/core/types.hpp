#pragma once

// Shared value types and error classes.
//
// Indexing convention: every index held by these types is 0-based. The
// mathematical notation used in the docs is 1-based with arithmetic modulo n
// landing in [1, n]; coordinate k (1-based) is stored at offset k - 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastbin {

using RealVector = std::vector<double>;

/// Raised when operand shapes disagree or a dimension is zero.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a value violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by text parsers; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline void require_nonempty(std::span<const double> x, const char* what) {
  if (x.empty()) throw DimensionError(std::string(what) + ": empty vector");
}

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

inline void require_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite entry");
  }
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size(), "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

/// Returns x / ||x||_2. Throws DomainError on the zero vector.
inline RealVector normalized(std::span<const double> x) {
  const double nrm = norm2(x);
  if (nrm == 0.0) throw DomainError("normalized: zero vector");
  RealVector out(x.begin(), x.end());
  for (double& v : out) v /= nrm;
  return out;
}

/// Sorted set of distinct coordinates of an ambient space of dimension n.
class IndexSet {
 public:
  IndexSet() = default;

  static IndexSet from_zero_based(std::vector<std::size_t> indices, std::size_t ambient_dim) {
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (indices[k] >= ambient_dim) {
        throw DomainError("IndexSet: index " + std::to_string(indices[k] + 1) +
                          " out of range [1, " + std::to_string(ambient_dim) + "]");
      }
      if (k > 0 && indices[k] <= indices[k - 1]) {
        throw DomainError("IndexSet: indices must be strictly increasing");
      }
    }
    IndexSet s;
    s.indices_ = std::move(indices);
    s.ambient_dim_ = ambient_dim;
    return s;
  }

  static IndexSet from_one_based(const std::vector<std::size_t>& indices, std::size_t ambient_dim) {
    std::vector<std::size_t> zero;
    zero.reserve(indices.size());
    for (std::size_t i : indices) {
      if (i == 0) throw DomainError("IndexSet: 1-based index 0 is out of range");
      zero.push_back(i - 1);
    }
    return from_zero_based(std::move(zero), ambient_dim);
  }

  /// {1, ..., m} in 1-based terms.
  static IndexSet first(std::size_t ambient_dim, std::size_t m) {
    if (m > ambient_dim) throw DomainError("IndexSet::first: m exceeds ambient dimension");
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return from_zero_based(std::move(idx), ambient_dim);
  }

  static IndexSet full(std::size_t ambient_dim) { return first(ambient_dim, ambient_dim); }

  std::span<const std::size_t> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t operator[](std::size_t k) const { return indices_[k]; }

  std::vector<std::size_t> one_based() const {
    std::vector<std::size_t> out(indices_);
    for (auto& v : out) ++v;
    return out;
  }

  bool operator==(const IndexSet&) const = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t ambient_dim_ = 0;
};

/// N points of R^n stored row-major.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t count, std::size_t dim) : count_(count), dim_(dim), data_(count * dim, 0.0) {}

  static PointSet from_rows(const std::vector<RealVector>& rows) {
    if (rows.empty()) return {};
    PointSet ps(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require_same_size(rows[i].size(), ps.dim_, "PointSet::from_rows");
      std::copy(rows[i].begin(), rows[i].end(), ps.data_.begin() + static_cast<std::ptrdiff_t>(i * ps.dim_));
    }
    return ps;
  }

  std::size_t size() const noexcept { return count_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return count_ == 0; }
  bool is_normalized() const noexcept { return normalized_; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  /// Scales every row to unit length. Zero rows raise DomainError naming the row.
  void normalize() {
    for (std::size_t i = 0; i < count_; ++i) {
      auto r = row(i);
      const double nrm = norm2(r);
      if (nrm == 0.0) throw DomainError("PointSet: row " + std::to_string(i + 1) + " is zero");
      for (double& v : r) v /= nrm;
    }
    normalized_ = true;
  }

 private:
  std::size_t count_ = 0;
  std::size_t dim_ = 0;
  RealVector data_;
  bool normalized_ = false;
};

}  // namespace fastbin
