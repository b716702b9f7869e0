// Copyright 2026 The kmlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Foundational types for K-means clustering over partition matrices: point
// sets, squared distance matrices, partitions, packed symmetric matrices and
// an exhaustive K-means oracle for small instances.

#ifndef KMLP_CORE_TYPES_HPP
#define KMLP_CORE_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kmlp {

/// Raised for malformed or out-of-range inputs anywhere in the library.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// n points in R^m stored row-major. Coordinates are validated finite.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t n, std::size_t m, std::vector<double> coords);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return m_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * m_, m_};
  }
  double operator()(std::size_t i, std::size_t k) const {
    return coords_[i * m_ + k];
  }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<double> coords_;
};

/// Dense symmetric matrix of squared Euclidean distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Takes a dense row-major n x n array; checks symmetry, zero diagonal,
  /// nonnegativity and finiteness.
  DistanceMatrix(std::size_t n, std::vector<double> dense);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return d_[i * n_ + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {d_.data() + i * n_, n_};
  }
  /// Strict upper triangle in row-major order (d_12, d_13, ..., d_{n-1,n}).
  std::vector<double> upper_triangle() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Hard assignment of n points to K nonempty clusters labelled 0..K-1.
class Partition {
 public:
  Partition() = default;
  Partition(std::size_t k, std::vector<int> assign);

  std::size_t num_clusters() const { return k_; }
  std::size_t size() const { return assign_.size(); }
  int operator[](std::size_t i) const { return assign_[i]; }
  const std::vector<int>& assignment() const { return assign_; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  /// Member indices of cluster c in increasing order.
  std::vector<std::size_t> members(int c) const;
  /// Relabel clusters by first occurrence (point 0 is in cluster 0, ...).
  Partition canonical() const;
  bool same_clustering(const Partition& other) const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<int> assign_;
  std::vector<std::size_t> sizes_;
};

/// Packed upper triangle (diagonal included) of a symmetric n x n matrix.
/// Entry (i, j) with i <= j lives at i*n - i*(i-1)/2 + (j - i).
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n, double fill = 0.0)
      : n_(n), v_(n * (n + 1) / 2, fill) {}
  SymMatrix(std::size_t n, std::vector<double> packed);

  static SymMatrix from_dense(std::size_t n, std::span<const double> dense);

  static std::size_t packed_size(std::size_t n) { return n * (n + 1) / 2; }
  static std::size_t index(std::size_t n, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const {
    return v_[index(n_, i, j)];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return v_[index(n_, i, j)];
  }
  const std::vector<double>& packed() const { return v_; }
  std::vector<double>& packed() { return v_; }
  std::vector<double> dense() const;
  double trace() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> v_;
};

std::ostream& operator<<(std::ostream& os, const SymMatrix& x);

DistanceMatrix squared_distances(const PointSet& points);

/// X = sum_k (1/|G_k|) 1_{G_k} 1_{G_k}^T.
SymMatrix partition_matrix(const Partition& p);

/// sum_{i,j} d_ij X_ij over both orderings.
double lp_objective(const SymMatrix& x, const DistanceMatrix& d);

/// Within-cluster sum of squared distances to the centroids.
double within_cluster_sse(const PointSet& points, const Partition& p);

/// K-means objective on the scale of the matrix formulation:
/// sum_ij d_ij X_ij for X = partition_matrix(p), which is exactly twice
/// within_cluster_sse(). Every cost in this library (bounds, brute force,
/// Lloyd, certificates) is measured on this scale so it compares directly
/// with LP values.
double kmeans_cost(const PointSet& points, const Partition& p);

inline constexpr double kPartitionTol = 1e-6;

/// Trace K, unit row sums and X*X = X, each within tol (sup norm).
bool is_partition_matrix(const SymMatrix& x, std::size_t k,
                         double tol = kPartitionTol);

struct KMeansSolution {
  Partition partition;
  double cost = 0.0;
};

/// Upper limit on the number of distinct clusterings kmeans_bruteforce will
/// enumerate (Stirling number of the second kind S(n, K)).
inline constexpr double kBruteForceBudget = 3.4e7;

/// Stirling number of the second kind, as a double.
double stirling2(std::size_t n, std::size_t k);

/// Exhaustive K-means over every clustering with exactly K nonempty clusters,
/// enumerated as restricted growth strings. Throws InputError when S(n, K)
/// exceeds `budget`.
KMeansSolution kmeans_bruteforce(const PointSet& points, std::size_t k,
                                 double budget = kBruteForceBudget);

/// Clusters of the support graph {(i, j) : X_ij > 0.5 X_ii}; used to read a
/// partition off a (numerically) integral solution.
Partition extract_partition(const SymMatrix& x);

}  // namespace kmlp

#endif  // KMLP_CORE_TYPES_HPP
