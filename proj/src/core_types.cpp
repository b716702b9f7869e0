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

#include "kmlp/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace kmlp {

PointSet::PointSet(std::size_t n, std::size_t m, std::vector<double> coords)
    : n_(n), m_(m), coords_(std::move(coords)) {
  if (n == 0 || m == 0) throw InputError("point set needs n >= 1 and m >= 1");
  if (coords_.size() != n * m) {
    throw InputError("point set: expected " + std::to_string(n * m) +
                     " coordinates, got " + std::to_string(coords_.size()));
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw InputError("point " + std::to_string(i / m) +
                       " has a non-finite coordinate");
    }
  }
}

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> dense)
    : n_(n), d_(std::move(dense)) {
  if (d_.size() != n * n) throw InputError("distance matrix must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (d_[i * n + i] != 0.0) throw InputError("distance diagonal must be 0");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = d_[i * n + j];
      if (!std::isfinite(a) || a < 0.0 || a != d_[j * n + i]) {
        throw InputError("distance matrix must be symmetric, finite, >= 0");
      }
    }
  }
}

std::vector<double> DistanceMatrix::upper_triangle() const {
  std::vector<double> out;
  out.reserve(n_ * (n_ - 1) / 2);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) out.push_back(d_[i * n_ + j]);
  return out;
}

Partition::Partition(std::size_t k, std::vector<int> assign)
    : k_(k), assign_(std::move(assign)), sizes_(k, 0) {
  if (k == 0) throw InputError("partition needs at least one cluster");
  for (int a : assign_) {
    if (a < 0 || static_cast<std::size_t>(a) >= k) {
      throw InputError("cluster id " + std::to_string(a) + " outside [0, " +
                       std::to_string(k) + ")");
    }
    ++sizes_[a];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes_[c] == 0) {
      throw InputError("cluster " + std::to_string(c) + " is empty");
    }
  }
}

std::vector<std::size_t> Partition::members(int c) const {
  std::vector<std::size_t> out;
  out.reserve(sizes_.at(c));
  for (std::size_t i = 0; i < assign_.size(); ++i)
    if (assign_[i] == c) out.push_back(i);
  return out;
}

Partition Partition::canonical() const {
  std::vector<int> relabel(k_, -1);
  std::vector<int> out(assign_.size());
  int next = 0;
  for (std::size_t i = 0; i < assign_.size(); ++i) {
    int& r = relabel[assign_[i]];
    if (r < 0) r = next++;
    out[i] = r;
  }
  return Partition(k_, std::move(out));
}

bool Partition::same_clustering(const Partition& other) const {
  return k_ == other.k_ && canonical() == other.canonical();
}

SymMatrix::SymMatrix(std::size_t n, std::vector<double> packed)
    : n_(n), v_(std::move(packed)) {
  if (v_.size() != packed_size(n)) {
    throw InputError("packed symmetric matrix has wrong length");
  }
}

SymMatrix SymMatrix::from_dense(std::size_t n, std::span<const double> dense) {
  if (dense.size() != n * n) throw InputError("dense matrix must be n x n");
  SymMatrix x(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      x(i, j) = 0.5 * (dense[i * n + j] + dense[j * n + i]);
  return x;
}

std::vector<double> SymMatrix::dense() const {
  std::vector<double> out(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j)
      out[i * n_ + j] = out[j * n_ + i] = (*this)(i, j);
  return out;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

std::ostream& operator<<(std::ostream& os, const SymMatrix& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) os << (j ? " " : "") << x(i, j);
    os << '\n';
  }
  return os;
}

DistanceMatrix squared_distances(const PointSet& points) {
  const std::size_t n = points.size();
  const std::size_t m = points.dim();
  std::vector<double> d(n * n, 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto xi = points.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = points.point(j);
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double t = xi[k] - xj[k];
        s += t * t;
      }
      d[i * n + j] = s;
      d[j * n + i] = s;
    }
  }
  return DistanceMatrix(n, std::move(d));
}

SymMatrix partition_matrix(const Partition& p) {
  const std::size_t n = p.size();
  SymMatrix x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = 1.0 / static_cast<double>(p.sizes()[p[i]]);
    for (std::size_t j = i; j < n; ++j)
      if (p[i] == p[j]) x(i, j) = v;
  }
  return x;
}

double lp_objective(const SymMatrix& x, const DistanceMatrix& d) {
  if (x.size() != d.size()) throw InputError("lp_objective: size mismatch");
  const std::size_t n = x.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) row += d(i, j) * x(i, j);
    total += 2.0 * row;
  }
  return total;
}

double kmeans_cost(const PointSet& points, const Partition& p) {
  return 2.0 * within_cluster_sse(points, p);
}

double within_cluster_sse(const PointSet& points, const Partition& p) {
  if (p.size() != points.size()) {
    throw InputError("kmeans_cost: assignment length differs from n");
  }
  const std::size_t m = points.dim();
  const std::size_t k = p.num_clusters();
  std::vector<double> centroid(k * m, 0.0);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t a = 0; a < m; ++a) centroid[p[i] * m + a] += points(i, a);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t a = 0; a < m; ++a)
      centroid[c * m + a] /= static_cast<double>(p.sizes()[c]);
  double cost = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t a = 0; a < m; ++a) {
      const double t = points(i, a) - centroid[p[i] * m + a];
      cost += t * t;
    }
  }
  return cost;
}

bool is_partition_matrix(const SymMatrix& x, std::size_t k, double tol) {
  const std::size_t n = x.size();
  if (n == 0) return false;
  if (std::abs(x.trace() - static_cast<double>(k)) > tol) return false;
  const std::vector<double> dense = x.dense();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += dense[i * n + j];
    if (std::abs(s - 1.0) > tol) return false;
  }
  // X symmetric, so (X X)_ij is the dot product of rows i and j.
  for (std::size_t i = 0; i < n; ++i) {
    const double* ri = dense.data() + i * n;
    for (std::size_t j = i; j < n; ++j) {
      const double* rj = dense.data() + j * n;
      double s = 0.0;
      for (std::size_t l = 0; l < n; ++l) s += ri[l] * rj[l];
      if (std::abs(s - ri[j]) > tol) return false;
    }
  }
  return true;
}

double stirling2(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  // S(i, j) = j S(i-1, j) + S(i-1, j-1), rolled over j.
  std::vector<double> s(k + 1, 0.0);
  s[0] = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = std::min(i, k); j >= 1; --j)
      s[j] = static_cast<double>(j) * s[j] + s[j - 1];
    s[0] = 0.0;
  }
  return s[k];
}

namespace {

// Depth-first enumeration of restricted growth strings with exactly K blocks.
// Per-depth copies of the cluster sums keep the leaf costs free of add/remove
// drift.
class BruteForce {
 public:
  BruteForce(const PointSet& points, std::size_t k)
      : pts_(points),
        n_(points.size()),
        m_(points.dim()),
        k_(k),
        assign_(n_, 0),
        best_(n_, 0),
        sum_((n_ + 1) * k_ * m_, 0.0),
        sq_((n_ + 1) * k_, 0.0),
        cnt_((n_ + 1) * k_, 0) {}

  std::vector<int> run() {
    descend(0, 0);
    return best_;
  }

 private:
  void descend(std::size_t idx, std::size_t used) {
    if (idx == n_) {
      if (used != k_) return;
      double cost = 0.0;
      for (std::size_t c = 0; c < k_; ++c) {
        const double* s = &sum_[(n_ * k_ + c) * m_];
        double norm = 0.0;
        for (std::size_t a = 0; a < m_; ++a) norm += s[a] * s[a];
        cost += sq_[n_ * k_ + c] - norm / cnt_[n_ * k_ + c];
      }
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_ = assign_;
      }
      return;
    }
    if (k_ - used > n_ - idx) return;
    const std::size_t top = std::min(used + 1, k_);
    const auto x = pts_.point(idx);
    double xx = 0.0;
    for (std::size_t a = 0; a < m_; ++a) xx += x[a] * x[a];
    for (std::size_t c = 0; c < top; ++c) {
      std::copy_n(&sum_[idx * k_ * m_], k_ * m_, &sum_[(idx + 1) * k_ * m_]);
      std::copy_n(&sq_[idx * k_], k_, &sq_[(idx + 1) * k_]);
      std::copy_n(&cnt_[idx * k_], k_, &cnt_[(idx + 1) * k_]);
      double* s = &sum_[((idx + 1) * k_ + c) * m_];
      for (std::size_t a = 0; a < m_; ++a) s[a] += x[a];
      sq_[(idx + 1) * k_ + c] += xx;
      cnt_[(idx + 1) * k_ + c] += 1;
      assign_[idx] = static_cast<int>(c);
      descend(idx + 1, c == used ? used + 1 : used);
    }
  }

  const PointSet& pts_;
  std::size_t n_, m_, k_;
  std::vector<int> assign_, best_;
  std::vector<double> sum_, sq_;
  std::vector<int> cnt_;
  double best_cost_ = std::numeric_limits<double>::infinity();
};

}  // namespace

KMeansSolution kmeans_bruteforce(const PointSet& points, std::size_t k,
                                 double budget) {
  const std::size_t n = points.size();
  if (k == 0 || k > n) throw InputError("kmeans_bruteforce: need 1 <= K <= n");
  if (stirling2(n, k) > budget) {
    throw InputError("kmeans_bruteforce: instance too large (n=" +
                     std::to_string(n) + ", K=" + std::to_string(k) + ")");
  }
  Partition p(k, BruteForce(points, k).run());
  const double cost = kmeans_cost(points, p);
  return {std::move(p), cost};
}

Partition extract_partition(const SymMatrix& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && x(i, j) > 0.5 * x(i, i)) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<int> label(n, -1), assign(n);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (label[r] < 0) label[r] = next++;
    assign[i] = label[r];
  }
  return Partition(static_cast<std::size_t>(next), std::move(assign));
}

}  // namespace kmlp
