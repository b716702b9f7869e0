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

#include "kmlp/lp_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kmlp/rng.hpp"

namespace kmlp {

FacetInequality::FacetInequality(std::uint32_t apex,
                                 std::vector<std::uint32_t> set)
    : i(apex), S(std::move(set)) {
  std::sort(S.begin(), S.end());
  if (S.size() < 2) throw InputError("facet inequality needs |S| >= 2");
  if (std::adjacent_find(S.begin(), S.end()) != S.end())
    throw InputError("facet inequality: repeated index in S");
  if (std::binary_search(S.begin(), S.end(), i))
    throw InputError("facet inequality: apex inside S");
}

std::size_t FacetInequalityHash::operator()(
    const FacetInequality& c) const noexcept {
  std::uint64_t h = splitmix64(c.i);
  for (std::uint32_t j : c.S) h = splitmix64(h ^ j);
  return static_cast<std::size_t>(h);
}

double violation(const SymMatrix& x, const FacetInequality& cut) {
  double w = -x(cut.i, cut.i);
  for (std::size_t a = 0; a < cut.S.size(); ++a) {
    w += x(cut.i, cut.S[a]);
    for (std::size_t b = a + 1; b < cut.S.size(); ++b)
      w -= x(cut.S[a], cut.S[b]);
  }
  return w;
}

bool CutPool::insert(FacetInequality cut) {
  if (!keys_.insert(cut).second) return false;
  cuts_.push_back(std::move(cut));
  activity_.push_back(0.0);
  return true;
}

void CutPool::record_activity(const SymMatrix& x) {
  for (std::size_t r = 0; r < cuts_.size(); ++r)
    activity_[r] = violation(x, cuts_[r]);
}

std::vector<std::size_t> CutPool::retain(
    const std::function<bool(std::size_t)>& keep) {
  std::vector<std::size_t> kept;
  std::vector<FacetInequality> cuts;
  std::vector<double> activity;
  for (std::size_t r = 0; r < cuts_.size(); ++r) {
    if (keep(r)) {
      kept.push_back(r);
      cuts.push_back(std::move(cuts_[r]));
      activity.push_back(activity_[r]);
    } else {
      keys_.erase(cuts_[r]);
    }
  }
  cuts_ = std::move(cuts);
  activity_ = std::move(activity);
  return kept;
}

void CsrMatrix::append_row(
    std::vector<std::pair<std::uint32_t, double>> entries) {
  std::sort(entries.begin(), entries.end());
  for (const auto& [j, v] : entries) {
    if (j >= cols) throw InputError("sparse row: column out of range");
    if (!col.empty() && row_ptr.back() < col.size() && col.back() == j)
      throw InputError("sparse row: duplicate column");
    col.push_back(j);
    val.push_back(v);
  }
  row_ptr.push_back(col.size());
  ++rows;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
      s += val[p] * x[col[p]];
    y[r] = s;
  }
}

void CsrMatrix::multiply_transpose(std::span<const double> u,
                                   std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double ur = u[r];
    if (ur == 0.0) continue;
    for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
      y[col[p]] += val[p] * ur;
  }
}

double CsrMatrix::row_dot(std::size_t r, std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
    s += val[p] * x[col[p]];
  return s;
}

double LpStandardForm::objective(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * x[j];
  return s;
}

void LpStandardForm::check() const {
  const std::size_t n = c.size();
  if (a.cols != n || lower.size() != n || upper.size() != n)
    throw InputError("LP: column dimensions disagree");
  if (rhs.size() != a.rows || a.row_ptr.size() != a.rows + 1 ||
      num_equalities > a.rows)
    throw InputError("LP: row dimensions disagree");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(lower[j] <= upper[j]) || std::isnan(c[j]))
      throw InputError("LP: invalid bounds or objective at column " +
                       std::to_string(j));
  }
}

namespace {

std::vector<std::pair<std::uint32_t, double>> cut_row(
    std::size_t n, const FacetInequality& cut) {
  std::vector<std::pair<std::uint32_t, double>> row;
  const auto col = [n](std::size_t i, std::size_t j) {
    return static_cast<std::uint32_t>(SymMatrix::index(n, i, j));
  };
  row.emplace_back(col(cut.i, cut.i), -1.0);
  for (std::size_t a = 0; a < cut.S.size(); ++a) {
    if (cut.S[a] >= n) throw InputError("cut index out of range");
    row.emplace_back(col(cut.i, cut.S[a]), 1.0);
    for (std::size_t b = a + 1; b < cut.S.size(); ++b)
      row.emplace_back(col(cut.S[a], cut.S[b]), -1.0);
  }
  return row;
}

}  // namespace

LpStandardForm build(const DistanceMatrix& d, std::size_t k,
                     const CutPool& pool) {
  const std::size_t n = d.size();
  if (k < 2 || k > n) {
    throw InputError("LP needs 2 <= K <= n (K=" + std::to_string(k) +
                     ", n=" + std::to_string(n) + ")");
  }
  const std::size_t cols = SymMatrix::packed_size(n);
  LpStandardForm lp;
  lp.c.assign(cols, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      lp.c[SymMatrix::index(n, i, j)] = 2.0 * d(i, j);
  lp.lower.assign(cols, 0.0);
  lp.upper.assign(cols, 1.0);
  lp.a.cols = cols;

  std::vector<std::pair<std::uint32_t, double>> row;
  for (std::size_t i = 0; i < n; ++i)
    row.emplace_back(static_cast<std::uint32_t>(SymMatrix::index(n, i, i)), 1.0);
  lp.a.append_row(std::move(row));
  lp.rhs.push_back(static_cast<double>(k));
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j)
      row.emplace_back(static_cast<std::uint32_t>(SymMatrix::index(n, i, j)),
                       1.0);
    lp.a.append_row(std::move(row));
    lp.rhs.push_back(1.0);
  }
  lp.num_equalities = n + 1;
  append_cuts(lp, pool.cuts());
  return lp;
}

void append_cuts(LpStandardForm& lp, std::span<const FacetInequality> cuts) {
  // Recover n from the packed column count n(n+1)/2.
  const auto n = static_cast<std::size_t>(
      std::llround((std::sqrt(8.0 * static_cast<double>(lp.num_cols()) + 1.0) -
                    1.0) / 2.0));
  for (const auto& cut : cuts) {
    lp.a.append_row(cut_row(n, cut));
    lp.rhs.push_back(0.0);
  }
}

namespace {

struct CutEnumerator {
  const SymMatrix& x;
  std::size_t n, t;
  std::uint32_t apex;
  std::vector<std::uint32_t> set;
  const std::function<void(std::uint32_t, std::span<const std::uint32_t>,
                           double)>& visit;

  // Extends `set` (current value w) by each k > last; w_i(S + k) =
  // w_i(S) + X_ik - sum_{l in S} X_lk.
  void grow(std::uint32_t first, double w) {
    for (std::uint32_t k = first; k < n; ++k) {
      if (k == apex) continue;
      double gain = x(apex, k);
      for (std::uint32_t l : set) gain -= x(l, k);
      set.push_back(k);
      const double wk = w + gain;
      if (set.size() >= 2) visit(apex, set, wk);
      if (set.size() < t) grow(k + 1, wk);
      set.pop_back();
    }
  }
};

}  // namespace

void for_each_cut(
    const SymMatrix& x, std::size_t t,
    const std::function<void(std::uint32_t, std::span<const std::uint32_t>,
                             double)>& visit) {
  const std::size_t n = x.size();
  for (std::uint32_t i = 0; i < n; ++i) {
    CutEnumerator e{x, n, t, i, {}, visit};
    e.grow(0, -x(i, i));
  }
}

double count_cuts(std::size_t n, std::size_t t) {
  if (n < 3) return 0.0;
  double total = 0.0;
  double binom = 1.0;  // C(n-1, s)
  for (std::size_t s = 1; s <= t && s <= n - 1; ++s) {
    binom = binom * static_cast<double>(n - s) / static_cast<double>(s);
    if (s >= 2) total += binom;
  }
  return total * static_cast<double>(n);
}

CutPool active_cuts(const SymMatrix& x, std::size_t t, double eps_act,
                    std::size_t cap, std::uint64_t seed) {
  std::vector<FacetInequality> tight;
  for_each_cut(x, t,
               [&](std::uint32_t i, std::span<const std::uint32_t> s, double w) {
                 if (std::abs(w) <= eps_act)
                   tight.emplace_back(i, std::vector<std::uint32_t>(s.begin(),
                                                                    s.end()));
               });
  CutPool pool;
  if (tight.size() <= cap) {
    for (auto& c : tight) pool.insert(std::move(c));
    return pool;
  }
  // Partial Fisher-Yates: the first `cap` slots become a uniform sample.
  std::vector<std::size_t> idx(tight.size());
  for (std::size_t r = 0; r < idx.size(); ++r) idx[r] = r;
  Rng rng(seed);
  for (std::size_t r = 0; r < cap; ++r) {
    const std::size_t pick = r + rng.below(idx.size() - r);
    std::swap(idx[r], idx[pick]);
  }
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  for (std::size_t r : idx) pool.insert(std::move(tight[r]));
  return pool;
}

CutPool all_cuts(std::size_t n, std::size_t t) {
  CutPool pool;
  SymMatrix zero(n);
  for_each_cut(zero, t,
               [&](std::uint32_t i, std::span<const std::uint32_t> s, double) {
                 pool.insert(FacetInequality(
                     i, std::vector<std::uint32_t>(s.begin(), s.end())));
               });
  return pool;
}

}  // namespace kmlp
