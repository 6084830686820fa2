#pragma once

// Internal helpers shared by the library translation units.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "nagata/metric_core.hpp"

namespace nagata::detail {

// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

// Distance oracle over a point set; resolves ultrametric indices once.
class PairDistance {
 public:
  PairDistance(const PointSet2D& ps, const MetricKind& metric);
  double operator()(std::size_t i, std::size_t j) const;

 private:
  const PointSet2D& ps_;
  const MetricKind& metric_;
  std::vector<std::size_t> sequence_index_;
};

// Calls f(i, j) for every unordered pair i < j with d(i, j) <= s. Euclidean
// sets without infinity use a sort-and-sweep on the real part; other
// metrics fall back to all pairs.
void for_each_close_pair(const PointSet2D& ps, double s, const MetricKind& metric,
                         const std::function<void(std::size_t, std::size_t)>& f);

// Positions (into `points`) of a farthest pair, found on the convex hull.
std::pair<std::size_t, std::size_t> diametral_pair(std::span<const Complex> points);

// Exact Euclidean diameter of a finite planar set via its convex hull.
double euclidean_diameter(std::span<const Complex> points);

}  // namespace nagata::detail
