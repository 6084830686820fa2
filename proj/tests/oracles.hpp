#pragma once

// Brute-force reference implementations, deliberately independent of the
// library's algorithms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

// Components of the <= s graph by repeated relaxation of a labelling.
inline std::vector<int> closure_labels(const std::vector<Complex>& pts, double s) {
  const std::size_t n = pts.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = i == j || std::abs(pts[i] - pts[j]) <= s;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  std::vector<int> label(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t first = i;
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j]) {
        first = j;
        break;
      }
    label[i] = static_cast<int>(first);
  }
  return label;
}

inline double pairwise_diameter(const std::vector<Complex>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, std::abs(pts[i] - pts[j]));
  return d;
}

// s-multiplicity by enumerating every subset of points of diameter <= s
// (n <= 20), counting the blocks each meets.
inline int subset_multiplicity(const std::vector<Complex>& pts,
                               const std::vector<std::vector<std::size_t>>& blocks, double s) {
  const std::size_t n = pts.size();
  int best = 0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      if (mask >> i & 1u)
        for (std::size_t j = i + 1; j < n && ok; ++j)
          if ((mask >> j & 1u) && std::abs(pts[i] - pts[j]) > s) ok = false;
    if (!ok) continue;
    int met = 0;
    for (const auto& b : blocks)
      if (std::any_of(b.begin(), b.end(), [&](std::size_t i) { return mask >> i & 1u; })) ++met;
    best = std::max(best, met);
  }
  return best;
}

inline std::vector<Complex> random_points(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> u(0.0, scale);
  std::vector<Complex> out;
  while (out.size() < n) {
    const Complex z(u(rng), u(rng));
    if (std::none_of(out.begin(), out.end(), [&](Complex w) { return std::abs(w - z) < 1e-9; }))
      out.push_back(z);
  }
  return out;
}

}  // namespace oracle
