#include "nagata/dimension_lab.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "detail.hpp"
#include "nagata/errors.hpp"

namespace nagata {

// ---------------------------------------------------------------------------
// ndim-0 certificates

std::vector<double> ScaleGrid::scales() const {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double s = s_min * std::pow(ratio, i);
    if (s > s_max * (1.0 + 1e-12)) break;
    out.push_back(s);
  }
  return out;
}

void ScaleGrid::validate() const {
  if (!(s_min > 0.0)) throw DomainError("ScaleGrid: s_min must be positive");
  if (!(s_max > s_min)) throw DomainError("ScaleGrid: s_max must exceed s_min");
  if (!(ratio > 1.0)) throw DomainError("ScaleGrid: ratio must exceed 1");
  if (scales().size() < 3) throw DomainError("ScaleGrid: fewer than three scales");
}

Ndim0Certificate ndim0_certificate(const PointSet2D& ps, const ScaleGrid& grid,
                                   const MetricKind& metric, double c_max) {
  grid.validate();
  Ndim0Certificate cert;
  cert.grid = grid;
  cert.c_max = c_max;
  for (double s : grid.scales()) {
    const auto chains = s_chain_components(ps, s, metric);
    ScaleRecord rec;
    rec.scale = s;
    rec.component_count = chains.components.size();
    for (double d : chains.diameters) rec.max_diameter = std::max(rec.max_diameter, d);
    rec.max_ratio = rec.max_diameter / s;
    cert.constant = std::max(cert.constant, rec.max_ratio);
    cert.per_scale.push_back(rec);
  }
  cert.pass = cert.constant <= c_max;
  return cert;
}

double default_c_max(std::optional<double> theoretical_constant) {
  return 4.0 * theoretical_constant.value_or(10.0);
}

// ---------------------------------------------------------------------------
// Exponential sequence covers

PointSet2D exp_sequence_points(double lambda, std::size_t n) {
  if (!(lambda > 1.0)) throw DomainError("exp_sequence_points: lambda must exceed 1");
  std::vector<Complex> pts;
  pts.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) pts.emplace_back(std::pow(lambda, static_cast<double>(k)), 0.0);
  return PointSet2D::from_complex(pts);
}

int exp_sequence_head_size(double lambda, double s) {
  if (!(lambda > 1.0)) throw DomainError("exp_sequence_cover: lambda must exceed 1");
  if (!(s > 0.0)) throw DomainError("exp_sequence_cover: s must be positive");
  const auto lower = [&](int n) { return std::pow(lambda, n - 1) * (lambda - 1.0); };
  // Start from the logarithmic estimate and correct for rounding.
  int n = static_cast<int>(std::floor(std::log(s / (lambda - 1.0)) / std::log(lambda))) + 1;
  n = std::max(n, 0);
  while (n > 0 && lower(n) > s) --n;
  while (lower(n + 1) <= s) ++n;
  return n;
}

Cover exp_sequence_cover(double lambda, std::size_t n_points, double s) {
  const int head = exp_sequence_head_size(lambda, s);
  if (n_points == 0) throw DomainError("exp_sequence_cover: no points");
  Cover cover;
  cover.scale = s;
  cover.bound_constant = lambda / (lambda - 1.0);
  cover.claimed_multiplicity = 1;
  const std::size_t head_size = std::min<std::size_t>(static_cast<std::size_t>(head), n_points);
  if (head_size > 0) {
    std::vector<std::size_t> block(head_size);
    std::iota(block.begin(), block.end(), std::size_t{0});
    cover.blocks.push_back(std::move(block));
  }
  for (std::size_t k = head_size; k < n_points; ++k) cover.blocks.push_back({k});
  return cover;
}

// ---------------------------------------------------------------------------
// Growing chains

bool is_delta_chain(const PointSet2D& ps, const std::vector<std::size_t>& path, double delta) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (path[i] >= ps.size() || path[i + 1] >= ps.size()) return false;
    if (std::abs(ps[path[i]].z - ps[path[i + 1]].z) > delta) return false;
  }
  return !path.empty();
}

namespace {

std::vector<std::size_t> bfs_path(const std::vector<std::vector<std::size_t>>& adj, std::size_t from,
                                  std::size_t to) {
  constexpr auto kUnseen = std::numeric_limits<std::size_t>::max();
  std::unordered_map<std::size_t, std::size_t> parent;
  parent[from] = kUnseen;
  std::deque<std::size_t> queue{from};
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    if (u == to) break;
    for (auto v : adj[u]) {
      if (parent.try_emplace(v, u).second) queue.push_back(v);
    }
  }
  std::vector<std::size_t> path;
  for (auto v = to; v != kUnseen; v = parent.at(v)) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

struct Candidate {
  double diameter;
  std::size_t component;
  std::vector<std::size_t> chain;
};

}  // namespace

std::optional<ChainGrowthWitness> chain_growth_witness(const PointSet2D& ps, double delta,
                                                       std::size_t min_chains) {
  if (!(delta > 0.0)) throw DomainError("chain_growth_witness: delta must be positive");
  const MetricKind metric = Euclidean{};
  const auto adj = threshold_graph(ps, delta, metric);
  const auto chains = s_chain_components(ps, delta, metric);

  std::vector<Candidate> candidates;
  for (std::size_t c = 0; c < chains.components.size(); ++c) {
    const auto& comp = chains.components[c];
    if (comp.size() < 2) continue;
    std::vector<Complex> pts;
    pts.reserve(comp.size());
    for (auto i : comp) pts.push_back(ps[i].z);
    const auto [a, b] = detail::diametral_pair(pts);
    const auto path = bfs_path(adj, comp[a], comp[b]);

    double last = 0.0;
    for (std::size_t len = 2;; len = std::min(2 * len, path.size())) {
      std::vector<Complex> prefix;
      prefix.reserve(len);
      for (std::size_t i = 0; i < len; ++i) prefix.push_back(ps[path[i]].z);
      const double d = detail::euclidean_diameter(prefix);
      if (d > last) {
        candidates.push_back({d, c, std::vector<std::size_t>(path.begin(), path.begin() + len)});
        last = d;
      }
      if (len == path.size()) break;
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.diameter < y.diameter; });

  ChainGrowthWitness witness;
  witness.delta = delta;
  for (auto& cand : candidates) {
    if (!witness.diameters.empty() && !(cand.diameter > witness.diameters.back())) continue;
    witness.diameters.push_back(cand.diameter);
    witness.chains.push_back(std::move(cand.chain));
  }
  if (witness.chains.empty() || witness.chains.size() < min_chains) return std::nullopt;
  return witness;
}

// ---------------------------------------------------------------------------
// Ratio sequences

RatioSequenceCertificate ratio_sequence_certificate(const PointSet2D& ps, Complex o, double lambda) {
  if (!(lambda > 1.0)) throw DomainError("ratio_sequence_certificate: lambda must exceed 1");
  auto values = ps.finite_values();
  std::stable_sort(values.begin(), values.end(), [&](const Complex& a, const Complex& b) {
    return std::abs(a - o) < std::abs(b - o);
  });
  std::vector<double> radii;
  radii.reserve(values.size());
  for (const auto& z : values) radii.push_back(std::abs(z - o));
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (radii[k] == radii[k - 1]) {
      throw DomainError("ratio_sequence_certificate: tied distances from the basepoint");
    }
  }

  RatioSequenceCertificate cert;
  cert.basepoint = o;
  cert.lambda = lambda;
  cert.bilip_lower = lambda / (lambda + 1.0);
  cert.bilip_upper = lambda / (lambda - 1.0);
  cert.min_ratio = std::numeric_limits<double>::infinity();
  cert.checked = true;
  for (std::size_t k = 1; k < radii.size(); ++k) {
    cert.min_ratio = std::min(cert.min_ratio, radii[k] / radii[k - 1]);
    if (radii[k] < lambda * radii[k - 1] * (1.0 - kRatioSlack)) cert.checked = false;
  }
  if (!cert.checked) return cert;

  auto seq = std::make_shared<const RatioSequence>(o, lambda, values);
  const std::size_t n = values.size();

  // Exhaustive checks up to a size limit; above it an evenly spaced
  // subsequence (always including both ends) is checked.
  const auto sample = [n](std::size_t limit) {
    std::vector<std::size_t> idx;
    if (n <= limit) {
      idx.resize(n);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      return idx;
    }
    for (std::size_t i = 0; i < limit; ++i) idx.push_back(i * (n - 1) / (limit - 1));
    return idx;
  };

  // Strong triangle inequality, exact comparisons.
  cert.strong_triangle = true;
  const auto tri = sample(300);
  for (auto a : tri) {
    for (auto b : tri) {
      for (auto c : tri) {
        if (seq->ultrametric(a, c) > std::max(seq->ultrametric(a, b), seq->ultrametric(b, c))) {
          cert.strong_triangle = false;
        }
      }
    }
  }

  cert.bilipschitz = true;
  cert.observed_lower = std::numeric_limits<double>::infinity();
  cert.observed_upper = 0.0;
  constexpr double kRel = 1e-12;
  const auto pairs = sample(4000);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      const auto m = pairs[i];
      const auto k = pairs[j];
      const double ratio = seq->ultrametric(m, k) / std::abs(values[m] - values[k]);
      cert.observed_lower = std::min(cert.observed_lower, ratio);
      cert.observed_upper = std::max(cert.observed_upper, ratio);
      if (ratio < cert.bilip_lower * (1.0 - kRel) || ratio > cert.bilip_upper * (1.0 + kRel)) {
        cert.bilipschitz = false;
      }
    }
  }
  if (n < 2) cert.observed_lower = cert.observed_upper = 1.0;
  cert.sequence = std::move(seq);
  return cert;
}

// ---------------------------------------------------------------------------
// Covering counts

std::size_t greedy_net_count(const PointSet2D& ps, Complex center, double big_radius, double r) {
  if (!(r > 0.0)) throw DomainError("greedy_net_count: r must be positive");
  struct KeyHash {
    std::size_t operator()(const std::pair<long long, long long>& k) const {
      return std::hash<long long>()(k.first * 0x9E3779B97F4A7C15LL ^ k.second);
    }
  };
  std::unordered_map<std::pair<long long, long long>, std::vector<Complex>, KeyHash> cells;
  const auto cell_of = [&](Complex w) {
    return std::pair<long long, long long>{static_cast<long long>(std::floor(w.real() / r)),
                                           static_cast<long long>(std::floor(w.imag() / r))};
  };
  std::size_t count = 0;
  for (const auto& p : ps.points()) {
    if (p.infinite) continue;
    const Complex w = p.z - center;
    if (std::abs(w) > big_radius) continue;
    const auto [cx, cy] = cell_of(w);
    bool covered = false;
    for (long long dx = -1; dx <= 1 && !covered; ++dx) {
      for (long long dy = -1; dy <= 1 && !covered; ++dy) {
        const auto it = cells.find({cx + dx, cy + dy});
        if (it == cells.end()) continue;
        covered = std::any_of(it->second.begin(), it->second.end(),
                              [&](const Complex& q) { return std::abs(q - w) <= r; });
      }
    }
    if (!covered) {
      cells[{cx, cy}].push_back(w);
      ++count;
    }
  }
  return count;
}

CoveringExponent covering_exponent(const PointSet2D& ps, Complex center, double big_radius,
                                   const std::vector<double>& r_list) {
  if (r_list.size() < 2) throw DomainError("covering_exponent: need at least two radii");
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    if (!(r_list[i] > 0.0) || !(r_list[i] < big_radius)) {
      throw DomainError("covering_exponent: radii must lie in (0, R)");
    }
    if (i > 0 && !(r_list[i] < r_list[i - 1])) {
      throw DomainError("covering_exponent: radii must be strictly decreasing");
    }
  }
  CoveringExponent out;
  out.center = center;
  out.big_radius = big_radius;
  out.radii = r_list;
  std::vector<double> xs, ys;
  for (double r : r_list) {
    const auto n = greedy_net_count(ps, center, big_radius, r);
    out.counts.push_back(n);
    xs.push_back(std::log(big_radius / r));
    ys.push_back(std::log(static_cast<double>(std::max<std::size_t>(n, 1))));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  out.s_hat = sxy / sxx;
  return out;
}

}  // namespace nagata
