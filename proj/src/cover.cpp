#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "detail.hpp"
#include "nagata/errors.hpp"
#include "nagata/metric_core.hpp"

namespace nagata {

void Cover::validate(std::size_t point_count) const {
  if (blocks.empty()) throw DomainError("cover has no blocks");
  if (!(scale > 0.0)) throw DomainError("cover scale must be positive");
  if (!(bound_constant >= 1.0)) throw DomainError("cover bound constant must be >= 1");
  if (claimed_multiplicity < 1) throw DomainError("claimed multiplicity must be >= 1");
  std::vector<bool> covered(point_count, false);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw DomainError("cover block " + std::to_string(b) + " is empty");
    for (auto i : blocks[b]) {
      if (i >= point_count) throw DomainError("cover block " + std::to_string(b) + " indexes a missing point");
      covered[i] = true;
    }
  }
  const auto missing = std::find(covered.begin(), covered.end(), false);
  if (missing != covered.end()) {
    throw DomainError("cover misses point " + std::to_string(missing - covered.begin()));
  }
}

namespace {

using Graph = std::vector<std::vector<bool>>;

// Bron-Kerbosch with Tomita pivoting; records one maximum clique.
class MaxClique {
 public:
  explicit MaxClique(const Graph& g) : g_(g) {}

  std::vector<std::size_t> run() {
    std::vector<std::size_t> p(g_.size());
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::vector<std::size_t> r;
    expand(r, p, {});
    return best_;
  }

 private:
  void expand(std::vector<std::size_t>& r, std::vector<std::size_t> p, std::vector<std::size_t> x) {
    if (p.empty() && x.empty()) {
      if (r.size() > best_.size()) best_ = r;
      return;
    }
    if (r.size() + p.size() <= best_.size()) return;
    std::size_t pivot = p.empty() ? x.front() : p.front();
    std::size_t pivot_degree = 0;
    for (const auto* set : {&p, &x}) {
      for (auto u : *set) {
        std::size_t deg = 0;
        for (auto v : p) deg += g_[u][v] ? 1 : 0;
        if (deg >= pivot_degree) {
          pivot_degree = deg;
          pivot = u;
        }
      }
    }
    std::vector<std::size_t> candidates;
    for (auto v : p)
      if (!g_[pivot][v]) candidates.push_back(v);
    for (auto v : candidates) {
      std::vector<std::size_t> p2, x2;
      for (auto u : p)
        if (g_[v][u]) p2.push_back(u);
      for (auto u : x)
        if (g_[v][u]) x2.push_back(u);
      r.push_back(v);
      expand(r, std::move(p2), std::move(x2));
      r.pop_back();
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  }

  const Graph& g_;
  std::vector<std::size_t> best_;
};

// Largest family of blocks admitting one representative each, pairwise
// within s: a set of diameter <= s meeting exactly those blocks.
class ExactMultiplicity {
 public:
  ExactMultiplicity(const Cover& cover, const detail::PairDistance& dist)
      : cover_(cover), dist_(dist) {}

  std::vector<std::size_t> run() {
    search(0);
    return best_blocks_;
  }

 private:
  void search(std::size_t block) {
    if (chosen_blocks_.size() > best_blocks_.size()) best_blocks_ = chosen_blocks_;
    if (block == cover_.blocks.size()) return;
    if (chosen_blocks_.size() + (cover_.blocks.size() - block) <= best_blocks_.size()) return;
    for (auto p : cover_.blocks[block]) {
      const bool compatible = std::all_of(chosen_points_.begin(), chosen_points_.end(),
                                          [&](std::size_t q) { return dist_(p, q) <= cover_.scale; });
      if (!compatible) continue;
      chosen_points_.push_back(p);
      chosen_blocks_.push_back(block);
      search(block + 1);
      chosen_points_.pop_back();
      chosen_blocks_.pop_back();
    }
    search(block + 1);
  }

  const Cover& cover_;
  const detail::PairDistance& dist_;
  std::vector<std::size_t> chosen_points_;
  std::vector<std::size_t> chosen_blocks_;
  std::vector<std::size_t> best_blocks_;
};

}  // namespace

CoverVerdict verify_cover(const PointSet2D& ps, const Cover& cover, const MetricKind& metric,
                          MultiplicityMode mode) {
  cover.validate(ps.size());
  if (mode == MultiplicityMode::kExact && cover.blocks.size() > kMaxExactBlocks) {
    throw DomainError("exact multiplicity mode is limited to " + std::to_string(kMaxExactBlocks) +
                      " blocks");
  }
  CoverVerdict verdict;
  verdict.bounded = true;
  const double limit = cover.bound_constant * cover.scale;
  for (const auto& block : cover.blocks) {
    const double diam = subset_diameter(ps, block, metric);
    verdict.max_block_diameter = std::max(verdict.max_block_diameter, diam);
    if (diam > limit) verdict.bounded = false;
  }

  std::vector<std::size_t> clique;
  if (mode == MultiplicityMode::kExact) {
    const detail::PairDistance dist(ps, metric);
    clique = ExactMultiplicity(cover, dist).run();
    verdict.exact = true;
  } else {
    const std::size_t nb = cover.blocks.size();
    std::vector<std::vector<std::size_t>> blocks_of(ps.size());
    for (std::size_t b = 0; b < nb; ++b)
      for (auto i : cover.blocks[b]) blocks_of[i].push_back(b);

    Graph g(nb, std::vector<bool>(nb, false));
    const auto link = [&](std::size_t i, std::size_t j) {
      for (auto a : blocks_of[i])
        for (auto b : blocks_of[j])
          if (a != b) g[a][b] = g[b][a] = true;
    };
    for (std::size_t i = 0; i < ps.size(); ++i) link(i, i);  // shared points
    detail::for_each_close_pair(ps, cover.scale, metric, link);
    clique = MaxClique(g).run();
    bool disjoint = true;
    for (std::size_t a = 0; a < nb && disjoint; ++a)
      disjoint = std::none_of(g[a].begin(), g[a].end(), [](bool e) { return e; });
    verdict.exact = disjoint || clique.size() <= 2;
  }
  verdict.multiplicity_upper = static_cast<int>(std::max<std::size_t>(clique.size(), 1));
  verdict.within_claim = verdict.multiplicity_upper <= cover.claimed_multiplicity;
  if (!verdict.within_claim) {
    std::sort(clique.begin(), clique.end());
    verdict.witness = clique;
  }
  return verdict;
}

std::vector<std::vector<std::size_t>> threshold_graph(const PointSet2D& ps, double s,
                                                      const MetricKind& metric) {
  if (!(s > 0.0)) throw DomainError("threshold scale must be positive");
  std::vector<std::vector<std::size_t>> adj(ps.size());
  detail::for_each_close_pair(ps, s, metric, [&](std::size_t i, std::size_t j) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  });
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

ChainDecomposition s_chain_components(const PointSet2D& ps, double s, const MetricKind& metric) {
  if (!(s > 0.0)) throw DomainError("s_chain_components: s must be positive");
  detail::UnionFind uf(ps.size());
  detail::for_each_close_pair(ps, s, metric, [&](std::size_t i, std::size_t j) { uf.unite(i, j); });

  ChainDecomposition out;
  out.scale = s;
  std::map<std::size_t, std::size_t> slot_of_root;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto root = uf.find(i);
    auto [it, inserted] = slot_of_root.try_emplace(root, out.components.size());
    if (inserted) out.components.emplace_back();
    out.components[it->second].push_back(i);
  }
  out.diameters.reserve(out.components.size());
  for (const auto& comp : out.components) out.diameters.push_back(subset_diameter(ps, comp, metric));
  return out;
}

}  // namespace nagata
