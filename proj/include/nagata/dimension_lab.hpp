#pragma once

// Scale-windowed dimension evidence for finite planar sets.
//
// Every finite set has Nagata dimension zero, so nothing here decides the
// dimension of an infinite set. A certificate samples a window of scales:
// "dimension zero behaviour" means the s-component diameter ratio stays
// bounded across the window, "dimension >= 1 behaviour" means it grows as
// the window widens (or delta-chains of growing diameter exist).

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "nagata/metric_core.hpp"

namespace nagata {

struct ScaleGrid {
  double s_min = 1.0;
  double s_max = 2.0;
  double ratio = 2.0;

  // s_i = s_min * ratio^i for all s_i <= s_max (relative slack 1e-12).
  std::vector<double> scales() const;
  // At least three scales, s_min > 0, s_max > s_min, ratio > 1.
  void validate() const;
};

struct ScaleRecord {
  double scale = 0.0;
  std::size_t component_count = 0;
  double max_diameter = 0.0;
  double max_ratio = 0.0;  // max component diameter / scale
};

struct Ndim0Certificate {
  ScaleGrid grid;
  std::vector<ScaleRecord> per_scale;
  double constant = 0.0;  // C, max of per_scale max_ratio
  double c_max = 0.0;
  bool pass = false;
};

Ndim0Certificate ndim0_certificate(const PointSet2D& ps, const ScaleGrid& grid,
                                   const MetricKind& metric, double c_max);

// Pass threshold when none is given: four times the theoretical constant
// when one is known, else 40.
double default_c_max(std::optional<double> theoretical_constant);

// The points lambda^1, ..., lambda^n on the real axis.
PointSet2D exp_sequence_points(double lambda, std::size_t n);

// Least N >= 0 with lambda^(N-1) (lambda-1) <= s < lambda^N (lambda-1);
// zero when s < lambda - 1.
int exp_sequence_head_size(double lambda, double s);

// Cover of exp_sequence_points(lambda, n_points) at scale s: one block for
// lambda^1..lambda^N, then singletons. Bound constant lambda/(lambda-1),
// claimed multiplicity 1. When N >= n_points the cover is a single block.
Cover exp_sequence_cover(double lambda, std::size_t n_points, double s);

struct ChainGrowthWitness {
  double delta = 0.0;
  std::vector<std::vector<std::size_t>> chains;  // index paths
  std::vector<double> diameters;                 // strictly increasing
};

// Delta-chains of strictly increasing diameter under the Euclidean metric.
// For every delta-component a shortest chain between a farthest pair is
// extracted and its prefixes of length 2, 4, 8, ... (plus the full chain)
// are the candidates. Returns nullopt when fewer than min_chains chains of
// distinct positive diameter exist.
std::optional<ChainGrowthWitness> chain_growth_witness(const PointSet2D& ps, double delta,
                                                       std::size_t min_chains);

// Consecutive Euclidean gaps along the path are all <= delta.
bool is_delta_chain(const PointSet2D& ps, const std::vector<std::size_t>& path, double delta);

struct RatioSequenceCertificate {
  Complex basepoint{};
  double lambda = 0.0;
  bool checked = false;
  double bilip_lower = 0.0;  // lambda / (lambda + 1)
  double bilip_upper = 0.0;  // lambda / (lambda - 1)
  // Least consecutive ratio r_{k+1} / r_k observed.
  double min_ratio = 0.0;
  // Only meaningful when checked: results of the all-triples and all-pairs
  // verification of d_U.
  bool strong_triangle = false;
  bool bilipschitz = false;
  // Worst d_U / d over all pairs (lowest, highest).
  double observed_lower = 0.0;
  double observed_upper = 0.0;
  // Registered sequence for MetricKind::UltrametricRatio; null unless checked.
  std::shared_ptr<const RatioSequence> sequence;

  MetricKind metric() const { return UltrametricRatio{sequence}; }
};

// Relative slack on r_{k+1} >= lambda r_k, absorbing the rounding of
// sequences such as e^k that satisfy the ratio exactly in real arithmetic.
inline constexpr double kRatioSlack = 1e-12;

// Points are taken in order of increasing distance from o. Tied distances
// are a DomainError (d_U would be ill-defined).
RatioSequenceCertificate ratio_sequence_certificate(const PointSet2D& ps, Complex o, double lambda);

struct CoveringExponent {
  Complex center{};
  double big_radius = 0.0;
  std::vector<double> radii;
  std::vector<std::size_t> counts;
  double s_hat = 0.0;
};

// Size of a greedy r-net of ps ∩ B(center, R): points are scanned in index
// order and kept when farther than r from every kept point.
std::size_t greedy_net_count(const PointSet2D& ps, Complex center, double big_radius, double r);

// Least-squares slope of log N(r) against log(R / r). r_list must be
// strictly decreasing with every r < R and hold at least two radii.
CoveringExponent covering_exponent(const PointSet2D& ps, Complex center, double big_radius,
                                   const std::vector<double>& r_list);

}  // namespace nagata
