#pragma once

// Polynomial spirals S_p = {t^-p e^{i pi t} : t >= 1}, their angular
// thickenings Omega_p, ray gaps of Omega_p near 0 and an empirical porosity
// estimator.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "nagata/metric_core.hpp"

namespace nagata {

struct SpiralParams {
  double p = 1.0;
  double eps_angle = 0.7853981633974483;  // pi/4
  double c = 0.1;                         // porosity constant, < 1/2
  int k0 = 0;
  double r0 = 0.0;  // (2 k0)^-p
};

// k0 = ceil(max{3p/(4c), 2(1-2c)^(1/p) / (1 - (1-2c)^(1/p))}), taken with
// 1e-9 relative slack so that exact integers are not pushed up by rounding.
SpiralParams spiral_constants(double p, double c, double eps_angle = 0.7853981633974483);

Complex spiral_point(double p, double t);

// Arc step between consecutive samples: rel_turn times the radial distance
// to the next turn, clamped to [min_arc, max_arc].
struct SpiralSamplePolicy {
  double rel_turn = 0.25;
  double min_arc = 0.0;
  double max_arc = std::numeric_limits<double>::infinity();
};

// Samples for t in [t_min, t_max], both endpoints included; moduli strictly
// decrease.
PointSet2D spiral_sample(double p, double t_max, const SpiralSamplePolicy& policy = {}, double t_min = 1.0);

// z in Omega_p: t = |z|^(-1/p) > 1 and arg z - pi t within eps of 0 mod 2 pi
// (1e-12 slack).
bool in_spiral_domain(Complex z, double p, double eps_angle);

struct RayGapReport {
  double alpha = 0.0;
  int k0 = 0;
  std::vector<std::pair<double, double>> intervals;  // (a_k, b_k), k = k0..k_max
  // gaps[0] = r0 - a_{k0+1}; gaps[i] = b_k - a_{k+1} with k = k0 + i.
  std::vector<double> gaps;
  double max_gap = 0.0;
  double bound = 0.0;  // 2 c r0
  bool pass = false;   // max_gap < bound
  // b_k - a_{k+1} <= 3p (2k - 3/2)^(-p-1) for every k >= k0 + 1.
  bool mean_value_ok = false;
  bool midpoints_inside = false;  // every (a_k + b_k)/2 e^{i alpha} lies in Omega_p
};

RayGapReport ray_gap_report(const SpiralParams& params, double alpha, int k_max);

// alpha,k,a_k,b_k,gap,bound,pass; one row per gap.
void write_rays_csv(std::ostream& out, std::span<const RayGapReport> reports);

struct PorosityWindow {
  Complex center{};
  double radius = 1.0;
};

struct PorosityGrid {
  std::vector<double> probe_radii;  // absolute radii
  // Probe centers are points x of the set with
  // inner_fraction R <= |x - center| <= R, strided down to max_probes.
  double inner_fraction = 0.0;
  std::size_t max_probes = 256;
  double candidate_spacing = 0.05;  // hexagonal lattice step, as a fraction of r
};

struct PorosityProbe {
  Complex x{};
  double r = 0.0;
  double best_ratio = 0.0;  // max over candidates z of min(d(z, E), r - |z - x|) / r
  Complex best_center{};
};

struct PorosityEstimate {
  PorosityWindow window;
  std::vector<double> probe_radii;
  std::vector<PorosityProbe> probes;
  double c_hat = 0.0;  // min best_ratio
};

std::vector<Complex> select_probe_centers(const PointSet2D& ps, const PorosityWindow& window,
                                          const PorosityGrid& grid);

// Fixed probe centers; c_hat never increases when points are added to ps.
PorosityEstimate porosity_at(const PointSet2D& ps, const PorosityWindow& window, std::span<const Complex> centers,
                             const PorosityGrid& grid);

PorosityEstimate porosity_estimate(const PointSet2D& ps, const PorosityWindow& window, const PorosityGrid& grid);

// x,y,r,best_ratio
void write_porosity_csv(std::ostream& out, const PorosityEstimate& est);

}  // namespace nagata
