#include "nagata/spiral_porosity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "nagata/errors.hpp"
#include "nagata/text.hpp"

namespace nagata {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace {

constexpr double kPi = std::numbers::pi;

void check_p(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("spiral exponent p must be positive");
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < kPi / 2)) throw DomainError("eps_angle must lie in (0, pi/2)");
}

}  // namespace

SpiralParams spiral_constants(double p, double c, double eps_angle) {
  check_p(p);
  check_eps(eps_angle);
  if (!(c > 0.0 && c < 0.5)) throw DomainError("porosity constant c must lie in (0, 1/2)");
  const double root = std::pow(1.0 - 2.0 * c, 1.0 / p);
  const double need = std::max(3.0 * p / (4.0 * c), 2.0 * root / (1.0 - root));
  SpiralParams out;
  out.p = p;
  out.eps_angle = eps_angle;
  out.c = c;
  out.k0 = std::max(1, static_cast<int>(std::ceil(need * (1.0 - 1e-9))));
  out.r0 = std::pow(2.0 * out.k0, -p);
  return out;
}

Complex spiral_point(double p, double t) { return std::polar(std::pow(t, -p), kPi * t); }

PointSet2D spiral_sample(double p, double t_max, const SpiralSamplePolicy& policy, double t_min) {
  check_p(p);
  if (!(t_min >= 1.0) || !(t_max > t_min)) throw DomainError("spiral_sample needs 1 <= t_min < t_max");
  if (!(policy.rel_turn > 0.0) || policy.min_arc < 0.0 || !(policy.max_arc > 0.0)) {
    throw DomainError("spiral_sample: invalid step policy");
  }
  std::vector<Complex> pts;
  double t = t_min;
  while (t < t_max) {
    pts.push_back(spiral_point(p, t));
    const double turn_gap = std::pow(t, -p) - std::pow(t + 2.0, -p);
    const double arc = std::clamp(policy.rel_turn * turn_gap, policy.min_arc, policy.max_arc);
    const double speed = std::pow(t, -p) * std::hypot(p / t, kPi);
    t += arc / speed;
  }
  pts.push_back(spiral_point(p, t_max));
  return PointSet2D::from_complex(pts);
}

bool in_spiral_domain(Complex z, double p, double eps_angle) {
  const double r = std::abs(z);
  if (!(r > 0.0) || !(r < 1.0)) return false;
  const double t = std::pow(r, -1.0 / p);
  const double theta = std::remainder(std::arg(z) - kPi * t, 2.0 * kPi);
  return std::abs(theta) < eps_angle + 1e-12;
}

RayGapReport ray_gap_report(const SpiralParams& params, double alpha, int k_max) {
  check_p(params.p);
  check_eps(params.eps_angle);
  if (!(alpha >= -kPi && alpha < kPi)) throw DomainError("alpha must lie in [-pi, pi)");
  if (k_max <= params.k0) throw DomainError("k_max must exceed k0");
  const double p = params.p;
  const double hi_shift = (alpha + params.eps_angle) / kPi;
  const double lo_shift = (alpha - params.eps_angle) / kPi;
  RayGapReport out;
  out.alpha = alpha;
  out.k0 = params.k0;
  out.bound = 2.0 * params.c * params.r0;
  out.midpoints_inside = true;
  for (int k = params.k0; k <= k_max; ++k) {
    const double a = std::pow(2.0 * k + hi_shift, -p);
    const double b = std::pow(2.0 * k + lo_shift, -p);
    out.intervals.emplace_back(a, b);
    if (!in_spiral_domain(std::polar(0.5 * (a + b), alpha), p, params.eps_angle)) out.midpoints_inside = false;
  }
  out.gaps.push_back(params.r0 - out.intervals[1].first);
  out.mean_value_ok = true;
  for (int k = params.k0 + 1; k < k_max; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - params.k0);
    const double gap = out.intervals[i].second - out.intervals[i + 1].first;
    out.gaps.push_back(gap);
    if (gap > 3.0 * p * std::pow(2.0 * k - 1.5, -p - 1.0)) out.mean_value_ok = false;
  }
  out.max_gap = *std::max_element(out.gaps.begin(), out.gaps.end());
  out.pass = out.max_gap < out.bound;
  return out;
}

void write_rays_csv(std::ostream& out, std::span<const RayGapReport> reports) {
  out << "alpha,k,a_k,b_k,gap,bound,pass\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.gaps.size(); ++i) {
      const auto [a, b] = r.intervals[i];
      out << text::format_double(r.alpha) << ',' << r.k0 + static_cast<int>(i) << ',' << text::format_double(a)
          << ',' << text::format_double(b) << ',' << text::format_double(r.gaps[i]) << ','
          << text::format_double(r.bound) << ',' << (r.gaps[i] < r.bound ? "true" : "false") << '\n';
    }
  }
}

std::vector<Complex> select_probe_centers(const PointSet2D& ps, const PorosityWindow& window,
                                          const PorosityGrid& grid) {
  std::vector<Complex> eligible;
  const double lo = grid.inner_fraction * window.radius;
  for (const auto& p : ps.points()) {
    if (p.infinite) continue;
    const double d = std::abs(p.z - window.center);
    if (d >= lo && d <= window.radius) eligible.push_back(p.z);
  }
  if (grid.max_probes == 0 || eligible.size() <= grid.max_probes) return eligible;
  std::vector<Complex> out;
  out.reserve(grid.max_probes);
  for (std::size_t i = 0; i < grid.max_probes; ++i) out.push_back(eligible[i * eligible.size() / grid.max_probes]);
  return out;
}

PorosityEstimate porosity_at(const PointSet2D& ps, const PorosityWindow& window, std::span<const Complex> centers,
                             const PorosityGrid& grid) {
  if (grid.probe_radii.empty()) throw DomainError("porosity needs at least one probe radius");
  if (centers.empty()) throw DomainError("porosity needs at least one probe center");
  if (!(grid.candidate_spacing > 0.0 && grid.candidate_spacing < 1.0)) {
    throw DomainError("candidate spacing must lie in (0, 1)");
  }
  for (double r : grid.probe_radii)
    if (!(r > 0.0)) throw DomainError("probe radii must be positive");

  using Point = bg::model::d2::point_xy<double>;
  std::vector<Point> pts;
  pts.reserve(ps.size());
  for (const auto& p : ps.points())
    if (!p.infinite) pts.emplace_back(p.z.real(), p.z.imag());
  if (pts.empty()) throw DomainError("porosity of an empty set");
  const bgi::rtree<Point, bgi::rstar<16>> tree(pts.begin(), pts.end());

  PorosityEstimate out;
  out.window = window;
  out.probe_radii = grid.probe_radii;
  out.c_hat = 1.0;
  for (double r : grid.probe_radii) {
    const double h = grid.candidate_spacing * r;
    const double row = h * std::sqrt(3.0) / 2.0;
    const int rows = static_cast<int>(std::ceil(r / row));
    const int cols = static_cast<int>(std::ceil(r / h)) + 1;
    for (Complex x : centers) {
      PorosityProbe probe{x, r, 0.0, x};
      for (int j = -rows; j <= rows; ++j) {
        const double dy = j * row;
        const double shift = (j & 1) ? 0.5 * h : 0.0;
        for (int i = -cols; i <= cols; ++i) {
          const Complex z = x + Complex(i * h + shift, dy);
          const double room = r - std::abs(z - x);
          if (room <= probe.best_ratio * r) continue;
          Point nearest;
          tree.query(bgi::nearest(Point(z.real(), z.imag()), 1), &nearest);
          const double empty = std::min(std::hypot(nearest.x() - z.real(), nearest.y() - z.imag()), room);
          if (empty > probe.best_ratio * r) {
            probe.best_ratio = empty / r;
            probe.best_center = z;
          }
        }
      }
      out.c_hat = std::min(out.c_hat, probe.best_ratio);
      out.probes.push_back(probe);
    }
  }
  return out;
}

PorosityEstimate porosity_estimate(const PointSet2D& ps, const PorosityWindow& window, const PorosityGrid& grid) {
  const auto centers = select_probe_centers(ps, window, grid);
  return porosity_at(ps, window, centers, grid);
}

void write_porosity_csv(std::ostream& out, const PorosityEstimate& est) {
  out << "x,y,r,best_ratio\n";
  for (const auto& p : est.probes) {
    out << text::format_double(p.x.real()) << ',' << text::format_double(p.x.imag()) << ','
        << text::format_double(p.r) << ',' << text::format_double(p.best_ratio) << '\n';
  }
}

}  // namespace nagata
