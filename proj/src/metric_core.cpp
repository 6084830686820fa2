#include "nagata/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "detail.hpp"
#include "nagata/errors.hpp"
#include "nagata/text.hpp"

namespace nagata {

// ---------------------------------------------------------------------------
// PointSet2D

PointSet2D::PointSet2D(std::vector<ExtPoint> points, std::vector<std::string> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (!labels_.empty() && labels_.size() != points_.size()) {
    throw DomainError("PointSet2D: label count does not match point count");
  }
  std::vector<std::size_t> order;
  order.reserve(points_.size());
  std::size_t infinities = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (p.infinite) {
      ++infinities;
      continue;
    }
    if (!std::isfinite(p.z.real()) || !std::isfinite(p.z.imag())) {
      throw DomainError("PointSet2D: non-finite coordinate at index " + std::to_string(i));
    }
    order.push_back(i);
  }
  if (infinities > 1) throw DomainError("PointSet2D: infinity marker appears more than once");

  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return points_[a].z.real() < points_[b].z.real();
  });
  for (std::size_t a = 0; a < order.size(); ++a) {
    const Complex za = points_[order[a]].z;
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const Complex zb = points_[order[b]].z;
      if (zb.real() - za.real() > kDuplicateTolerance) break;
      if (std::abs(zb - za) <= kDuplicateTolerance) {
        throw DomainError("PointSet2D: duplicate points at indices " +
                          std::to_string(std::min(order[a], order[b])) + " and " +
                          std::to_string(std::max(order[a], order[b])));
      }
    }
  }
}

PointSet2D PointSet2D::from_complex(std::span<const Complex> values) {
  std::vector<ExtPoint> pts(values.begin(), values.end());
  return PointSet2D(std::move(pts));
}

bool PointSet2D::has_infinity() const {
  return std::any_of(points_.begin(), points_.end(), [](const ExtPoint& p) { return p.infinite; });
}

std::vector<Complex> PointSet2D::finite_values() const {
  std::vector<Complex> out;
  out.reserve(points_.size());
  for (const auto& p : points_) {
    if (p.infinite) throw DomainError("point set contains the infinity marker");
    out.push_back(p.z);
  }
  return out;
}

PointSet2D PointSet2D::subset(std::span<const std::size_t> indices) const {
  std::vector<ExtPoint> pts;
  std::vector<std::string> labels;
  pts.reserve(indices.size());
  for (auto i : indices) {
    pts.push_back(points_.at(i));
    if (!labels_.empty()) labels.push_back(labels_[i]);
  }
  return PointSet2D(std::move(pts), std::move(labels));
}

// ---------------------------------------------------------------------------
// RatioSequence

RatioSequence::RatioSequence(Complex basepoint, double lambda, std::vector<Complex> points)
    : basepoint_(basepoint), lambda_(lambda), points_(std::move(points)) {
  radii_.reserve(points_.size());
  for (const auto& z : points_) radii_.push_back(std::abs(z - basepoint_));
  for (std::size_t k = 1; k < radii_.size(); ++k) {
    if (!(radii_[k] > radii_[k - 1])) {
      throw DomainError("RatioSequence: radii must be strictly increasing");
    }
  }
}

std::optional<std::size_t> RatioSequence::index_of(Complex z) const {
  const double r = std::abs(z - basepoint_);
  // Radii are strictly increasing, so only neighbours of the insertion
  // point can match.
  auto it = std::lower_bound(radii_.begin(), radii_.end(), r - PointSet2D::kDuplicateTolerance);
  for (; it != radii_.end() && *it <= r + PointSet2D::kDuplicateTolerance; ++it) {
    const auto k = static_cast<std::size_t>(it - radii_.begin());
    if (std::abs(points_[k] - z) <= PointSet2D::kDuplicateTolerance) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Metrics

std::string metric_name(const MetricKind& metric) {
  switch (metric.index()) {
    case 0: return "euclidean";
    case 1: return "spherical";
    default: return "ultrametric-ratio";
  }
}

double spherical_distance(const ExtPoint& a, const ExtPoint& b) {
  if (a.infinite && b.infinite) return 0.0;
  if (a.infinite) return 1.0 / std::sqrt(1.0 + std::norm(b.z));
  if (b.infinite) return 1.0 / std::sqrt(1.0 + std::norm(a.z));
  return std::abs(a.z - b.z) / std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

ExtPoint invert(const ExtPoint& p) {
  if (p.infinite) return ExtPoint(Complex{0.0, 0.0});
  if (p.z == Complex{0.0, 0.0}) return ExtPoint::infinity();
  return ExtPoint(1.0 / p.z);
}

double distance(const ExtPoint& a, const ExtPoint& b, const MetricKind& metric) {
  if (std::holds_alternative<Spherical>(metric)) return spherical_distance(a, b);
  if (a.infinite || b.infinite) {
    throw DomainError("infinity marker is only allowed under the spherical metric");
  }
  if (std::holds_alternative<Euclidean>(metric)) return std::abs(a.z - b.z);

  const auto& seq = std::get<UltrametricRatio>(metric).sequence;
  if (!seq) throw DomainError("ultrametric metric without a registered ratio sequence");
  const auto m = seq->index_of(a.z);
  const auto n = seq->index_of(b.z);
  if (!m || !n) throw DomainError("point is not part of the registered ratio sequence");
  return seq->ultrametric(*m, *n);
}

namespace detail {

PairDistance::PairDistance(const PointSet2D& ps, const MetricKind& metric)
    : ps_(ps), metric_(metric) {
  if (const auto* u = std::get_if<UltrametricRatio>(&metric)) {
    if (!u->sequence) throw DomainError("ultrametric metric without a registered ratio sequence");
    sequence_index_.reserve(ps.size());
    for (const auto& p : ps.points()) {
      if (p.infinite) throw DomainError("infinity marker is only allowed under the spherical metric");
      const auto k = u->sequence->index_of(p.z);
      if (!k) throw DomainError("point is not part of the registered ratio sequence");
      sequence_index_.push_back(*k);
    }
  } else if (std::holds_alternative<Euclidean>(metric) && ps.has_infinity()) {
    throw DomainError("infinity marker is only allowed under the spherical metric");
  }
}

double PairDistance::operator()(std::size_t i, std::size_t j) const {
  if (!sequence_index_.empty()) {
    const auto& u = std::get<UltrametricRatio>(metric_);
    return u.sequence->ultrametric(sequence_index_[i], sequence_index_[j]);
  }
  if (std::holds_alternative<Euclidean>(metric_)) return std::abs(ps_[i].z - ps_[j].z);
  return spherical_distance(ps_[i], ps_[j]);
}

void for_each_close_pair(const PointSet2D& ps, double s, const MetricKind& metric,
                         const std::function<void(std::size_t, std::size_t)>& f) {
  const PairDistance dist(ps, metric);
  const std::size_t n = ps.size();
  if (std::holds_alternative<Euclidean>(metric)) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ps[a].z.real() < ps[b].z.real(); });
    for (std::size_t a = 0; a < n; ++a) {
      const Complex za = ps[order[a]].z;
      for (std::size_t b = a + 1; b < n; ++b) {
        const Complex zb = ps[order[b]].z;
        if (zb.real() - za.real() > s) break;
        if (std::abs(zb - za) <= s) f(std::min(order[a], order[b]), std::max(order[a], order[b]));
      }
    }
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist(i, j) <= s) f(i, j);
    }
  }
}

std::pair<std::size_t, std::size_t> diametral_pair(std::span<const Complex> points) {
  std::pair<std::size_t, std::size_t> best_pair{0, 0};
  double best = -1.0;
  const auto consider = [&](std::size_t i, std::size_t j) {
    const double d = std::abs(points[i] - points[j]);
    if (d > best) {
      best = d;
      best_pair = {std::min(i, j), std::max(i, j)};
    }
  };
  if (points.size() < 2) return best_pair;
  if (points.size() <= 32) {
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j) consider(i, j);
    return best_pair;
  }
  // Andrew's monotone chain; the diameter is attained on hull vertices.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Complex& pa = points[a];
    const Complex& pb = points[b];
    return pa.real() < pb.real() || (pa.real() == pb.real() && pa.imag() < pb.imag());
  });
  const auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    const Complex& po = points[o];
    const Complex& pa = points[a];
    const Complex& pb = points[b];
    return (pa.real() - po.real()) * (pb.imag() - po.imag()) -
           (pa.imag() - po.imag()) * (pb.real() - po.real());
  };
  std::vector<std::size_t> hull(2 * order.size());
  std::size_t k = 0;
  for (auto p : order) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = order.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], order[i]) <= 0) --k;
    hull[k++] = order[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j) consider(hull[i], hull[j]);
  return best_pair;
}

double euclidean_diameter(std::span<const Complex> points) {
  if (points.size() < 2) return 0.0;
  const auto [i, j] = diametral_pair(points);
  return std::abs(points[i] - points[j]);
}

}  // namespace detail

double subset_diameter(const PointSet2D& ps, std::span<const std::size_t> indices,
                       const MetricKind& metric) {
  if (indices.size() < 2) return 0.0;
  if (std::holds_alternative<Euclidean>(metric)) {
    std::vector<Complex> pts;
    pts.reserve(indices.size());
    for (auto i : indices) {
      if (ps[i].infinite) throw DomainError("infinity marker is only allowed under the spherical metric");
      pts.push_back(ps[i].z);
    }
    return detail::euclidean_diameter(pts);
  }
  const detail::PairDistance dist(ps, metric);
  double best = 0.0;
  for (std::size_t a = 0; a < indices.size(); ++a)
    for (std::size_t b = a + 1; b < indices.size(); ++b)
      best = std::max(best, dist(indices[a], indices[b]));
  return best;
}

double diameter(const PointSet2D& ps, const MetricKind& metric) {
  std::vector<std::size_t> all(ps.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return subset_diameter(ps, all, metric);
}

// ---------------------------------------------------------------------------
// CSV

PointSet2D read_points_csv(std::istream& in) {
  std::vector<ExtPoint> points;
  std::vector<std::string> labels;
  bool any_label = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = text::split(body, ',');
    if (fields.size() < 2 || fields.size() > 3) {
      throw DomainError("points csv line " + std::to_string(line_no) + ": expected re,im[,label]");
    }
    const auto re = text::trim(fields[0]);
    const auto im = text::trim(fields[1]);
    if (re == "inf" && im == "inf") {
      points.push_back(ExtPoint::infinity());
    } else {
      points.emplace_back(text::parse_double(re), text::parse_double(im));
    }
    if (fields.size() == 3) {
      labels.emplace_back(text::trim(fields[2]));
      any_label = true;
    } else {
      labels.emplace_back();
    }
  }
  if (!any_label) labels.clear();
  return PointSet2D(std::move(points), std::move(labels));
}

void write_points_csv(std::ostream& out, const PointSet2D& ps) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& p = ps[i];
    if (p.infinite) {
      out << "inf,inf";
    } else {
      out << text::format_double(p.z.real()) << ',' << text::format_double(p.z.imag());
    }
    if (ps.has_labels() && !ps.labels()[i].empty()) {
      if (ps.labels()[i].find(',') != std::string::npos) {
        throw DomainError("points csv: labels must not contain commas");
      }
      out << ',' << ps.labels()[i];
    }
    out << '\n';
  }
}

}  // namespace nagata
