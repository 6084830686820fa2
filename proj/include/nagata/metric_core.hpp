#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nagata {

using Complex = std::complex<double>;

// A point of the extended plane. The infinity marker is only meaningful
// under the spherical metric.
struct ExtPoint {
  Complex z{};
  bool infinite = false;

  ExtPoint() = default;
  ExtPoint(Complex value) : z(value) {}  // NOLINT: implicit by intent
  ExtPoint(double re, double im) : z(re, im) {}

  static ExtPoint infinity() {
    ExtPoint p;
    p.infinite = true;
    return p;
  }

  friend bool operator==(const ExtPoint& a, const ExtPoint& b) {
    return a.infinite == b.infinite && (a.infinite || a.z == b.z);
  }
};

// Finite labeled point set in the extended plane. Construction rejects
// points closer than kDuplicateTolerance to each other; order is stable.
class PointSet2D {
 public:
  static constexpr double kDuplicateTolerance = 1e-12;

  PointSet2D() = default;
  explicit PointSet2D(std::vector<ExtPoint> points, std::vector<std::string> labels = {});

  static PointSet2D from_complex(std::span<const Complex> values);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const ExtPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<ExtPoint>& points() const { return points_; }

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(std::size_t i) const { return labels_.empty() ? std::string{} : labels_[i]; }

  bool has_infinity() const;

  // Finite coordinates; throws DomainError if the set holds infinity.
  std::vector<Complex> finite_values() const;

  PointSet2D subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<ExtPoint> points_;
  std::vector<std::string> labels_;
};

// A sequence x_1, x_2, ... with |x_{k+1} - o| >= lambda |x_k - o|, carrying
// the ultrametric d_U(x_m, x_n) = r_max(m,n). Produced by
// ratio_sequence_certificate; immutable once built.
class RatioSequence {
 public:
  RatioSequence(Complex basepoint, double lambda, std::vector<Complex> points);

  Complex basepoint() const { return basepoint_; }
  double lambda() const { return lambda_; }
  const std::vector<Complex>& points() const { return points_; }
  const std::vector<double>& radii() const { return radii_; }

  // Index of z in the sequence, if registered (within duplicate tolerance).
  std::optional<std::size_t> index_of(Complex z) const;

  // d_U on sequence indices.
  double ultrametric(std::size_t m, std::size_t n) const {
    return m == n ? 0.0 : radii_[m > n ? m : n];
  }

 private:
  Complex basepoint_;
  double lambda_;
  std::vector<Complex> points_;
  std::vector<double> radii_;
};

struct Euclidean {};
struct Spherical {};
struct UltrametricRatio {
  std::shared_ptr<const RatioSequence> sequence;
};

using MetricKind = std::variant<Euclidean, Spherical, UltrametricRatio>;

std::string metric_name(const MetricKind& metric);

double distance(const ExtPoint& a, const ExtPoint& b, const MetricKind& metric);

// Chordal metric q on the Riemann sphere.
double spherical_distance(const ExtPoint& a, const ExtPoint& b);

// z -> 1/z on the extended plane, with 0 <-> infinity.
ExtPoint invert(const ExtPoint& p);

// Diameter of the indexed subset. Euclidean sets use the convex hull,
// other metrics the O(k^2) pairwise maximum.
double subset_diameter(const PointSet2D& ps, std::span<const std::size_t> indices,
                       const MetricKind& metric);
double diameter(const PointSet2D& ps, const MetricKind& metric);

// ---------------------------------------------------------------------------
// Covers

struct Cover {
  std::vector<std::vector<std::size_t>> blocks;
  double scale = 1.0;           // s
  double bound_constant = 1.0;  // c, blocks must have diameter <= c s
  int claimed_multiplicity = 1;  // n + 1

  // Throws DomainError when a block is empty, an index is out of range or
  // some point is not covered.
  void validate(std::size_t point_count) const;
};

enum class MultiplicityMode {
  // Clique number of the graph joining blocks at distance <= s. Exact for
  // s-disjoint covers and whenever the result is <= 2, an upper bound
  // otherwise.
  kCliqueBound,
  // Exhaustive search for the largest family of blocks admitting one point
  // each, pairwise within s. Limited to kMaxExactBlocks blocks.
  kExact,
};

inline constexpr std::size_t kMaxExactBlocks = 20;

struct CoverVerdict {
  bool bounded = false;
  double max_block_diameter = 0.0;
  int multiplicity_upper = 0;
  bool exact = false;
  bool within_claim = false;
  // Blocks of a largest clique, only filled when the claim is exceeded.
  std::optional<std::vector<std::size_t>> witness;
};

CoverVerdict verify_cover(const PointSet2D& ps, const Cover& cover, const MetricKind& metric,
                          MultiplicityMode mode = MultiplicityMode::kCliqueBound);

// ---------------------------------------------------------------------------
// s-chains

struct ChainDecomposition {
  double scale = 0.0;
  std::vector<std::vector<std::size_t>> components;  // sorted, ordered by first member
  std::vector<double> diameters;
};

ChainDecomposition s_chain_components(const PointSet2D& ps, double s, const MetricKind& metric);

// Adjacency lists of the graph joining points at distance <= s.
std::vector<std::vector<std::size_t>> threshold_graph(const PointSet2D& ps, double s,
                                                      const MetricKind& metric);

// ---------------------------------------------------------------------------
// CSV: one point per line, `re,im[,label]`, infinity as `inf,inf`.

PointSet2D read_points_csv(std::istream& in);
void write_points_csv(std::ostream& out, const PointSet2D& ps);

}  // namespace nagata
