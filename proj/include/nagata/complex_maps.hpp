#pragma once

// Entire functions of genus one, F(z) = z^m e^{q(z)} prod_j (1 - z/alpha_j),
// evaluated as log|F| with a certified truncation tail, together with the
// polynomial growth constants, zero-counting functions, exp-preimage
// sequences and cross-ratios used by the constructions.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nagata/metric_core.hpp"

namespace nagata {

// q(z) = a_0 + a_1 z + ... + a_d z^d.
struct PolynomialSpec {
  std::vector<Complex> coefficients;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  Complex leading() const { return coefficients.back(); }
  Complex operator()(Complex z) const;
  std::vector<Complex> derivative_coefficients() const;
  // Degree >= 1 and a_d != 0.
  void validate() const;
};

// Re(q(r + h) - q(r)) for real r, h, without forming q(r + h) - q(r).
double real_increment(const PolynomialSpec& q, double r, double h);

struct RadialGrowthConstants {
  double C = 0.0;   // sum of |c_m| over derivative coefficients m <= d - 2
  double R0 = 1.0;  // max{1, 2C / (d a_d)}
  double c0 = 0.0;  // d a_d / 2
  // Violations of Re(q(r+h) - q(r)) >= c0 r^(d-1) h on the validation grid.
  std::size_t violations = 0;
  std::size_t grid_points = 0;
};

// Requires a real positive leading coefficient. The inequality is checked
// on r_count values of r in [R0, 4 R0] and h_count log-spaced h in [1e-3, 1].
RadialGrowthConstants radial_growth_constants(const PolynomialSpec& q, std::size_t r_count = 50,
                                              std::size_t h_count = 20);

struct GeometricZeros {
  double lambda = 2.0;  // alpha_j = lambda^j
};
struct PowerZeros {
  double beta = 2.0;   // alpha_j = scale * j^beta
  double scale = 1.0;
};
struct ExplicitZeros {
  std::vector<Complex> values;  // kept sorted by modulus
  // true: the list is the whole zero set. false: further zeros exist, of
  // modulus at least the last listed one, with reciprocal sum bounded by
  // unlisted_tail (unknown when absent).
  bool complete = true;
  std::optional<double> unlisted_tail;
};

class ZeroSetSpec {
 public:
  using Generator = std::variant<GeometricZeros, PowerZeros, ExplicitZeros>;

  static ZeroSetSpec geometric(double lambda);
  static ZeroSetSpec power(double beta, double scale = 1.0);
  static ZeroSetSpec explicit_list(std::vector<Complex> values, bool complete = true,
                                   std::optional<double> unlisted_tail = std::nullopt);

  const Generator& generator() const { return generator_; }

  // alpha_j for j >= 1; throws for j beyond a finite list.
  Complex zero(std::size_t j) const;
  // Number of zeros when finite (complete explicit lists).
  std::optional<std::size_t> finite_size() const;
  // Number of listed or generated zeros available to enumerate, or nullopt
  // when unbounded.
  std::optional<std::size_t> listed_size() const;

  // T(J) >= sum_{j > J} 1/|alpha_j|, closed form per generator; nullopt when
  // no bound is known.
  std::optional<double> tail_bound(std::size_t J) const;

  // Least j with |alpha_j| >= radius; listed_size() + 1 when none is listed.
  std::size_t first_index_at_least(double radius) const;

  std::string describe() const;

 private:
  explicit ZeroSetSpec(Generator g) : generator_(std::move(g)) {}
  Generator generator_;
};

struct Genus1Function {
  int m = 1;
  PolynomialSpec q;
  ZeroSetSpec zeros = ZeroSetSpec::geometric(2.0);

  void validate() const;
};

// Flat key-value form: `m=1, q=0,1, zeros=geometric:2`. Zero generators:
// `geometric:<lambda>`, `power:<beta>[:<scale>]`,
// `explicit:<z>;<z>;...[:tail=<bound>]`. Coefficients and explicit zeros
// accept `x`, `x+yi`, `x-yi`, `yi`.
Genus1Function parse_genus1(std::string_view spec);
std::string format_genus1(const Genus1Function& f);
Complex parse_complex(std::string_view token);

struct LogAbsValue {
  double value = 0.0;
  double tail_bound = 0.0;
  std::size_t terms = 0;  // J used
};

inline constexpr std::size_t kMaxProductTerms = 20'000'000;

// log|F(z)| with the product truncated at the least J such that
// |z/alpha_j| <= 1/2 for j > J and 2|z| T(J) < tol. Throws DomainError at
// z = 0 or a zero of F, CapabilityError when tol is out of reach.
LogAbsValue log_abs_F(const Genus1Function& f, Complex z, double tol);

// Same sum with an explicit truncation, no tail certification.
double log_abs_F_truncated(const Genus1Function& f, Complex z, std::size_t terms);

// m_R = #{alpha_j : |alpha_j| < R}.
std::size_t counting_function(const ZeroSetSpec& zeros, double R);

struct CountingSample {
  double radius = 0.0;
  std::size_t count = 0;
  double ratio = 0.0;  // count / radius
};

struct CountingSweep {
  std::vector<CountingSample> samples;
  // count/radius is non-increasing from its maximum onwards.
  bool tail_monotone = false;
};

// R = 2^t for t = t_min..t_max.
CountingSweep counting_sweep(const ZeroSetSpec& zeros, int t_min, int t_max);

// x_i = Log y_i + 2 pi i k_i, k_i >= 0 least with |x_i| > R_i, where
// R_1 = start_radius and R_{i+1} = max(2 R_i + 1, 2|x_i| + 1). The
// imaginary parts are carried exactly in extended precision; the point set
// holds them rounded to double.
struct PreimageSequence {
  PointSet2D points;
  std::vector<std::string> windings;  // k_i in decimal
  std::vector<double> radii;          // R_i rounded to double
  unsigned precision_bits = 0;
};

PreimageSequence exp_preimage_sequence(std::span<const Complex> targets, double start_radius);

struct PreimageCheck {
  double max_relative_error = 0.0;  // max |exp(x_i) - y_i| / |y_i|
  bool doubling = false;            // |x_{i+1}| >= 2|x_i| for all i
  bool separated = false;           // R_i < |x_i| < R_{i+1}/2 for all i
};

// Recomputes exp(x_i) and the moduli in the sequence's working precision.
PreimageCheck check_preimage_sequence(const PreimageSequence& seq, std::span<const Complex> targets);

// d(x,a) d(b,c) / (d(x,b) d(a,c)) under the Euclidean or spherical metric.
double cross_ratio(const ExtPoint& x, const ExtPoint& a, const ExtPoint& b, const ExtPoint& c,
                   const MetricKind& metric);

}  // namespace nagata
