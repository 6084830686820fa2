#include "nagata/complex_maps.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "nagata/errors.hpp"
#include "nagata/text.hpp"

namespace nagata {

namespace {

// Expression templates off: values, never lazily bound references.
using Mp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                         boost::multiprecision::et_off>;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return text::format_double(z.real());
  std::string out = z.real() == 0.0 ? std::string{} : text::format_double(z.real());
  const bool negative = std::signbit(z.imag());
  if (!out.empty() || negative) out += negative ? "-" : "+";
  if (out == "+") out.clear();
  out += text::format_double(std::abs(z.imag()));
  out += 'i';
  return out;
}

// Neumaier-compensated accumulator.
class Sum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// log|1 - w| accurate for small |w|.
double log_abs_one_minus(Complex w) {
  const double u = w.real();
  const double v = w.imag();
  return 0.5 * std::log1p(-2.0 * u + u * u + v * v);
}

// Holds the process-wide default MPFR precision at `bits` for the scope;
// scopes on different threads are serialized.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits) : lock_(mutex()), saved_(Mp::default_precision()) {
    Mp::default_precision(bits_to_digits(bits));
  }
  ~PrecisionScope() { Mp::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  static unsigned bits_to_digits(unsigned bits) { return static_cast<unsigned>(bits * 0.30103) + 2; }

 private:
  static std::mutex& mutex() {
    static std::mutex m;
    return m;
  }
  std::lock_guard<std::mutex> lock_;
  unsigned saved_;
};

std::string integer_string(const Mp& k) {
  mpz_t z;
  mpz_init(z);
  mpfr_get_z(z, k.backend().data(), MPFR_RNDN);
  char* raw = mpz_get_str(nullptr, 10, z);
  std::string out(raw);
  void (*free_fn)(void*, std::size_t);
  mp_get_memory_functions(nullptr, nullptr, &free_fn);
  free_fn(raw, out.size() + 1);
  mpz_clear(z);
  return out;
}

Mp parse_integer(const std::string& digits) {
  Mp k;
  if (mpfr_set_str(k.backend().data(), digits.c_str(), 10, MPFR_RNDN) != 0) {
    throw DomainError("malformed winding number '" + digits + "'");
  }
  return k;
}

struct MpLog {
  Mp re;
  Mp im;
};

MpLog principal_log(Complex y) {
  const Mp x(y.real());
  const Mp v(y.imag());
  return {log(hypot(x, v)), atan2(v, x)};
}

unsigned preimage_precision(std::size_t n, double start_radius) {
  const double lead = start_radius > 1.0 ? std::ceil(std::log2(start_radius)) : 0.0;
  return 160 + static_cast<unsigned>(n) + static_cast<unsigned>(lead);
}

void check_target(Complex y) {
  if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) throw DomainError("non-finite exp target");
  if (y == Complex{}) throw DomainError("exp omits 0: zero target has no preimage");
}

}  // namespace

Complex PolynomialSpec::operator()(Complex z) const {
  Complex acc{};
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Complex> PolynomialSpec::derivative_coefficients() const {
  std::vector<Complex> out;
  for (std::size_t k = 1; k < coefficients.size(); ++k) out.push_back(static_cast<double>(k) * coefficients[k]);
  return out;
}

void PolynomialSpec::validate() const {
  if (coefficients.size() < 2) throw DomainError("polynomial degree must be >= 1");
  for (auto c : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("non-finite polynomial coefficient");
  }
  if (leading() == Complex{}) throw DomainError("leading coefficient must be nonzero");
}

double real_increment(const PolynomialSpec& q, double r, double h) {
  // D_k = (r+h)^k - r^k = (r+h) D_{k-1} + h r^{k-1}.
  double diff = 0.0;
  double r_pow = 1.0;
  Sum total;
  for (std::size_t k = 1; k < q.coefficients.size(); ++k) {
    diff = (r + h) * diff + h * r_pow;
    r_pow *= r;
    total.add(q.coefficients[k].real() * diff);
  }
  return total.value();
}

RadialGrowthConstants radial_growth_constants(const PolynomialSpec& q, std::size_t r_count,
                                              std::size_t h_count) {
  q.validate();
  const Complex a_d = q.leading();
  if (a_d.imag() != 0.0 || !(a_d.real() > 0.0)) {
    throw DomainError("radial growth needs a real positive leading coefficient");
  }
  const int d = q.degree();
  RadialGrowthConstants out;
  const auto deriv = q.derivative_coefficients();
  for (int m = 0; m <= d - 2; ++m) out.C += std::abs(deriv[static_cast<std::size_t>(m)]);
  out.R0 = std::max(1.0, 2.0 * out.C / (d * a_d.real()));
  out.c0 = d * a_d.real() / 2.0;

  r_count = std::max<std::size_t>(r_count, 2);
  h_count = std::max<std::size_t>(h_count, 2);
  for (std::size_t i = 0; i < r_count; ++i) {
    const double r = out.R0 * (1.0 + 3.0 * static_cast<double>(i) / static_cast<double>(r_count - 1));
    for (std::size_t j = 0; j < h_count; ++j) {
      const double h = std::pow(10.0, -3.0 + 3.0 * static_cast<double>(j) / static_cast<double>(h_count - 1));
      const double lhs = real_increment(q, r, h);
      const double rhs = out.c0 * std::pow(r, d - 1) * h;
      ++out.grid_points;
      if (lhs < rhs * (1.0 - 1e-12)) ++out.violations;
    }
  }
  return out;
}

ZeroSetSpec ZeroSetSpec::geometric(double lambda) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) throw DomainError("geometric zeros need lambda > 1");
  return ZeroSetSpec(GeometricZeros{lambda});
}

ZeroSetSpec ZeroSetSpec::power(double beta, double scale) {
  if (!(beta > 1.0) || !std::isfinite(beta)) throw DomainError("power zeros need beta > 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("power zeros need scale > 0");
  return ZeroSetSpec(PowerZeros{beta, scale});
}

ZeroSetSpec ZeroSetSpec::explicit_list(std::vector<Complex> values, bool complete,
                                       std::optional<double> unlisted_tail) {
  for (auto v : values) {
    if (v == Complex{}) throw DomainError("explicit zeros must be nonzero (use m for the origin)");
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("non-finite explicit zero");
  }
  if (complete && unlisted_tail) throw DomainError("a complete zero list takes no tail bound");
  if (unlisted_tail && !(*unlisted_tail >= 0.0)) throw DomainError("tail bound must be >= 0");
  std::stable_sort(values.begin(), values.end(),
                   [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  return ZeroSetSpec(ExplicitZeros{std::move(values), complete, unlisted_tail});
}

Complex ZeroSetSpec::zero(std::size_t j) const {
  if (j == 0) throw DomainError("zeros are indexed from 1");
  return std::visit(Overloaded{
                        [&](const GeometricZeros& g) { return Complex(std::pow(g.lambda, static_cast<double>(j))); },
                        [&](const PowerZeros& p) { return Complex(p.scale * std::pow(static_cast<double>(j), p.beta)); },
                        [&](const ExplicitZeros& e) {
                          if (j > e.values.size()) throw DomainError("zero index beyond the listed zeros");
                          return e.values[j - 1];
                        },
                    },
                    generator_);
}

std::optional<std::size_t> ZeroSetSpec::finite_size() const {
  if (const auto* e = std::get_if<ExplicitZeros>(&generator_); e && e->complete) return e->values.size();
  return std::nullopt;
}

std::optional<std::size_t> ZeroSetSpec::listed_size() const {
  if (const auto* e = std::get_if<ExplicitZeros>(&generator_)) return e->values.size();
  return std::nullopt;
}

std::optional<double> ZeroSetSpec::tail_bound(std::size_t J) const {
  return std::visit(Overloaded{
                        [&](const GeometricZeros& g) -> std::optional<double> {
                          return std::pow(g.lambda, -static_cast<double>(J)) / (g.lambda - 1.0);
                        },
                        [&](const PowerZeros& p) -> std::optional<double> {
                          // sum_{j>J} j^-beta <= int_J^inf x^-beta dx, and 1 + that at J = 0.
                          if (J == 0) return (1.0 + 1.0 / (p.beta - 1.0)) / p.scale;
                          return std::pow(static_cast<double>(J), 1.0 - p.beta) / ((p.beta - 1.0) * p.scale);
                        },
                        [&](const ExplicitZeros& e) -> std::optional<double> {
                          const std::size_t n = e.values.size();
                          if (!e.complete && !e.unlisted_tail) return std::nullopt;
                          Sum s;
                          for (std::size_t j = J; j < n; ++j) s.add(1.0 / std::abs(e.values[j]));
                          return s.value() * (1.0 + 1e-15 * static_cast<double>(n)) +
                                 (e.complete ? 0.0 : *e.unlisted_tail);
                        },
                    },
                    generator_);
}

std::size_t ZeroSetSpec::first_index_at_least(double radius) const {
  if (!(radius > 0.0)) return 1;
  constexpr double kIndexCap = 1e15;
  return std::visit(
      Overloaded{
          [&](const GeometricZeros& g) -> std::size_t {
            const double est = std::ceil(std::log(radius) / std::log(g.lambda));
            if (est > kIndexCap) throw CapabilityError("zero index beyond representable range");
            auto j = static_cast<std::size_t>(std::max(1.0, est));
            while (j > 1 && std::pow(g.lambda, static_cast<double>(j - 1)) >= radius) --j;
            while (std::pow(g.lambda, static_cast<double>(j)) < radius) ++j;
            return j;
          },
          [&](const PowerZeros& p) -> std::size_t {
            const double est = std::ceil(std::pow(radius / p.scale, 1.0 / p.beta));
            if (est > kIndexCap) throw CapabilityError("zero index beyond representable range");
            auto j = static_cast<std::size_t>(std::max(1.0, est));
            const auto mod = [&](std::size_t i) { return p.scale * std::pow(static_cast<double>(i), p.beta); };
            while (j > 1 && mod(j - 1) >= radius) --j;
            while (mod(j) < radius) ++j;
            return j;
          },
          [&](const ExplicitZeros& e) -> std::size_t {
            const auto it = std::partition_point(e.values.begin(), e.values.end(),
                                                 [&](Complex a) { return std::abs(a) < radius; });
            return static_cast<std::size_t>(it - e.values.begin()) + 1;
          },
      },
      generator_);
}

std::string ZeroSetSpec::describe() const {
  return std::visit(Overloaded{
                        [](const GeometricZeros& g) { return "geometric:" + text::format_double(g.lambda); },
                        [](const PowerZeros& p) {
                          return "power:" + text::format_double(p.beta) + ":" + text::format_double(p.scale);
                        },
                        [](const ExplicitZeros& e) {
                          std::string out = "explicit:";
                          for (std::size_t i = 0; i < e.values.size(); ++i) {
                            if (i) out += ';';
                            out += format_complex(e.values[i]);
                          }
                          if (e.unlisted_tail) {
                            out += ":tail=" + text::format_double(*e.unlisted_tail);
                          } else if (!e.complete) {
                            out += ":partial";
                          }
                          return out;
                        },
                    },
                    generator_);
}

void Genus1Function::validate() const {
  if (m < 1) throw DomainError("m must be >= 1");
  q.validate();
}

Complex parse_complex(std::string_view token) {
  token = text::trim(token);
  if (token.empty()) throw DomainError("empty complex number");
  if (token.back() != 'i') return {text::parse_double(token), 0.0};
  token.remove_suffix(1);
  std::size_t split = std::string_view::npos;
  for (std::size_t i = token.size(); i-- > 1;) {
    if ((token[i] == '+' || token[i] == '-') && token[i - 1] != 'e' && token[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const auto imag_part = [](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return text::parse_double(s);
  };
  if (split == std::string_view::npos) return {0.0, imag_part(token)};
  return {text::parse_double(token.substr(0, split)), imag_part(token.substr(split))};
}

namespace {

ZeroSetSpec parse_zero_spec(std::string_view value) {
  const auto parts = text::split(value, ':');
  const auto kind = text::trim(parts.front());
  const auto need = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) {
      throw DomainError("malformed zero generator '" + std::string(value) + "'");
    }
  };
  if (kind == "geometric") {
    need(2, 2);
    return ZeroSetSpec::geometric(text::parse_double(text::trim(parts[1])));
  }
  if (kind == "power") {
    need(2, 3);
    const double scale = parts.size() == 3 ? text::parse_double(text::trim(parts[2])) : 1.0;
    return ZeroSetSpec::power(text::parse_double(text::trim(parts[1])), scale);
  }
  if (kind == "explicit") {
    need(2, 3);
    std::vector<Complex> values;
    for (auto tok : text::split(parts[1], ';')) {
      if (!text::trim(tok).empty()) values.push_back(parse_complex(tok));
    }
    if (parts.size() == 2) return ZeroSetSpec::explicit_list(std::move(values));
    const auto mode = text::trim(parts[2]);
    if (mode == "partial") return ZeroSetSpec::explicit_list(std::move(values), false);
    if (mode.starts_with("tail=")) {
      return ZeroSetSpec::explicit_list(std::move(values), false, text::parse_double(mode.substr(5)));
    }
    throw DomainError("unknown explicit zero option '" + std::string(mode) + "'");
  }
  throw DomainError("unknown zero generator '" + std::string(kind) + "'");
}

bool starts_field(std::string_view piece) {
  piece = text::trim(piece);
  std::size_t i = 0;
  while (i < piece.size() && ((piece[i] >= 'a' && piece[i] <= 'z') || piece[i] == '_')) ++i;
  return i > 0 && i < piece.size() && piece[i] == '=';
}

}  // namespace

Genus1Function parse_genus1(std::string_view spec) {
  std::vector<std::pair<std::string, std::string>> fields;
  for (auto piece : text::split(spec, ',')) {
    if (starts_field(piece)) {
      piece = text::trim(piece);
      const auto eq = piece.find('=');
      fields.emplace_back(std::string(piece.substr(0, eq)), std::string(piece.substr(eq + 1)));
    } else {
      if (fields.empty()) throw DomainError("function spec must start with key=value");
      fields.back().second += ',';
      fields.back().second += piece;
    }
  }
  Genus1Function f;
  bool have_m = false, have_q = false, have_zeros = false;
  for (const auto& [key, value] : fields) {
    if (key == "m") {
      f.m = static_cast<int>(text::parse_int(text::trim(value)));
      have_m = true;
    } else if (key == "q") {
      f.q.coefficients.clear();
      for (auto tok : text::split(value, ',')) f.q.coefficients.push_back(parse_complex(tok));
      have_q = true;
    } else if (key == "zeros") {
      f.zeros = parse_zero_spec(value);
      have_zeros = true;
    } else {
      throw DomainError("unknown function key '" + key + "'");
    }
  }
  if (!have_m || !have_q || !have_zeros) throw DomainError("function spec needs m, q and zeros");
  f.validate();
  return f;
}

std::string format_genus1(const Genus1Function& f) {
  std::string out = "m=" + std::to_string(f.m) + ", q=";
  for (std::size_t i = 0; i < f.q.coefficients.size(); ++i) {
    if (i) out += ',';
    out += format_complex(f.q.coefficients[i]);
  }
  out += ", zeros=" + f.zeros.describe();
  return out;
}

namespace {

double log_abs_sum(const Genus1Function& f, Complex z, std::size_t terms) {
  Sum s;
  s.add(f.m * std::log(std::abs(z)));
  s.add(f.q(z).real());
  for (std::size_t j = 1; j <= terms; ++j) {
    const Complex a = f.zeros.zero(j);
    if (std::abs(z - a) <= PointSet2D::kDuplicateTolerance * std::max(1.0, std::abs(a))) {
      throw DomainError("log|F| is -infinity at a zero of F");
    }
    s.add(log_abs_one_minus(z / a));
  }
  return s.value();
}

}  // namespace

LogAbsValue log_abs_F(const Genus1Function& f, Complex z, double tol) {
  f.validate();
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (z == Complex{}) throw DomainError("log|F| is -infinity at 0");
  const double r = std::abs(z);

  LogAbsValue out;
  if (const auto* e = std::get_if<ExplicitZeros>(&f.zeros.generator())) {
    out.terms = e->values.size();
    if (!e->complete) {
      if (!e->unlisted_tail) throw CapabilityError("explicit zeros without a tail bound: tolerance unreachable");
      if (e->values.empty() || std::abs(e->values.back()) < 2.0 * r) {
        throw CapabilityError("listed zeros do not reach 2|z|: tail cannot be certified");
      }
      out.tail_bound = 2.0 * r * *e->unlisted_tail;
      if (!(out.tail_bound < tol)) throw CapabilityError("explicit tail bound exceeds tolerance");
    }
  } else {
    const std::size_t j_half = f.zeros.first_index_at_least(2.0 * r) - 1;
    const auto reached = [&](std::size_t J) { return 2.0 * r * *f.zeros.tail_bound(J) < tol; };
    std::size_t j_tol = 0;
    if (!reached(0)) {
      std::size_t hi = 1;
      while (!reached(hi)) {
        if (hi > kMaxProductTerms) throw CapabilityError("tolerance needs more than the product term cap");
        hi *= 2;
      }
      std::size_t lo = hi / 2;  // !reached(lo) or lo == 0 with !reached(0)
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        (reached(mid) ? hi : lo) = mid;
      }
      j_tol = hi;
    }
    out.terms = std::max(j_half, j_tol);
    if (out.terms > kMaxProductTerms) throw CapabilityError("product truncation exceeds the term cap");
    out.tail_bound = 2.0 * r * *f.zeros.tail_bound(out.terms);
  }
  out.value = log_abs_sum(f, z, out.terms);
  return out;
}

double log_abs_F_truncated(const Genus1Function& f, Complex z, std::size_t terms) {
  f.validate();
  if (z == Complex{}) throw DomainError("log|F| is -infinity at 0");
  if (const auto n = f.zeros.listed_size()) terms = std::min(terms, *n);
  return log_abs_sum(f, z, terms);
}

std::size_t counting_function(const ZeroSetSpec& zeros, double R) {
  if (!(R > 0.0)) throw DomainError("counting radius must be positive");
  const std::size_t count = zeros.first_index_at_least(R) - 1;
  if (const auto* e = std::get_if<ExplicitZeros>(&zeros.generator()); e && !e->complete && count == e->values.size()) {
    throw CapabilityError("radius reaches past the listed zeros");
  }
  return count;
}

CountingSweep counting_sweep(const ZeroSetSpec& zeros, int t_min, int t_max) {
  if (t_max < t_min) throw DomainError("empty dyadic sweep");
  CountingSweep out;
  for (int t = t_min; t <= t_max; ++t) {
    const double R = std::ldexp(1.0, t);
    const auto count = counting_function(zeros, R);
    out.samples.push_back({R, count, static_cast<double>(count) / R});
  }
  const auto peak = std::max_element(out.samples.begin(), out.samples.end(),
                                     [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
  out.tail_monotone = std::is_sorted(peak, out.samples.end(),
                                     [](const auto& a, const auto& b) { return a.ratio > b.ratio; });
  return out;
}

PreimageSequence exp_preimage_sequence(std::span<const Complex> targets, double start_radius) {
  if (!(start_radius >= 0.0) || !std::isfinite(start_radius)) throw DomainError("start radius must be finite and >= 0");
  for (auto y : targets) check_target(y);

  PreimageSequence out;
  out.precision_bits = preimage_precision(targets.size(), start_radius);
  const PrecisionScope scope(out.precision_bits);
  const Mp two_pi = 2 * acos(Mp(-1));

  std::vector<Complex> xs;
  xs.reserve(targets.size());
  Mp R(start_radius);
  for (auto y : targets) {
    const auto [a, b] = principal_log(y);
    const auto modulus2 = [&](const Mp& k) -> Mp {
      const Mp im = b + two_pi * k;
      return a * a + im * im;
    };
    const Mp R2 = R * R;
    Mp k(0);
    if (!(modulus2(k) > R2)) {
      const Mp t = sqrt(R2 - a * a);
      k = floor((t - b) / two_pi) + 1;
      if (k < 0) k = 0;
      while (k > 0 && modulus2(k - 1) > R2) k -= 1;
      while (!(modulus2(k) > R2)) k += 1;
    }
    const Mp im = b + two_pi * k;
    const Mp x_abs = sqrt(a * a + im * im);
    const double re_d = a.convert_to<double>();
    const double im_d = im.convert_to<double>();
    if (!std::isfinite(im_d)) throw CapabilityError("preimage modulus overflows double");
    xs.emplace_back(re_d, im_d);
    out.windings.push_back(integer_string(k));
    out.radii.push_back(R.convert_to<double>());
    R = std::max(Mp(2 * R + 1), Mp(2 * x_abs + 1));
  }
  out.points = PointSet2D::from_complex(xs);
  return out;
}

PreimageCheck check_preimage_sequence(const PreimageSequence& seq, std::span<const Complex> targets) {
  if (seq.windings.size() != targets.size() || seq.radii.size() != targets.size()) {
    throw DomainError("preimage sequence and targets differ in length");
  }
  PreimageCheck out;
  out.doubling = true;
  out.separated = true;
  if (targets.empty()) return out;
  const PrecisionScope scope(seq.precision_bits);
  const Mp two_pi = 2 * acos(Mp(-1));
  Mp R(seq.radii.front());
  Mp previous(-1);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Complex y = targets[i];
    check_target(y);
    const auto [a, b] = principal_log(y);
    const Mp im = b + two_pi * parse_integer(seq.windings[i]);
    const Mp x_abs = sqrt(a * a + im * im);
    const Mp scale = exp(a);
    const Mp dre = scale * cos(im) - Mp(y.real());
    const Mp dim = scale * sin(im) - Mp(y.imag());
    const Mp rel = hypot(dre, dim) / hypot(Mp(y.real()), Mp(y.imag()));
    out.max_relative_error = std::max(out.max_relative_error, rel.convert_to<double>());
    const Mp R_next = std::max(Mp(2 * R + 1), Mp(2 * x_abs + 1));
    if (!(R < x_abs && 2 * x_abs < R_next)) out.separated = false;
    if (previous >= 0 && x_abs < 2 * previous) out.doubling = false;
    previous = x_abs;
    R = R_next;
  }
  return out;
}

double cross_ratio(const ExtPoint& x, const ExtPoint& a, const ExtPoint& b, const ExtPoint& c,
                   const MetricKind& metric) {
  if (std::holds_alternative<UltrametricRatio>(metric)) {
    throw DomainError("cross-ratio is defined for the Euclidean and spherical metrics");
  }
  const ExtPoint* pts[] = {&x, &a, &b, &c};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const auto& p = *pts[i];
      const auto& q = *pts[j];
      const bool same = p.infinite || q.infinite ? p.infinite == q.infinite
                                                 : std::abs(p.z - q.z) <= PointSet2D::kDuplicateTolerance;
      if (same) throw DomainError("cross-ratio needs four distinct points");
    }
  }
  return distance(x, a, metric) * distance(b, c, metric) / (distance(x, b, metric) * distance(a, c, metric));
}

}  // namespace nagata
