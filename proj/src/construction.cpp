#include "nagata/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "nagata/dimension_lab.hpp"
#include "nagata/errors.hpp"
#include "nagata/parallel.hpp"
#include "nagata/text.hpp"

namespace nagata {

namespace {

constexpr double kSlack = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxZeroScan = 10'000'000;
constexpr std::size_t kMaxTailTerms = 1'000'000;

const GeometricZeros* geometric_zeros(const ConstructionParams& p) {
  return std::get_if<GeometricZeros>(&p.f.zeros.generator());
}

double inner_radius(double eta, double c_A, int n) { return eta * std::pow(c_A, n + 2); }

// sum_{j >= j0} log(1 - coeff / |alpha_j|); -inf when a factor is <= 0.
double tail_log_sum(const ZeroSetSpec& zeros, std::size_t j0, double coeff) {
  double sum = 0.0;
  std::size_t j = j0;
  double x = 0.0;
  for (;; ++j) {
    x = coeff / std::abs(zeros.zero(j));
    if (x >= 1.0) return kNegInf;
    if (x < 1e-6 || j - j0 >= kMaxTailTerms) break;
    sum += std::log1p(-x);
  }
  // For the rest, x_i <= x <= 1/2 so log(1 - x_i) >= -x_i (1 + x).
  return sum - coeff * (1.0 + x) * *zeros.tail_bound(j - 1);
}

}  // namespace

void ConstructionParams::validate() const {
  if (!(c_A > 1.0) || !std::isfinite(c_A)) throw DomainError("c_A must be a finite number > 1");
  if (!(epsilon > 0.0 && epsilon < 1e-2)) throw DomainError("epsilon must lie in (0, 1e-2)");
  if (!(delta > 0.0 && delta < c_A)) throw DomainError("delta must lie in (0, c_A)");
  if (n_min < 1 || n_max < n_min) throw DomainError("annulus range must satisfy 1 <= n_min <= n_max");
  if (n_max > 400) throw CapabilityError("annulus indices above 400 overflow double scales");
  f.validate();
  const Complex a_d = f.q.leading();
  if (a_d.imag() != 0.0 || !(a_d.real() > 0.0)) {
    throw DomainError("construction needs a real positive leading coefficient of q");
  }
  const auto& gen = f.zeros.generator();
  if (const auto* g = std::get_if<GeometricZeros>(&gen)) {
    const double needed = g->lambda / (g->lambda - 1.0);
    if (c_A < needed * (1.0 - kSlack)) {
      throw DomainError("c_A is below lambda/(lambda-1) = " + text::format_double(needed) +
                        ", the geometric zero cover constant");
    }
  } else if (!std::holds_alternative<PowerZeros>(gen)) {
    throw CapabilityError("construction supports geometric and power zero sets only");
  }
}

const Annulus& AnnulusSchedule::at(int n) const {
  for (const auto& a : annuli)
    if (a.n == n) return a;
  throw DomainError("annulus " + std::to_string(n) + " is outside the schedule");
}

double AnnulusSchedule::inner(int n) const {
  const double c_A = annuli.front().outer / annuli.front().inner;
  return inner_radius(eta, c_A, n);
}

int AnnulusSchedule::annulus_of(double r) const {
  const double c_A = annuli.front().outer / annuli.front().inner;
  int n = 1;
  while (r >= inner_radius(eta, c_A, n + 1)) ++n;
  return n;
}

AnnulusSchedule build_schedule(const ConstructionParams& params) {
  params.validate();
  const double c_A = params.c_A;
  AnnulusSchedule out;
  out.eta = 4.0 / (c_A - 1.0);
  for (int n = params.n_min; n <= params.n_max; ++n) {
    Annulus a;
    a.n = n;
    a.inner = inner_radius(out.eta, c_A, n);
    a.outer = inner_radius(out.eta, c_A, n + 1);
    a.scale = std::pow(c_A, n);
    a.rho = params.epsilon * a.scale;
    out.annuli.push_back(a);
  }

  out.growth = radial_growth_constants(params.f.q);
  const int d = params.f.q.degree();
  const double a_d = params.f.q.leading().real();
  out.tail_target =
      (params.epsilon * d * a_d / 16.0) * (c_A - 1.0) / (c_A * c_A * (c_A * c_A + params.epsilon));

  // J_A: least J with T(J + 1) <= target, T non-increasing.
  const auto ok = [&](std::size_t J) { return *params.f.zeros.tail_bound(J + 1) <= out.tail_target; };
  constexpr std::size_t kCap = 1'000'000;
  if (!ok(0)) {
    std::size_t hi = 1;
    while (!ok(hi)) {
      if (hi > kCap) throw CapabilityError("tail-sum bound not met within 1e6 terms");
      hi *= 2;
    }
    std::size_t lo = hi / 2;
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      (ok(mid) ? hi : lo) = mid;
    }
    out.J_A = hi;
    if (out.J_A > kCap) throw CapabilityError("tail-sum bound not met within 1e6 terms");
  }

  // Zeros are enumerated by modulus, so alpha_j in D_{>=n} means
  // j >= first_index_at_least(inner(n)).
  out.N_A = 1;
  while (params.f.zeros.first_index_at_least(inner_radius(out.eta, c_A, out.N_A)) <= out.J_A + 1) {
    if (++out.N_A > 100000) throw CapabilityError("N_A exceeds 1e5 annuli");
  }

  out.n_q = 1;
  if (out.growth.R0 >= inner_radius(out.eta, c_A, 1)) out.n_q = out.annulus_of(out.growth.R0);

  for (auto& a : out.annuli) a.patched = a.n > out.n_q && (!params.gate_on_tail_index || a.n > out.N_A);
  return out;
}

std::vector<std::vector<double>> zero_blocks(const ConstructionParams& params, const AnnulusSchedule& schedule,
                                             int n) {
  const Annulus& a = schedule.at(n);
  const double limit = a.outer + (params.c_A + 1.0) * a.scale + a.rho;
  std::vector<double> zs;
  for (std::size_t j = 1;; ++j) {
    const double x = params.f.zeros.zero(j).real();
    if (x > limit) break;
    if (j > kMaxZeroScan) throw CapabilityError("more than 1e7 zeros below the annulus");
    zs.push_back(x);
  }
  std::vector<std::vector<double>> blocks;
  if (zs.empty()) return blocks;
  if (const auto* g = geometric_zeros(params)) {
    const Cover cover = exp_sequence_cover(g->lambda, zs.size(), a.scale);
    for (const auto& b : cover.blocks) {
      blocks.emplace_back();
      for (auto i : b) blocks.back().push_back(zs[i]);
    }
  } else {
    // s_n-chain components of the (sorted, real) zeros.
    blocks.push_back({zs.front()});
    for (std::size_t i = 1; i < zs.size(); ++i) {
      if (zs[i] - zs[i - 1] <= a.scale) {
        blocks.back().push_back(zs[i]);
      } else {
        blocks.push_back({zs[i]});
      }
    }
    for (const auto& b : blocks) {
      const double diam = b.back() - b.front();
      if (diam > params.c_A * a.scale * (1.0 + kSlack)) {
        throw ConstructionError("zero cover at scale s_" + std::to_string(n) + " needs constant " +
                                text::format_double(diam / a.scale) + " > c_A");
      }
    }
  }
  return blocks;
}

namespace {

struct Piece {
  RealInterval span;
  std::size_t block;
};

std::vector<Piece> thicken(const std::vector<std::vector<double>>& blocks, double rho) {
  std::vector<Piece> pieces;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (double x : blocks[b]) {
      if (!pieces.empty() && pieces.back().block == b && x - rho < pieces.back().span.hi) {
        pieces.back().span.hi = x + rho;
      } else {
        pieces.push_back({{x - rho, x + rho}, b});
      }
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& p, const Piece& q) { return p.span.lo < q.span.lo; });
  return pieces;
}

}  // namespace

ThickenedBlocks thickened_real_blocks(const ConstructionParams& params, const AnnulusSchedule& schedule, int n) {
  const Annulus& a = schedule.at(n);
  ThickenedBlocks out;
  for (const auto& p : thicken(zero_blocks(params, schedule, n), a.rho)) {
    if (p.span.hi <= a.inner || p.span.lo >= a.outer) continue;
    out.intervals.push_back({std::max(p.span.lo, a.inner), std::min(p.span.hi, a.outer)});
    out.block.push_back(p.block);
  }
  return out;
}

AdmissibleIntervals admissible_from_blocks(RealInterval domain, const std::vector<std::vector<double>>& blocks,
                                          double rho, double min_length, Admissibility reading) {
  AdmissibleIntervals out;
  double cursor = domain.lo;
  for (const auto& p : thicken(blocks, rho)) {
    if (p.span.hi <= domain.lo || p.span.lo >= domain.hi) continue;
    if (p.span.lo > cursor) out.candidates.push_back({cursor, p.span.lo});
    cursor = std::max(cursor, p.span.hi);
  }
  if (cursor < domain.hi) out.candidates.push_back({cursor, domain.hi});

  for (const auto& I : out.candidates) {
    const double slack = kSlack * std::max({1.0, std::abs(I.lo), std::abs(I.hi)});
    bool per_block = true;
    bool all_left_free = true;   // every block avoids (-inf, lo]
    bool all_right_free = true;  // every block avoids [hi, inf)
    for (const auto& b : blocks) {
      const bool left_free = b.front() - rho >= I.lo - slack;
      const bool right_free = b.back() + rho <= I.hi + slack;
      per_block = per_block && (left_free || right_free);
      all_left_free = all_left_free && left_free;
      all_right_free = all_right_free && right_free;
    }
    const bool ok = reading == Admissibility::kPerBlock ? per_block : (all_left_free || all_right_free);
    if (!ok) {
      ++out.rejected_straddled;
    } else if (I.length() < min_length * (1.0 - kSlack)) {
      ++out.rejected_short;
    } else {
      out.admissible.push_back(I);
    }
  }
  return out;
}

AdmissibleIntervals admissible_intervals(const ConstructionParams& params, const AnnulusSchedule& schedule, int n) {
  const Annulus& a = schedule.at(n);
  auto out = admissible_from_blocks({a.inner, a.outer}, zero_blocks(params, schedule, n), a.rho,
                                    a.scale * (1.0 - 2.0 * params.epsilon), params.admissibility);
  out.n = n;
  out.scale = a.scale;
  if (out.admissible.empty()) {
    throw ConstructionError("annulus " + std::to_string(n) + " has no admissible interval");
  }
  return out;
}

std::vector<double> patch_points(RealInterval interval, double rho, double delta) {
  std::vector<double> out;
  const double room = (interval.length() - rho) / delta;
  if (!(room >= 1.0)) return out;
  const auto count = static_cast<std::size_t>(std::floor(room));
  out.reserve(count);
  for (std::size_t m = 1; m <= count; ++m) out.push_back(interval.lo + rho + static_cast<double>(m) * delta);
  return out;
}

PatchSet place_patches(const ConstructionParams& params, const AnnulusSchedule& schedule) {
  PatchSet out;
  std::vector<Complex> xs;
  for (const auto& a : schedule.annuli) {
    if (!a.patched) continue;
    auto intervals = admissible_intervals(params, schedule, a.n);
    std::size_t longest = 0;
    for (std::size_t i = 0; i < intervals.admissible.size(); ++i) {
      const auto pts = patch_points(intervals.admissible[i], a.rho, params.delta);
      longest = std::max(longest, pts.size());
      for (std::size_t m = 0; m < pts.size(); ++m) {
        xs.emplace_back(pts[m], 0.0);
        out.origin.push_back({a.n, i, m + 1});
      }
    }
    out.patch_length.emplace_back(a.n, longest);
    out.intervals.push_back(std::move(intervals));
  }
  out.points = PointSet2D::from_complex(xs);
  return out;
}

const char* gap_case_name(GapCase c) {
  switch (c) {
    case GapCase::kSameInterval:
      return "same-interval";
    case GapCase::kSameAnnulus:
      return "same-annulus";
    case GapCase::kNextAnnulus:
      return "next-annulus";
    case GapCase::kUnclassified:
      break;
  }
  return "unclassified";
}

RatioCertificate ratio_certificate(const ConstructionParams& params, const AnnulusSchedule& schedule,
                                   const PatchSet& patches) {
  RatioCertificate out;
  const std::size_t count = patches.points.size();
  if (patches.origin.size() != count) throw DomainError("patch provenance does not match the points");
  if (count < 2) return out;

  const double c_A = params.c_A;
  const double eps = params.epsilon;
  const double delta = params.delta;
  const double c0 = schedule.growth.c0;
  const double lam = 1.0 / c_A - 1.0 / (c_A * c_A);
  const double theta = std::log(3.0 * c_A * c_A / eps);
  const double gamma = (2.0 * c_A * c_A + 2.0 * eps) / lam;
  const auto& zeros = params.f.zeros;

  std::vector<double> xs(count);
  for (std::size_t i = 0; i < count; ++i) xs[i] = patches.points[i].z.real();
  std::vector<double> logF(count);
  parallel_for(count, [&](std::size_t i) {
    const double s = schedule.at(patches.origin[i].n).scale;
    logF[i] = log_abs_F(params.f, {xs[i], 0.0}, 1e-8 * std::min(delta, eps * s)).value;
  });

  out.steps.resize(count - 1);
  parallel_for(count - 1, [&](std::size_t k) {
    RatioStep& st = out.steps[k];
    const PointOrigin& o = patches.origin[k];
    const PointOrigin& o2 = patches.origin[k + 1];
    const Annulus& a = schedule.at(o.n);
    const double s = a.scale;
    const double tol = 1e-9 * s;
    st.k = k;
    st.n = o.n;
    st.gap = xs[k + 1] - xs[k];
    st.log_ratio = logF[k + 1] - logF[k];
    if (o2.n == o.n && o2.interval == o.interval) {
      st.gap_case = GapCase::kSameInterval;
      st.gap_in_bounds = std::abs(st.gap - delta) <= tol;
    } else if (o2.n == o.n) {
      st.gap_case = GapCase::kSameAnnulus;
      st.gap_in_bounds = st.gap >= eps * s - tol && st.gap <= (c_A + 2 * eps) * s + tol;
    } else if (o2.n == o.n + 1) {
      st.gap_case = GapCase::kNextAnnulus;
      st.gap_in_bounds = st.gap >= eps * s - tol && st.gap <= (2 * c_A * c_A + 2 * eps) * s + tol;
    }
    st.case_one = st.gap_case == GapCase::kSameInterval;
    st.J = zeros.first_index_at_least(schedule.inner(o.n + 2));

    if (st.case_one) {
      st.log_E = c0 * delta;
      const double base = 1.0 - delta / (eps * s);
      st.log_Q1 = base > 0.0 ? static_cast<double>(st.J + 1) * std::log(base) : kNegInf;
      st.log_Q2 = tail_log_sum(zeros, st.J + 2, delta / lam);
      st.floor = st.log_E + st.log_Q1 + st.log_Q2;
    } else {
      st.log_E = c0 * eps * s;
      st.log_Q1 = -theta * static_cast<double>(st.J + 1);
      st.log_Q2 = -2.0 * gamma * s * *zeros.tail_bound(st.J + 1);
      st.floor = c0 * (eps / 2.0) * s - theta * static_cast<double>(st.J);
    }

    st.alpha_margin = true;
    for (std::size_t j = st.J; j < st.J + 32; ++j) {
      const double alpha = std::abs(zeros.zero(j));
      if (std::abs(alpha - xs[k]) < lam * alpha * (1.0 - kSlack)) st.alpha_margin = false;
    }
    const std::size_t near = zeros.first_index_at_least(xs[k]);
    st.zero_clearance = true;
    for (std::size_t j = near > 1 ? near - 1 : 1; j <= near; ++j) {
      if (std::abs(zeros.zero(j) - Complex(xs[k], 0.0)) < a.rho * (1.0 - kSlack)) st.zero_clearance = false;
    }
  });

  out.trichotomy = std::all_of(out.steps.begin(), out.steps.end(), [](const RatioStep& st) {
    return st.gap_case != GapCase::kUnclassified && st.gap_in_bounds;
  });
  out.floors_respected = std::all_of(out.steps.begin(), out.steps.end(),
                                     [](const RatioStep& st) { return !(st.log_ratio < st.floor - 1e-6); });

  // K starts the first annulus after the last non-increasing step.
  std::optional<std::size_t> last_bad;
  for (std::size_t k = out.steps.size(); k-- > 0;) {
    if (!(out.steps[k].log_ratio > 0.0)) {
      last_bad = k;
      break;
    }
  }
  std::size_t K = 0;
  if (last_bad) {
    const int bad_n = out.steps[*last_bad].n;
    K = *last_bad + 1;
    while (K < count && patches.origin[K].n <= bad_n) ++K;
  }
  if (K + 1 >= count) {
    for (const auto& st : out.steps) {
      if (!(st.log_ratio > 0.0) && out.offending.size() < 1000) out.offending.push_back(st.k);
    }
    return out;
  }
  out.K = K;
  out.K_annulus = patches.origin[K].n;
  double min_L = std::numeric_limits<double>::infinity();
  double min_floor_I = std::numeric_limits<double>::infinity();
  double min_floor_II = std::numeric_limits<double>::infinity();
  for (std::size_t k = K; k < out.steps.size(); ++k) {
    const auto& st = out.steps[k];
    min_L = std::min(min_L, st.log_ratio);
    (st.case_one ? min_floor_I : min_floor_II) = std::min(st.case_one ? min_floor_I : min_floor_II, st.floor);
  }
  out.Lambda = std::exp(min_L);
  out.proof_lambda_I = std::isinf(min_floor_I) && min_floor_I > 0 ? 0.0 : std::exp(min_floor_I);
  out.proof_lambda_II = std::isinf(min_floor_II) && min_floor_II > 0 ? 0.0 : std::exp(min_floor_II);
  std::vector<std::size_t> tail(count - K);
  for (std::size_t i = 0; i < tail.size(); ++i) tail[i] = K + i;
  out.pruned = patches.points.subset(tail);
  return out;
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return text::format_double(v);
}

}  // namespace

nlohmann::json construction_json(const ConstructionParams& params, const AnnulusSchedule& schedule,
                                 const PatchSet& patches, const RatioCertificate& cert) {
  using nlohmann::json;
  json j;
  j["params"] = {
      {"c_A", params.c_A},
      {"epsilon", params.epsilon},
      {"delta", params.delta},
      {"function", format_genus1(params.f)},
      {"n_min", params.n_min},
      {"n_max", params.n_max},
      {"gate_on_tail_index", params.gate_on_tail_index},
      {"admissibility", params.admissibility == Admissibility::kPerBlock ? "per-block" : "common-side"},
  };
  json annuli = json::array();
  for (const auto& a : schedule.annuli) {
    annuli.push_back({{"n", a.n}, {"inner", a.inner}, {"outer", a.outer}, {"s", a.scale}, {"rho", a.rho},
                      {"patched", a.patched}});
  }
  j["schedule"] = {
      {"eta", schedule.eta},
      {"R0", schedule.growth.R0},
      {"c0", schedule.growth.c0},
      {"C", schedule.growth.C},
      {"tail_target", schedule.tail_target},
      {"J_A", schedule.J_A},
      {"N_A", schedule.N_A},
      {"n_q", schedule.n_q},
      {"annuli", annuli},
  };
  json per_n = json::array();
  for (std::size_t i = 0; i < patches.intervals.size(); ++i) {
    const auto& iv = patches.intervals[i];
    double min_len = std::numeric_limits<double>::infinity();
    for (const auto& I : iv.admissible) min_len = std::min(min_len, I.length());
    per_n.push_back({{"n", iv.n},
                     {"candidates", iv.candidates.size()},
                     {"admissible", iv.admissible.size()},
                     {"rejected_straddled", iv.rejected_straddled},
                     {"rejected_short", iv.rejected_short},
                     {"min_admissible_length", number(min_len)},
                     {"M_n", patches.patch_length[i].second}});
  }
  j["intervals"] = per_n;
  json c = {
      {"points", patches.points.size()},
      {"steps", cert.steps.size()},
      {"floors_respected", cert.floors_respected},
      {"trichotomy", cert.trichotomy},
  };
  if (cert.K) {
    c["K"] = *cert.K;
    c["K_annulus"] = cert.K_annulus;
    c["Lambda"] = number(cert.Lambda);
    c["proof_lambda_I"] = number(cert.proof_lambda_I);
    c["proof_lambda_II"] = number(cert.proof_lambda_II);
    c["pruned_points"] = cert.pruned.size();
  } else {
    c["K"] = nullptr;
    c["offending"] = cert.offending;
  }
  j["certificate"] = c;
  return j;
}

void write_ratios_csv(std::ostream& out, const RatioCertificate& cert) {
  out << "k,n,gap,case,L_k,floor\n";
  for (const auto& st : cert.steps) {
    out << st.k << ',' << st.n << ',' << text::format_double(st.gap) << ','
        << (st.case_one ? "I" : "II") << ',' << text::format_double(st.log_ratio) << ','
        << text::format_double(st.floor) << '\n';
  }
}

}  // namespace nagata
