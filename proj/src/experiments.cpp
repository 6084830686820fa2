#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "nagata/complex_maps.hpp"
#include "nagata/construction.hpp"
#include "nagata/dimension_lab.hpp"
#include "nagata/harness.hpp"
#include "nagata/spiral_porosity.hpp"
#include "nagata/text.hpp"

namespace nagata {

namespace {

using text::format_double;

std::string fmt(double v) { return format_double(v); }

std::string points_csv(const PointSet2D& ps) {
  std::ostringstream os;
  write_points_csv(os, ps);
  return os.str();
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
  }
  return out;
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

Criterion make(std::string id, std::string description) {
  Criterion c;
  c.id = std::move(id);
  c.description = std::move(description);
  return c;
}

}  // namespace

std::vector<Complex> rational_unit_square(std::size_t count) {
  std::vector<Complex> out;
  for (long long q = 1; out.size() < count; ++q) {
    for (long long a = 0; a <= q && out.size() < count; ++a) {
      for (long long b = 0; b <= q && out.size() < count; ++b) {
        if (a == 0 && b == 0) continue;
        if (std::gcd(std::gcd(a, b), q) != 1) continue;
        out.emplace_back(static_cast<double>(a) / static_cast<double>(q), static_cast<double>(b) / static_cast<double>(q));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Criterion> run_exp_sequence(const ParamBlock& p, std::uint64_t, ArtifactSink* sink) {
  const auto lambdas = p.reals("lambda");
  const auto n = static_cast<std::size_t>(p.integer("points"));
  const auto scales = log_spaced(p.real("s_min"), p.real("s_max"), static_cast<std::size_t>(p.integer("scales")));

  Stopwatch cover_clock;
  auto cover = make("AC1", "exponential-sequence covers are c s-bounded with multiplicity 1");
  cover.pass = true;
  std::ostringstream covers;
  covers << "lambda,s,blocks,max_diameter,bound,multiplicity,exact,pass\n";
  for (double lambda : lambdas) {
    const auto ps = exp_sequence_points(lambda, n);
    for (double s : scales) {
      const auto c = exp_sequence_cover(lambda, n, s);
      const auto v = verify_cover(ps, c, Euclidean{});
      const bool ok = v.bounded && v.multiplicity_upper == 1 && v.exact &&
                      c.bound_constant == lambda / (lambda - 1.0);
      cover.pass = cover.pass && ok;
      covers << fmt(lambda) << ',' << fmt(s) << ',' << c.blocks.size() << ',' << fmt(v.max_block_diameter) << ','
             << fmt(c.bound_constant * s) << ',' << v.multiplicity_upper << ',' << (v.exact ? "true" : "false")
             << ',' << (ok ? "true" : "false") << '\n';
    }
    if (sink && lambda == lambdas.front()) sink->write("points.csv", points_csv(ps));
  }
  cover.detail = std::to_string(lambdas.size()) + " lambdas x " + std::to_string(scales.size()) + " scales";
  cover.seconds = cover_clock.seconds();

  Stopwatch ultra_clock;
  auto ultra = make("AC2", "d_U is an ultrametric bi-Lipschitz to d on lambda^k");
  const double lu = p.real("ultra_lambda");
  const auto un = static_cast<std::size_t>(p.integer("ultra_points"));
  const auto cert = ratio_sequence_certificate(exp_sequence_points(lu, un), {}, lu);
  ultra.pass = cert.checked && cert.strong_triangle && cert.bilipschitz;
  ultra.values = {{"lambda", lu},
                  {"points", un},
                  {"bilip_lower", cert.bilip_lower},
                  {"bilip_upper", cert.bilip_upper},
                  {"observed_lower", cert.observed_lower},
                  {"observed_upper", cert.observed_upper}};
  ultra.detail = "d_U/d in [" + fmt(cert.observed_lower) + ", " + fmt(cert.observed_upper) + "]";
  ultra.seconds = ultra_clock.seconds();

  if (sink) {
    sink->write("covers.csv", covers.str());
    std::ostringstream u;
    u << "m,n,d_U,d,ratio\n";
    if (cert.checked) {
      const auto& pts = cert.sequence->points();
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
          const double du = cert.sequence->ultrametric(i, j);
          const double d = std::abs(pts[i] - pts[j]);
          u << i + 1 << ',' << j + 1 << ',' << fmt(du) << ',' << fmt(d) << ',' << fmt(du / d) << '\n';
        }
    }
    sink->write("ultrametric.csv", u.str());
  }
  return {cover, ultra};
}

// ---------------------------------------------------------------------------

std::vector<Criterion> run_half_lattice(const ParamBlock& p, std::uint64_t, ArtifactSink* sink) {
  const auto k_max = p.integer("k_max");
  const auto l_max = p.integer("l_max");
  const double delta = p.real("delta");
  if (k_max < 2 || l_max < 0) throw ConfigError("half-lattice needs k_max >= 2 and l_max >= 0");
  Stopwatch clock;
  std::vector<Complex> domain;
  for (long long k = 1; k <= k_max; ++k)
    for (long long l = -l_max; l <= l_max; ++l)
      domain.emplace_back(static_cast<double>(k), 2.0 * std::numbers::pi * static_cast<double>(l));
  std::vector<Complex> image;
  for (long long k = 1; k <= k_max; ++k) image.emplace_back(std::exp(static_cast<double>(k)), 0.0);
  const auto dom = PointSet2D::from_complex(domain);
  const auto img = PointSet2D::from_complex(image);

  auto c = make("AC4", "half-lattice carries growing delta-chains while its exp image is an e-ratio sequence");
  const auto w = chain_growth_witness(dom, delta, 3);
  const double reach = w ? w->diameters.back() : 0.0;
  const auto cert = ratio_sequence_certificate(img, {}, std::numbers::e);
  const double need = static_cast<double>(k_max - 1);
  c.pass = w && reach >= need && cert.checked && cert.strong_triangle && cert.bilipschitz;
  c.values = {{"chains", w ? w->chains.size() : 0},
              {"max_chain_diameter", reach},
              {"required_diameter", need},
              {"image_ratio_checked", cert.checked},
              {"image_min_ratio", cert.min_ratio}};
  c.detail = "max chain diameter " + fmt(reach) + ", image ratio certificate " + (cert.checked ? "ok" : "failed");
  c.seconds = clock.seconds();

  if (sink) {
    sink->write("domain.csv", points_csv(dom));
    sink->write("image.csv", points_csv(img));
    std::ostringstream os;
    os << "chain,length,diameter\n";
    if (w)
      for (std::size_t i = 0; i < w->chains.size(); ++i)
        os << i << ',' << w->chains[i].size() << ',' << fmt(w->diameters[i]) << '\n';
    sink->write("chains.csv", os.str());
  }
  return {c};
}

// ---------------------------------------------------------------------------

std::vector<Criterion> run_picard_exp(const ParamBlock& p, std::uint64_t, ArtifactSink* sink) {
  Stopwatch clock;
  const auto count = static_cast<std::size_t>(p.integer("targets"));
  const auto targets = rational_unit_square(count);
  const auto seq = exp_preimage_sequence(targets, p.real("start_radius"));
  const auto check = check_preimage_sequence(seq, targets);
  const double s_min = std::abs(seq.points[0].z);
  const auto scales = p.integer("scales");
  const ScaleGrid grid{s_min, s_min * std::pow(2.0, static_cast<double>(scales - 1)), 2.0};
  const double c_max = p.real("c_max");
  const auto nd = ndim0_certificate(seq.points, grid, Euclidean{}, c_max);

  auto c = make("AC5", "exp preimages double in modulus, hit their targets and look zero-dimensional");
  c.pass = check.doubling && check.max_relative_error <= 1e-12 && nd.pass;
  c.values = {{"targets", count},
              {"precision_bits", seq.precision_bits},
              {"doubling", check.doubling},
              {"separated", check.separated},
              {"max_relative_error", check.max_relative_error},
              {"ndim0_constant", nd.constant},
              {"ndim0_scales", nd.per_scale.size()}};
  c.detail = "max rel err " + fmt(check.max_relative_error) + ", C = " + fmt(nd.constant);
  c.seconds = clock.seconds();

  if (sink) {
    std::ostringstream os;
    os << "i,target_re,target_im,re,im,winding,radius\n";
    for (std::size_t i = 0; i < targets.size(); ++i) {
      os << i + 1 << ',' << fmt(targets[i].real()) << ',' << fmt(targets[i].imag()) << ','
         << fmt(seq.points[i].z.real()) << ',' << fmt(seq.points[i].z.imag()) << ',' << seq.windings[i] << ','
         << fmt(seq.radii[i]) << '\n';
    }
    sink->write("preimages.csv", os.str());
    std::ostringstream sc;
    sc << "scale,components,max_diameter,max_ratio\n";
    for (const auto& r : nd.per_scale)
      sc << fmt(r.scale) << ',' << r.component_count << ',' << fmt(r.max_diameter) << ',' << fmt(r.max_ratio) << '\n';
    sink->write("ndim0.csv", sc.str());
  }
  return {c};
}

// ---------------------------------------------------------------------------

std::vector<Criterion> run_thm17(const ParamBlock& p, std::uint64_t seed, ArtifactSink* sink) {
  // Radial growth constants on random polynomials with a_d > 0, d <= 5.
  Stopwatch radial_clock;
  auto radial = make("AC3", "Re(q(r+h) - q(r)) >= c0 r^(d-1) h on the validation grid");
  const auto polys = p.integer("radial_polys");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(1, 5);
  std::uniform_real_distribution<double> coef(-10.0, 10.0);
  std::uniform_real_distribution<double> lead(0.1, 10.0);
  std::size_t violations = 0, points = 0;
  std::ostringstream rad;
  rad << "poly,degree,C,R0,c0,violations\n";
  for (long long i = 0; i < polys; ++i) {
    PolynomialSpec q;
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) {
      const double re = coef(rng);
      q.coefficients.emplace_back(re, coef(rng));
    }
    q.coefficients.emplace_back(lead(rng), 0.0);
    const auto g = radial_growth_constants(q, 50, 20);
    violations += g.violations;
    points += g.grid_points;
    rad << i << ',' << d << ',' << fmt(g.C) << ',' << fmt(g.R0) << ',' << fmt(g.c0) << ',' << g.violations << '\n';
  }
  radial.pass = violations == 0;
  radial.values = {{"polynomials", polys}, {"grid_points", points}, {"violations", violations}};
  radial.detail = std::to_string(violations) + " violations over " + std::to_string(points) + " grid points";
  radial.seconds = radial_clock.seconds();

  Stopwatch clock;
  ConstructionParams cp;
  cp.c_A = p.real("c_A");
  cp.epsilon = p.real("epsilon");
  cp.delta = p.real("delta");
  cp.f = parse_genus1(p.text("function"));
  cp.n_min = static_cast<int>(p.integer("n_min"));
  cp.n_max = static_cast<int>(p.integer("n_max"));
  cp.gate_on_tail_index = p.flag("gate_on_tail_index");
  const auto& reading = p.text("admissibility");
  if (reading == "per-block") {
    cp.admissibility = Admissibility::kPerBlock;
  } else if (reading == "common-side") {
    cp.admissibility = Admissibility::kCommonSide;
  } else {
    throw ConfigError("admissibility must be per-block or common-side");
  }
  const auto schedule = build_schedule(cp);
  const auto patches = place_patches(cp, schedule);
  const auto cert = ratio_certificate(cp, schedule, patches);

  auto c = make("AC6", "patches grow, the ratio certificate finds K with Lambda > 1, diagnostic floors hold");
  bool grows = !patches.patch_length.empty();
  for (std::size_t i = 1; i < patches.patch_length.size(); ++i)
    grows = grows && patches.patch_length[i].second >= patches.patch_length[i - 1].second;
  const std::size_t m_first = grows ? patches.patch_length.front().second : 0;
  const std::size_t m_last = grows ? patches.patch_length.back().second : 0;
  const bool part_a = grows && m_last >= 10 * m_first;
  bool part_b = cert.K.has_value() && cert.Lambda > 1.0;
  if (part_b) {
    const double log_lambda = std::log(cert.Lambda);
    for (std::size_t k = *cert.K; k < cert.steps.size(); ++k)
      part_b = part_b && cert.steps[k].log_ratio >= log_lambda;
  }
  const bool part_c = cert.floors_respected;
  c.pass = part_a && part_b && part_c;
  const auto chains = chain_growth_witness(cert.K ? cert.pruned : patches.points, cp.delta, 3);
  c.values = {{"M_first", m_first},
              {"M_last", m_last},
              {"patches_grow", part_a},
              {"K", cert.K ? nlohmann::json(*cert.K) : nlohmann::json(nullptr)},
              {"K_annulus", cert.K_annulus},
              {"Lambda", cert.Lambda},
              {"floors_respected", part_c},
              {"trichotomy", cert.trichotomy},
              {"pruned_chain_witness", chains.has_value()}};
  c.detail = "M " + std::to_string(m_first) + " -> " + std::to_string(m_last) + ", " +
             (cert.K ? "K = " + std::to_string(*cert.K) + " (annulus " + std::to_string(cert.K_annulus) +
                           "), Lambda = " + fmt(cert.Lambda)
                     : "no K, " + std::to_string(cert.offending.size()) + " offending steps") +
             ", floors " + (part_c ? "respected" : "violated");
  c.seconds = clock.seconds();

  if (sink) {
    sink->write("radial.csv", rad.str());
    sink->write("construction.json", construction_json(cp, schedule, patches, cert).dump(2) + "\n");
    sink->write("X.csv", points_csv(cert.K ? cert.pruned : PointSet2D{}));
    std::ostringstream os;
    write_ratios_csv(os, cert);
    sink->write("ratios.csv", os.str());
  }
  return {radial, c};
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<double, double>> parse_pc_list(const std::string& s) {
  std::vector<std::pair<double, double>> out;
  for (auto item : text::split(s, ',')) {
    const auto parts = text::split(text::trim(item), ':');
    if (parts.size() != 2) throw ConfigError("expected p:c pairs, got '" + std::string(item) + "'");
    out.emplace_back(text::parse_double(text::trim(parts[0])), text::parse_double(text::trim(parts[1])));
  }
  if (out.empty()) throw ConfigError("empty p:c list");
  return out;
}

// Spiral sample resolving B(0, r0) for probes at r0/4 and smaller.
PointSet2D porosity_sample(double p, double r0) {
  return spiral_sample(p, std::pow(8.0 / r0, 1.0 / p));
}

}  // namespace

std::vector<Criterion> run_spiral_porosity(const ParamBlock& p, std::uint64_t seed, ArtifactSink* sink) {
  const auto pcs = parse_pc_list(p.text("pc"));
  const auto n_alpha = p.integer("alphas");
  const auto k_extra = p.integer("k_extra");
  const double eps = p.real("eps_angle");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> A(-std::numbers::pi, std::numbers::pi);

  Stopwatch ray_clock;
  auto rays = make("AC7", "every ray gap of Omega_p near 0 is below 2 c r0, with the mean-value bound");
  rays.pass = true;
  std::vector<RayGapReport> reports;
  nlohmann::json per = nlohmann::json::array();
  for (auto [pp, c] : pcs) {
    const auto sp = spiral_constants(pp, c, eps);
    double worst = 0.0;
    bool ok = true;
    for (long long i = 0; i < n_alpha; ++i) {
      const double alpha = A(rng);
      auto r = ray_gap_report(sp, alpha, sp.k0 + static_cast<int>(k_extra));
      ok = ok && r.pass && r.mean_value_ok && r.midpoints_inside;
      worst = std::max(worst, r.max_gap / r.bound);
      reports.push_back(std::move(r));
    }
    rays.pass = rays.pass && ok;
    per.push_back({{"p", pp}, {"c", c}, {"k0", sp.k0}, {"r0", sp.r0}, {"worst_gap_over_bound", worst}, {"pass", ok}});
  }
  rays.values = {{"cases", per}, {"alphas", n_alpha}};
  rays.detail = std::to_string(reports.size()) + " rays";
  rays.seconds = ray_clock.seconds();

  Stopwatch poro_clock;
  auto poro = make("AC8", "porosity estimate of the spiral in B(0, r0) does not increase as k0 doubles");
  const double sp_p = p.real("porosity_p");
  const auto k0s = p.reals("k0_sweep");
  std::vector<double> c_hats;
  std::ostringstream pcsv;
  pcsv << "k0,x,y,r,best_ratio\n";
  for (double k0 : k0s) {
    const double r0 = std::pow(2.0 * k0, -sp_p);
    const auto ps = porosity_sample(sp_p, r0);
    PorosityGrid g;
    g.probe_radii = {r0 / 4, r0 / 8};
    g.inner_fraction = 0.5;
    g.max_probes = static_cast<std::size_t>(p.integer("probes"));
    g.candidate_spacing = p.real("candidate_spacing");
    const auto est = porosity_estimate(ps, {{0.0, 0.0}, r0}, g);
    c_hats.push_back(est.c_hat);
    for (const auto& pr : est.probes)
      pcsv << fmt(k0) << ',' << fmt(pr.x.real()) << ',' << fmt(pr.x.imag()) << ',' << fmt(pr.r) << ','
           << fmt(pr.best_ratio) << '\n';
  }
  poro.pass = c_hats.size() >= 2;
  for (std::size_t i = 1; i < c_hats.size(); ++i) poro.pass = poro.pass && c_hats[i] <= c_hats[i - 1];
  poro.values = {{"k0", k0s}, {"c_hat", c_hats}};
  std::string trail;
  for (std::size_t i = 0; i < c_hats.size(); ++i) trail += (i ? " -> " : "") + fmt(c_hats[i]);
  poro.detail = "c_hat " + trail;
  poro.seconds = poro_clock.seconds();

  if (sink) {
    std::ostringstream os;
    write_rays_csv(os, reports);
    sink->write("rays.csv", os.str());
    sink->write("porosity.csv", pcsv.str());
    sink->write("summary.json", nlohmann::json{{"rays", rays.values}, {"porosity", poro.values}}.dump(2) + "\n");
  }
  return {rays, poro};
}

// ---------------------------------------------------------------------------

std::vector<Criterion> run_covering_exponent(const ParamBlock& p, std::uint64_t, ArtifactSink* sink) {
  const double pp = p.real("p");
  const auto k0s = p.reals("k0_sweep");
  const auto j_lo = p.integer("r_exp_min");
  const auto j_hi = p.integer("r_exp_max");
  const double need = p.real("s_hat_min");
  if (k0s.empty() || j_lo < 1 || j_hi <= j_lo) throw ConfigError("covering-exponent needs k0 values and r_exp_min < r_exp_max");

  Stopwatch clock;
  auto c = make("AC8", "covering exponent of the spiral near 0 fits s_hat >= 1.5");
  std::ostringstream counts;
  counts << "k0,r,count\n";
  nlohmann::json fits = nlohmann::json::array();
  double innermost = 0.0;
  for (double k0 : k0s) {
    const double r0 = std::pow(2.0 * k0, -pp);
    std::vector<double> radii;
    for (long long j = j_lo; j <= j_hi; ++j) radii.push_back(r0 * std::pow(2.0, -static_cast<double>(j)));
    SpiralSamplePolicy pol;
    pol.min_arc = radii.back() / 8;
    // The unsampled core |z| < t_max^-p has radius half the finest r.
    const double t_max = std::pow(2.0 / radii.back(), 1.0 / pp);
    const auto ps = spiral_sample(pp, t_max, pol);
    const auto est = covering_exponent(ps, {0.0, 0.0}, r0, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) counts << fmt(k0) << ',' << fmt(radii[i]) << ',' << est.counts[i] << '\n';
    fits.push_back({{"k0", k0}, {"r0", r0}, {"samples", ps.size()}, {"s_hat", est.s_hat}});
    innermost = est.s_hat;
  }
  c.pass = innermost >= need;
  c.values = {{"fits", fits}, {"threshold", need}};
  c.detail = "s_hat " + fmt(innermost) + " at k0 = " + fmt(k0s.back());
  c.seconds = clock.seconds();
  if (sink) {
    sink->write("counts.csv", counts.str());
    sink->write("fit.json", c.values.dump(2) + "\n");
  }
  return {c};
}

// ---------------------------------------------------------------------------

const std::map<std::string, std::string>& experiment_defaults(const std::string& name) {
  static const std::map<std::string, std::map<std::string, std::string>> table{
      {"exp-sequence",
       {{"lambda", "2, 2.718281828459045, 5"},
        {"points", "30"},
        {"scales", "12"},
        {"s_min", "1e-3"},
        {"s_max", "1e6"},
        {"ultra_lambda", "2"},
        {"ultra_points", "20"}}},
      {"half-lattice", {{"k_max", "40"}, {"l_max", "40"}, {"delta", "1"}}},
      {"picard-exp", {{"targets", "200"}, {"start_radius", "1"}, {"scales", "10"}, {"c_max", "3"}}},
      {"thm17",
       {{"c_A", "2"},
        {"epsilon", "1e-3"},
        {"delta", "1"},
        {"function", "m=1, q=0,1, zeros=geometric:2"},
        {"n_min", "1"},
        {"n_max", "14"},
        {"gate_on_tail_index", "false"},
        {"admissibility", "per-block"},
        {"radial_polys", "20"}}},
      {"spiral-porosity",
       {{"pc", "1:0.1, 2:0.05, 0.5:0.2"},
        {"alphas", "64"},
        {"k_extra", "200"},
        {"eps_angle", "0.7853981633974483"},
        {"porosity_p", "1"},
        {"k0_sweep", "8, 16, 32"},
        {"probes", "64"},
        {"candidate_spacing", "0.05"}}},
      {"covering-exponent",
       {{"p", "1"}, {"k0_sweep", "8, 16, 32"}, {"r_exp_min", "3"}, {"r_exp_max", "7"}, {"s_hat_min", "1.5"}}},
  };
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown experiment '" + name + "'");
  return it->second;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"exp-sequence", "half-lattice",    "picard-exp",
                                              "thm17",        "spiral-porosity", "covering-exponent"};
  return names;
}

std::vector<Criterion> run_criteria(const std::string& name, const std::map<std::string, std::string>& params,
                                    std::uint64_t seed) {
  const ParamBlock block(experiment_defaults(name), params);
  if (name == "exp-sequence") return run_exp_sequence(block, seed, nullptr);
  if (name == "half-lattice") return run_half_lattice(block, seed, nullptr);
  if (name == "picard-exp") return run_picard_exp(block, seed, nullptr);
  if (name == "thm17") return run_thm17(block, seed, nullptr);
  if (name == "spiral-porosity") return run_spiral_porosity(block, seed, nullptr);
  return run_covering_exponent(block, seed, nullptr);
}

}  // namespace nagata
