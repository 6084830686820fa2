#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nagata/errors.hpp"
#include "nagata/spiral_porosity.hpp"

using namespace nagata;

namespace {

constexpr double kPi = std::numbers::pi;

// Smallest integer k0 meeting both inequalities, by direct search.
int k0_oracle(double p, double c) {
  for (int k = 1;; ++k) {
    const bool first = k >= 3 * p / (4 * c);
    const double root = std::pow(1 - 2 * c, 1 / p);
    const bool second = k >= 2 * root / (1 - root) - 1e-9;
    if (first && second) return k;
  }
}

}  // namespace

TEST_CASE("spiral points") {
  const Complex a = spiral_point(1.0, 1.0);
  CHECK(a.real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(a.imag()) < 1e-15);
  const Complex b = spiral_point(1.0, 2.0);
  CHECK(b.real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(b.imag()) < 1e-15);
}

TEST_CASE("spiral samples have strictly decreasing moduli and bounded steps") {
  for (double p : {0.5, 1.0, 2.0}) {
    SpiralSamplePolicy pol;
    pol.max_arc = 0.01;
    const auto ps = spiral_sample(p, 40.0, pol);
    CHECK(ps[0].z == spiral_point(p, 1.0));
    CHECK(ps[ps.size() - 1].z == spiral_point(p, 40.0));
    for (std::size_t i = 1; i < ps.size(); ++i) {
      CHECK(std::abs(ps[i].z) < std::abs(ps[i - 1].z));
      CHECK(std::abs(ps[i].z - ps[i - 1].z) <= 0.01 * 1.001);
    }
  }
  CHECK_THROWS_AS(spiral_sample(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(spiral_sample(-1.0, 4.0), DomainError);
}

TEST_CASE("spiral constants") {
  const auto a = spiral_constants(1.0, 0.1);
  CHECK(a.k0 == 8);
  CHECK(a.r0 == 1.0 / 16);
  // c near 1/2: the second term vanishes, 3/(4 * 0.49) = 1.53.
  CHECK(spiral_constants(1.0, 0.49).k0 == 2);
  // p = 2, c = 0.1: max{15, 2 sqrt(0.8)/(1 - sqrt(0.8)) = 16.94}.
  const auto b = spiral_constants(2.0, 0.1);
  CHECK(b.k0 == 17);
  CHECK(b.r0 == doctest::Approx(1.0 / (34.0 * 34.0)).epsilon(1e-15));
  CHECK_THROWS_AS(spiral_constants(1.0, 0.5), DomainError);
  CHECK_THROWS_AS(spiral_constants(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(spiral_constants(1.0, 0.1, 2.0), DomainError);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> P(0.2, 4.0), C(0.01, 0.49);
  for (int i = 0; i < 200; ++i) {
    const double p = P(rng), c = C(rng);
    const auto s = spiral_constants(p, c);
    CHECK(s.k0 == k0_oracle(p, c));
    const double root = std::pow(1 - 2 * c, 1 / p);
    CHECK(s.k0 >= 3 * p / (4 * c));
    CHECK(s.k0 >= 2 * root / (1 - root) - 1e-9);
    CHECK(s.r0 == std::pow(2.0 * s.k0, -p));
  }
}

TEST_CASE("spiral domain membership") {
  const double eps = kPi / 4;
  for (double t : {1.5, 3.25, 10.0, 77.7}) {
    const Complex on = spiral_point(1.0, t);
    CHECK(in_spiral_domain(on, 1.0, eps));
    CHECK(in_spiral_domain(on * std::polar(1.0, 0.9 * eps), 1.0, eps));
    CHECK(in_spiral_domain(on * std::polar(1.0, -0.9 * eps), 1.0, eps));
    CHECK_FALSE(in_spiral_domain(on * std::polar(1.0, 1.1 * eps), 1.0, eps));
    CHECK_FALSE(in_spiral_domain(on * std::polar(1.0, kPi), 1.0, eps));
  }
  CHECK_FALSE(in_spiral_domain({0.0, 0.0}, 1.0, eps));
  CHECK_FALSE(in_spiral_domain({-1.0, 0.0}, 1.0, eps));  // t = 1 is on the boundary
  CHECK_FALSE(in_spiral_domain({2.0, 0.0}, 1.0, eps));
}

TEST_CASE("ray intervals at k = 1") {
  SpiralParams sp;
  sp.p = 1.0;
  sp.eps_angle = kPi / 4;
  sp.c = 0.1;
  sp.k0 = 1;
  sp.r0 = 0.5;
  const auto r = ray_gap_report(sp, 0.0, 5);
  CHECK(r.intervals[0].first == doctest::Approx(1 / 2.25).epsilon(1e-15));
  CHECK(r.intervals[0].second == doctest::Approx(1 / 1.75).epsilon(1e-15));
  CHECK(r.intervals.size() == 5);
  CHECK(r.gaps.size() == 4);
  CHECK_THROWS_AS(ray_gap_report(sp, 0.0, 1), DomainError);
  CHECK_THROWS_AS(ray_gap_report(sp, kPi, 5), DomainError);
}

TEST_CASE("ray gaps stay below 2 c r0") {
  const std::pair<double, double> cases[] = {{1.0, 0.1}, {2.0, 0.05}, {0.5, 0.2}};
  for (auto [p, c] : cases) {
    const auto sp = spiral_constants(p, c);
    for (int i = 0; i < 64; ++i) {
      const double alpha = -kPi + 2 * kPi * (i + 0.5) / 64;
      const auto r = ray_gap_report(sp, alpha, sp.k0 + 200);
      CHECK(r.pass);
      CHECK(r.mean_value_ok);
      CHECK(r.midpoints_inside);
      for (std::size_t k = 0; k < r.intervals.size(); ++k) {
        CHECK(r.intervals[k].first < r.intervals[k].second);
        if (k) CHECK(r.intervals[k].second < r.intervals[k - 1].first);
      }
      // The outermost gap is measured from r0 and the first full interval.
      CHECK(r.gaps[0] == r.bound / (2 * c) - r.intervals[1].first);
    }
  }
}

TEST_CASE("a too small k0 breaks the ray bound") {
  auto sp = spiral_constants(1.0, 0.1);
  sp.k0 = 2;
  sp.r0 = 0.25;
  CHECK_FALSE(ray_gap_report(sp, 0.5, 50).pass);
}

TEST_CASE("ray csv") {
  const auto sp = spiral_constants(1.0, 0.1);
  const std::vector<RayGapReport> reports{ray_gap_report(sp, 0.0, 12), ray_gap_report(sp, 1.0, 12)};
  std::ostringstream os;
  write_rays_csv(os, reports);
  const std::string s = os.str();
  CHECK(s.rfind("alpha,k,a_k,b_k,gap,bound,pass\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 2 * 4);
}

TEST_CASE("porosity of a segment") {
  std::vector<Complex> seg;
  for (int k = 0; k <= 4000; ++k) seg.emplace_back(-1.0 + k / 2000.0, 0.0);
  const auto ps = PointSet2D::from_complex(seg);
  PorosityGrid g;
  g.probe_radii = {0.5};
  g.max_probes = 64;
  const auto est = porosity_estimate(ps, {{0, 0}, 1.0}, g);
  CHECK(est.probes.size() == 64);
  // B(x + i r/2, r/2) misses the line.
  CHECK(est.c_hat >= 0.4);
  CHECK(est.c_hat <= 0.5 + 1e-12);
}

TEST_CASE("porosity of a dense grid is the grid spacing") {
  const double h = 0.01;
  std::vector<Complex> grid;
  for (int i = -120; i <= 120; ++i)
    for (int j = -120; j <= 120; ++j) grid.emplace_back(i * h, j * h);
  PorosityGrid g;
  g.probe_radii = {0.2};
  g.max_probes = 32;
  g.candidate_spacing = 0.01;
  const auto est = porosity_estimate(PointSet2D::from_complex(grid), {{0, 0}, 1.0}, g);
  // The largest empty ball sits at a cell centre, radius h / sqrt 2.
  CHECK(est.c_hat <= h / std::sqrt(2.0) / 0.2 + 1e-12);
  CHECK(est.c_hat >= 0.5 * h / 0.2);
}

TEST_CASE("porosity never increases when points are added") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<Complex> base;
  for (int i = 0; i < 300; ++i) base.emplace_back(U(rng), U(rng));
  PorosityGrid g;
  g.probe_radii = {0.3, 0.1};
  g.candidate_spacing = 0.08;
  const std::vector<Complex> centers(base.begin(), base.begin() + 40);
  double prev = porosity_at(PointSet2D::from_complex(base), {{0, 0}, 1.0}, centers, g).c_hat;
  for (int round = 0; round < 5; ++round) {
    for (int i = 0; i < 200; ++i) base.emplace_back(U(rng), U(rng));
    const double next = porosity_at(PointSet2D::from_complex(base), {{0, 0}, 1.0}, centers, g).c_hat;
    CHECK(next <= prev);
    prev = next;
  }
}

TEST_CASE("spiral porosity shrinks with the window") {
  double prev = 1.0;
  for (int k0 : {8, 16, 32}) {
    const double r0 = 1.0 / (2 * k0);
    const auto ps = spiral_sample(1.0, 8.0 / r0);
    PorosityGrid g;
    g.probe_radii = {r0 / 4, r0 / 8};
    g.inner_fraction = 0.5;
    g.max_probes = 64;
    const auto est = porosity_estimate(ps, {{0, 0}, r0}, g);
    CHECK(est.c_hat < prev);
    prev = est.c_hat;
  }
}

TEST_CASE("porosity input errors") {
  const std::vector<Complex> one{{0, 0}};
  const auto ps = PointSet2D::from_complex(one);
  PorosityGrid g;
  CHECK_THROWS_AS(porosity_estimate(ps, {{0, 0}, 1.0}, g), DomainError);
  g.probe_radii = {0.5};
  g.candidate_spacing = 0.0;
  CHECK_THROWS_AS(porosity_estimate(ps, {{0, 0}, 1.0}, g), DomainError);
  g.candidate_spacing = 0.1;
  CHECK_THROWS_AS(porosity_estimate(ps, {{5, 5}, 1.0}, g), DomainError);
}
