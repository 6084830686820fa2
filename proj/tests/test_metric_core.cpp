#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "nagata/dimension_lab.hpp"
#include "nagata/errors.hpp"
#include "nagata/metric_core.hpp"
#include "oracles.hpp"

using namespace nagata;

namespace {

PointSet2D real_points(std::initializer_list<double> xs) {
  std::vector<Complex> v;
  for (double x : xs) v.emplace_back(x, 0.0);
  return PointSet2D::from_complex(v);
}

}  // namespace

TEST_CASE("point set rejects duplicates and stray infinities") {
  CHECK_THROWS_AS(real_points({1.0, 2.0, 1.0 + 1e-13}), DomainError);
  CHECK_NOTHROW(real_points({1.0, 1.0 + 1e-9}));
  CHECK_THROWS_AS(PointSet2D({ExtPoint::infinity(), ExtPoint::infinity()}), DomainError);
  const PointSet2D ps({ExtPoint(1.0, 0.0), ExtPoint::infinity()});
  CHECK(ps.has_infinity());
  CHECK_THROWS_AS(ps.finite_values(), DomainError);
}

TEST_CASE("spherical distance reference values") {
  CHECK(distance(ExtPoint(0.0, 0.0), ExtPoint::infinity(), Spherical{}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(distance(ExtPoint(1.0, 0.0), ExtPoint(-1.0, 0.0), Spherical{}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(distance(ExtPoint::infinity(), ExtPoint::infinity(), Spherical{}) == 0.0);
  CHECK_THROWS_AS(distance(ExtPoint(0.0, 0.0), ExtPoint::infinity(), Euclidean{}), DomainError);
}

TEST_CASE("spherical metric is invariant under inversion") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    const Complex z(g(rng), g(rng));
    const Complex w(g(rng), g(rng));
    const double before = distance(z, w, Spherical{});
    const double after = distance(invert(z), invert(w), Spherical{});
    CHECK(after == doctest::Approx(before).epsilon(1e-12));
  }
  CHECK(invert(ExtPoint(0.0, 0.0)).infinite);
  CHECK(invert(ExtPoint::infinity()).z == Complex(0.0, 0.0));
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 5.0);
  std::vector<Complex> seq;
  for (int k = 1; k <= 30; ++k) seq.emplace_back(std::ldexp(1.0, k), 0.0);
  const auto cert = ratio_sequence_certificate(PointSet2D::from_complex(seq), {}, 2.0);
  REQUIRE(cert.checked);
  const MetricKind metrics[] = {Euclidean{}, Spherical{}};
  for (int t = 0; t < 10000; ++t) {
    const Complex x(g(rng), g(rng)), y(g(rng), g(rng)), z(g(rng), g(rng));
    for (const auto& m : metrics) {
      const double xy = distance(x, y, m), yz = distance(y, z, m), xz = distance(x, z, m);
      CHECK(xy == distance(y, x, m));
      CHECK(distance(x, x, m) == 0.0);
      CHECK(xz <= (xy + yz) * (1 + 1e-12));
    }
    std::uniform_int_distribution<std::size_t> pick(0, seq.size() - 1);
    const auto a = seq[pick(rng)], b = seq[pick(rng)], c = seq[pick(rng)];
    const auto u = cert.metric();
    CHECK(distance(a, c, u) <= std::max(distance(a, b, u), distance(b, c, u)));
    CHECK(distance(a, b, u) == distance(b, a, u));
  }
  CHECK_THROWS_AS(distance(Complex(3.0, 0.0), Complex(2.0, 0.0), cert.metric()), DomainError);
}

TEST_CASE("exponential sequence cover at s = 2") {
  const auto ps = exp_sequence_points(2.0, 5);
  const auto cover = exp_sequence_cover(2.0, 5, 2.0);
  const std::vector<std::vector<std::size_t>> expected{{0, 1}, {2}, {3}, {4}};
  CHECK(cover.blocks == expected);
  CHECK(cover.bound_constant == 2.0);
  const auto v = verify_cover(ps, cover, Euclidean{});
  CHECK(v.bounded);
  CHECK(v.multiplicity_upper == 1);
  CHECK(oracle::subset_multiplicity(ps.finite_values(), cover.blocks, 2.0) == 1);
}

TEST_CASE("trivial covers") {
  const auto ps = real_points({0.0, 0.3, 1.0});
  Cover one{{{0, 1, 2}}, 1.0, 1.0, 1};
  const auto v = verify_cover(ps, one, Euclidean{});
  CHECK(v.bounded);
  CHECK(v.multiplicity_upper == 1);

  const auto gap = real_points({0.0, 0.5});
  Cover two{{{0}, {1}}, 1.0, 1.0, 1};
  const auto w = verify_cover(gap, two, Euclidean{});
  CHECK(w.multiplicity_upper == 2);
  CHECK_FALSE(w.within_claim);
  REQUIRE(w.witness);
  CHECK(*w.witness == std::vector<std::size_t>{0, 1});

  CHECK_THROWS_AS(verify_cover(gap, Cover{{}, 1.0, 1.0, 1}, Euclidean{}), DomainError);
  CHECK_THROWS_AS(verify_cover(gap, Cover{{{0}}, 1.0, 1.0, 1}, Euclidean{}), DomainError);
}

TEST_CASE("s-disjoint covers have multiplicity one") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    // Clusters on a line spaced far beyond s.
    std::vector<Complex> pts;
    Cover cover;
    cover.scale = 1.0;
    cover.bound_constant = 10.0;
    std::uniform_real_distribution<double> u(0.0, 0.9);
    for (int b = 0; b < 8; ++b) {
      cover.blocks.emplace_back();
      for (int i = 0; i < 3; ++i) {
        cover.blocks.back().push_back(pts.size());
        pts.emplace_back(5.0 * b + u(rng), u(rng));
      }
    }
    const auto v = verify_cover(PointSet2D::from_complex(pts), cover, Euclidean{});
    CHECK(v.multiplicity_upper == 1);
    CHECK(v.exact);
  }
}

TEST_CASE("s-chain components of a small line set") {
  const auto ps = real_points({0.0, 1.0, 2.0, 10.0});
  const auto dec = s_chain_components(ps, 1.0, Euclidean{});
  const std::vector<std::vector<std::size_t>> expected{{0, 1, 2}, {3}};
  CHECK(dec.components == expected);
  CHECK(dec.diameters == std::vector<double>{2.0, 0.0});
  CHECK(s_chain_components(ps, 10.0, Euclidean{}).components.size() == 1);
}

TEST_CASE("s-chain components match the closure oracle") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto pts = oracle::random_points(rng, 50, 3.0);
    const auto ps = PointSet2D::from_complex(pts);
    const auto dec = s_chain_components(ps, 0.3, Euclidean{});
    const auto labels = oracle::closure_labels(pts, 0.3);
    std::set<int> distinct(labels.begin(), labels.end());
    REQUIRE(dec.components.size() == distinct.size());
    for (std::size_t c = 0; c < dec.components.size(); ++c) {
      const auto& comp = dec.components[c];
      std::vector<Complex> members;
      for (auto i : comp) {
        CHECK(labels[i] == labels[comp.front()]);
        members.push_back(pts[i]);
      }
      CHECK(static_cast<std::size_t>(std::count(labels.begin(), labels.end(), labels[comp.front()])) == comp.size());
      CHECK(dec.diameters[c] == doctest::Approx(oracle::pairwise_diameter(members)).epsilon(1e-14));
    }
  }
}

TEST_CASE("s-chain partitions refine as s shrinks") {
  std::mt19937_64 rng(9);
  const auto pts = oracle::random_points(rng, 200, 10.0);
  const auto ps = PointSet2D::from_complex(pts);
  for (double s1 : {0.2, 0.4, 0.8}) {
    const auto fine = s_chain_components(ps, s1, Euclidean{});
    const auto coarse = s_chain_components(ps, 2 * s1, Euclidean{});
    std::vector<std::size_t> owner(pts.size());
    for (std::size_t c = 0; c < coarse.components.size(); ++c)
      for (auto i : coarse.components[c]) owner[i] = c;
    for (const auto& comp : fine.components)
      for (auto i : comp) CHECK(owner[i] == owner[comp.front()]);
  }
}

TEST_CASE("union of two sets: components sit inside touched components") {
  std::mt19937_64 rng(13);
  const auto y = oracle::random_points(rng, 60, 5.0);
  std::vector<Complex> z;
  for (auto p : oracle::random_points(rng, 60, 5.0)) z.push_back(p + Complex(2.0, 0.0));
  const std::vector<Complex> x = [&] {
    auto v = y;
    v.insert(v.end(), z.begin(), z.end());
    return v;
  }();
  const double s = 0.5;
  const auto dx = s_chain_components(PointSet2D::from_complex(x), s, Euclidean{});
  const auto dy = s_chain_components(PointSet2D::from_complex(y), s, Euclidean{});
  const auto dz = s_chain_components(PointSet2D::from_complex(z), s, Euclidean{});
  // piece[i]: the Y- or Z-component holding x_i, Z components offset.
  std::vector<std::size_t> piece(x.size());
  for (std::size_t c = 0; c < dy.components.size(); ++c)
    for (auto i : dy.components[c]) piece[i] = c;
  for (std::size_t c = 0; c < dz.components.size(); ++c)
    for (auto i : dz.components[c]) piece[y.size() + i] = dy.components.size() + c;
  double cy = 0.0, cz = 0.0, cx = 0.0;
  for (double d : dy.diameters) cy = std::max(cy, d / s);
  for (double d : dz.diameters) cz = std::max(cz, d / s);
  for (double d : dx.diameters) cx = std::max(cx, d / s);
  for (std::size_t c = 0; c < dx.components.size(); ++c) {
    std::set<std::size_t> touched;
    for (auto i : dx.components[c]) touched.insert(piece[i]);
    // Every member lies in a touched piece, and pieces are pairwise
    // joined through <= s links: diam <= #pieces (max diam) + (#pieces - 1) s.
    const double k = static_cast<double>(touched.size());
    CHECK(dx.diameters[c] / s <= k * std::max(cy, cz) + (k - 1.0) + 1e-9);
  }
  CHECK(cx >= std::max(cy, cz) - 1e-9);
}

TEST_CASE("threshold graph is symmetric") {
  const auto ps = real_points({0.0, 0.5, 1.2, 1.6});
  const auto adj = threshold_graph(ps, 0.6, Euclidean{});
  CHECK(adj[0] == std::vector<std::size_t>{1});
  CHECK(adj[2] == std::vector<std::size_t>{3});
}

TEST_CASE("hull diameter agrees with pairwise maximum") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const auto pts = oracle::random_points(rng, 80, 4.0);
    CHECK(diameter(PointSet2D::from_complex(pts), Euclidean{}) ==
          doctest::Approx(oracle::pairwise_diameter(pts)).epsilon(1e-14));
  }
  const auto collinear = real_points({3.0, 1.0, 2.0, -4.0});
  CHECK(diameter(collinear, Euclidean{}) == 7.0);
}

TEST_CASE("points CSV round trip") {
  const PointSet2D ps({ExtPoint(0.1, -2.5), ExtPoint::infinity(), ExtPoint(1e-300, 3.0)}, {"a", "inf", "c"});
  std::stringstream buf;
  write_points_csv(buf, ps);
  const auto back = read_points_csv(buf);
  REQUIRE(back.size() == 3);
  CHECK(back[0].z == ps[0].z);
  CHECK(back[1].infinite);
  CHECK(back[2].z == ps[2].z);
  CHECK(back.label(2) == "c");
}
