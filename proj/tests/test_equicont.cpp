#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ndist/catalogue.hpp"
#include "ndist/equicont.hpp"
#include "ndist/errors.hpp"
#include "ndist/proximal.hpp"
#include "ndist/structure.hpp"

using namespace ndist;

namespace {

std::vector<std::size_t> ball(const System& sys, const PointCloud& c, std::size_t x, double delta) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < c.size(); ++j)
    if (sys.distance(c[x], c[j]) < delta) out.push_back(j);
  return out;
}

bool subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

PointCloud small_cloud(const System& sys) {
  if (auto an = as_annulus(sys)) return an->cloud(6, 6);
  if (sys.id() == "shift2") return sys.sample(2, 0);
  // grid clouds: no two points closer than the proximality threshold
  return sys.sample(sys.id() == "skew_torus" ? 6 : 40, 0);
}

}  // namespace

TEST_CASE("r_set examples") {
  const auto rot = rotation();
  const auto rc = rot->sample(50, 0);
  CHECK(r_set(*rot, 3, 0.6, rc, 20).members.size() == rc.size());

  const auto id = identity();
  const auto ic = random_cloud(*id, 80, 2);
  for (std::size_t x : {0u, 17u, 79u}) CHECK(r_set(*id, x, 0.07, ic, 30).members == ball(*id, ic, x, 0.07));

  // shift metric 2^-m (m = first |index| of disagreement): d(s^n y, 0^inf) < 1/2 exactly when
  // y_{n-1} = y_n = y_{n+1} = 0, and d < 1 exactly when y_n = 0
  const auto sh = shift2();
  const auto sc = sh->sample(3, 0);
  const auto zero = *sc.index_of("zero");
  const int H = 10;
  std::vector<std::size_t> half, one;
  for (std::size_t j = 0; j < sc.size(); ++j) {
    const auto& s = *sc[j].get_if<Symbol>();
    bool block = false, single = false;
    for (int i = -H; i <= H; ++i) {
      single = single || s.at(i) == 0;
      block = block || (s.at(i - 1) == 0 && s.at(i) == 0 && s.at(i + 1) == 0);
    }
    if (block) half.push_back(j);
    if (single) one.push_back(j);
  }
  const auto r = r_set(*sh, zero, 0.5, sc, H);
  CHECK(r.members == half);
  CHECK(r_set(*sh, zero, 1.0, sc, H).members == one);
  const auto ones = *sc.index_of("ones");
  CHECK(std::find(r.members.begin(), r.members.end(), ones) == r.members.end());
  CHECK(one.size() == sc.size() - 1);
  CHECK(std::find(one.begin(), one.end(), ones) == one.end());
  CHECK_THROWS_AS(r_set(*sh, zero, 0.0, sc, H), ParameterError);
}

TEST_CASE("B_delta containment and delta monotonicity") {
  for (const auto& sys : catalogue()) {
    const auto c = small_cloud(*sys);
    const OrbitTable t(*sys, c, 40);
    for (std::size_t x = 0; x < c.size(); x += 3) {
      std::vector<std::size_t> prev;
      for (double d : {0.01, 0.05, 0.1, 0.2, 0.5}) {
        const auto m = r_set(t, x, d).members;
        CHECK(subset(ball(*sys, c, x, d), m));
        CHECK(subset(prev, m));
        CHECK(std::find(m.begin(), m.end(), x) != m.end());
        prev = m;
      }
      // the table path and the direct path agree
      CHECK(r_set(t, x, 0.1).members == r_set(*sys, x, 0.1, c, 40).members);
    }
  }
}

TEST_CASE("equivariance of R_delta under iteration") {
  const auto rot = rotation();
  const auto rc = rot->sample(40, 0);
  for (std::int64_t n : {0, 1, -7, 50}) CHECK(r_set_equivariance_check(*rot, 5, 0.1, rc, 100, n));
  const auto sk = skew_torus();
  CHECK(r_set_equivariance_check(*sk, 0, 0.1, sk->sample(12, 0), 200, 10));
  CHECK_THROWS_AS(r_set_equivariance_check(*sk, 0, 0.1, sk->sample(4, 0), 10, 6), ParameterError);
  for (const auto& sys : catalogue()) {
    const auto c = small_cloud(*sys);
    for (std::size_t x = 0; x < c.size(); x += 7)
      for (std::int64_t n : {0, 3, -5, 20}) CHECK_MESSAGE(r_set_equivariance_check(*sys, x, 0.1, c, 40, n), sys->id());
  }
}

TEST_CASE("skew witness times") {
  CHECK(skew_witness_time(0.1, 1) == 3);
  CHECK(skew_witness_time(0.5, 1) == 1);
  CHECK(skew_witness_time(0.01, 2) == 50);
  CHECK(skew_witness(1, 0.1) == std::pair<int, std::int64_t>{1, 3});
  // every M can only slow the witness down, so the minimum sits at M = 1
  for (int N = 1; N <= 5; ++N) CHECK(skew_witness(N, 0.01).first == 1);
  CHECK_THROWS_AS(skew_witness_time(1.5, 1), ParameterError);
  // oracle: exact rational scan n*num/(den*M) in lowest terms
  for (int M = 1; M <= 5; ++M)
    for (int den : {10, 20, 50, 100}) {
      std::int64_t n = 1;
      while (true) {
        const std::int64_t q = den * M, r = n % q;
        if (4 * r >= q && 4 * r <= 3 * q) break;
        ++n;
      }
      CHECK(skew_witness_time(1.0 / den, M) == n);
    }
  const auto c = skew_witness_cloud(3, kDefaultDeltaGrid);
  CHECK(c[0] == Point{Torus{0, 0}});
  CHECK(c.find(Torus{0.01 / 3, 0}).has_value());
}

TEST_CASE("probe examples") {
  const auto rot = rotation();
  const auto v = n_equicontinuity_probe(*rot, rot->sample(64, 0), 1, 0.1, {0.05}, 100);
  CHECK(v.passed);
  CHECK(v.passing_delta == 0.05);
  CHECK(!v.witness);

  const auto sk = skew_torus();
  for (int N = 1; N <= 3; ++N) {
    const auto c = skew_witness_cloud(N, kDefaultDeltaGrid);
    const auto s = n_equicontinuity_probe(*sk, c, N, 0.2, kDefaultDeltaGrid, 200);
    CHECK(!s.passed);
    REQUIRE(s.witness.has_value());
    CHECK(s.witness->certified);
    CHECK(s.witness->points.size() == static_cast<std::size_t>(N + 1));
    CHECK(s.witness->min_distance >= 0.2);
    bool cond = false;
    for (int M = 1; M <= N; ++M) cond = cond || skew_witness_condition(s.witness->n, s.witness->delta, M);
    CHECK(cond);
    for (const auto& d : s.per_delta) CHECK(d.status == DeltaStatus::fail);
  }
  // Packing limit: R_delta lies in a vertical strip of width 2 delta, and six points on a circle
  // have a gap <= 1/6, so diam_5 <= hypot(2 delta, 1/6) < 0.2 once delta <= 0.05.
  {
    const auto c = skew_witness_cloud(5, kDefaultDeltaGrid);
    const auto s = n_equicontinuity_probe(*sk, c, 5, 0.2, kDefaultDeltaGrid, 200);
    CHECK(s.passed);
    for (const auto& d : s.per_delta)
      if (d.delta <= 0.05) CHECK(d.sup_upper <= std::hypot(2 * d.delta, 1.0 / 6.0));
  }

  const auto a3 = annulus3();
  const auto ac = as_annulus(*a3)->cloud(40, 40);
  const OrbitTable t(*a3, ac, 200);
  const auto v3 = n_equicontinuity_probe(t, 3, 0.2);
  CHECK(v3.passed);
  const auto v2 = n_equicontinuity_probe(t, 2, 0.2);
  CHECK(!v2.passed);
  REQUIRE(v2.witness.has_value());
  // the witness is a translate of {p, (0,1), (0,2)}: one orbit point and both circle points at its angle
  const auto* an = as_annulus(*a3);
  std::vector<double> radii;
  std::vector<double> angles;
  int orbit_points = 0;
  for (std::size_t i : v2.witness->points) {
    const auto pol = an->polar(ac[i]);
    orbit_points += ac[i].is<OrbitIndex>();
    if (ac[i].is<Annulus>()) radii.push_back(pol.r);
    angles.push_back(pol.theta);
  }
  std::sort(radii.begin(), radii.end());
  CHECK(orbit_points == 1);
  CHECK(radii == std::vector<double>{1.0, 2.0});
  CHECK(angles[0] == angles[1]);
  CHECK(angles[1] == angles[2]);

  CHECK_THROWS_AS(n_equicontinuity_probe(*rot, rot->sample(2, 0), 3, 0.1, {0.1}, 10), ParameterError);
  CHECK_THROWS_AS(n_equicontinuity_probe(*rot, rot->sample(20, 0), 1, 0.1, {0.01, 0.1}, 10), ParameterError);
}

TEST_CASE("N-equicontinuity at scale implies small proximal cells") {
  for (const auto& sys : catalogue()) {
    const auto c = small_cloud(*sys);
    const OrbitTable t(*sys, c, 60);
    const auto rep = distality_report(t, {60, 1e-3, 8, false});
    for (int N = 1; N <= 3; ++N) {
      const auto v = n_equicontinuity_probe(t, N, 1e-3, {1e-3, 5e-4, 1e-4});
      if (v.passed) CHECK_MESSAGE(rep.max_cell_size <= static_cast<std::size_t>(N), sys->id());
    }
  }
}
