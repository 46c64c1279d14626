#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ndist/catalogue.hpp"
#include "ndist/combinators.hpp"
#include "ndist/errors.hpp"

using namespace ndist;

namespace {

const Torus& T(const Point& p) { return *p.get_if<Torus>(); }
const Annulus& A(const Point& p) { return *p.get_if<Annulus>(); }

double circ(double a, double b) {
  double d = std::fmod(std::fabs(a - b), 1.0);
  return std::min(d, 1.0 - d);
}

std::vector<SystemPtr> every_system() {
  auto v = catalogue();
  v.push_back(one_point());
  v.push_back(product_system(annulus2(), annulus3()));
  v.push_back(power_system(skew_torus(), 3));
  return v;
}

}  // namespace

TEST_CASE("skew product closed form matches the explicit formula") {
  const auto sys = skew_torus();
  const double a = kGolden;
  const Point x = Torus{0.3, 0.7};
  for (std::int64_t n : {1, 2, 5, 17, 100}) {
    // independent evaluation: x + n a, y + n x + a n(n-1)/2 in long double
    const long double ex = 0.3L + n * static_cast<long double>(a);
    const long double ey = 0.7L + n * 0.3L + static_cast<long double>(a) * (n * (n - 1) / 2);
    const auto y = T(sys->iterate(x, n));
    CHECK(circ(y.x, static_cast<double>(ex - std::floor(ex))) < 1e-12);
    CHECK(circ(y.y, static_cast<double>(ey - std::floor(ey))) < 1e-9);
  }
  CHECK(sys->iterate(x, 0) == x);
}

TEST_CASE("annulus radial map hand iteration") {
  const auto sys = annulus3();
  const auto y = A(sys->iterate(Annulus{0.0, 1.5}, 2));
  CHECK(y.r == doctest::Approx(1.0625).epsilon(1e-15));
  CHECK(circ(y.theta, std::fmod(2 * kGolden, 1.0)) < 1e-15);
}

TEST_CASE("distance examples") {
  CHECK(skew_torus()->distance(Torus{0, 0}, Torus{0.9, 0}) == doctest::Approx(0.1).epsilon(1e-12));
  const auto sh = shift2();
  // differ at index -2 only
  const Point s = Symbol::finite({1, 0, 0, 0, 0}, -2);
  const Point zero = Symbol::finite({}, 0);
  CHECK(sh->distance(s, zero) == 0.25);
  CHECK(sh->distance(Symbol::finite({1}, 2), zero) == 0.25);
  for (const auto& sys : every_system()) {
    const auto c = random_cloud(*sys, 5, 3);
    for (const auto& p : c.points) CHECK(sys->distance(p, p) == 0.0);
  }
  CHECK_THROWS_AS(skew_torus()->distance(Torus{0, 0}, Annulus{0, 1}), InvalidPoint);
}

TEST_CASE("catalogue contents and analytic orbit radii") {
  std::vector<std::string> ids;
  for (const auto& s : catalogue()) ids.push_back(s->id());
  for (const char* prefix : {"rotation", "skew_torus", "annulus3", "annulusN", "annulus2", "shift2", "identity"}) {
    bool found = false;
    for (const auto& id : ids) found = found || id.rfind(prefix, 0) == 0;
    CHECK_MESSAGE(found, prefix);
  }
  const auto a3sys = annulus3();
  const auto* a3 = as_annulus(*a3sys);
  CHECK(a3->orbit_radius(0, 1) == 1.25);
  CHECK(a3->orbit_radius(0, -1) == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-15));
  CHECK(a3->orbit_radius(0, 0) == 1.5);
  CHECK_THROWS_AS(annulus_n(3), ParameterError);
  const auto ansys = annulus_n(5);
  const auto* an = as_annulus(*ansys);
  CHECK(an->orbit_count() == 3);
  // p_m starts at radius 1 + 1/m
  for (int o = 0; o < 3; ++o) CHECK(an->orbit_radius(o, 0) == doctest::Approx(1.0 + 1.0 / (o + 2)));
}

TEST_CASE("rotation is an isometry and the shift fixes 0^inf") {
  const auto rot = rotation();
  const auto c = random_cloud(*rot, 20, 7);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      for (std::int64_t n : {1, -3, 1000, 123456})
        CHECK(std::fabs(rot->distance(rot->iterate(c[i], n), rot->iterate(c[j], n)) - rot->distance(c[i], c[j])) < 1e-9);
  const Point zero = Symbol::finite({}, 0);
  for (std::int64_t n : {-5, 1, 77}) CHECK(shift2()->iterate(zero, n) == zero);
}

TEST_CASE("product, power and conjugate constructors") {
  const auto pr = product_system(rotation(), rotation());
  CHECK(pr->distance(make_pair(Circle{0}, Circle{0.4}), make_pair(Circle{0.1}, Circle{0.4})) == doctest::Approx(0.1));
  // max metric, not the first-argument reading
  CHECK(pr->distance(make_pair(Circle{0}, Circle{0}), make_pair(Circle{0.1}, Circle{0.3})) == doctest::Approx(0.3));

  const auto p2 = power_system(rotation(), 2);
  const auto r2 = rotation(std::fmod(2 * kGolden, 1.0));
  for (double x : {0.0, 0.25, 0.9}) CHECK(circ(p2->step(Circle{x}).get_if<Circle>()->x, r2->step(Circle{x}).get_if<Circle>()->x) < 1e-15);
  CHECK_THROWS_AS(power_system(rotation(), 0), ParameterError);
  const auto back = power_system(power_system(annulus3(), -1), -1);
  const auto a3 = annulus3();
  for (const auto& x : random_cloud(*a3, 30, 1).points) CHECK(back->step(x) == a3->step(x));

  const PointMap id = [](const Point& x) { return x; };
  const auto same = conjugate_system(skew_torus(), id, id);
  for (const auto& x : random_cloud(*skew_torus(), 30, 2).points) CHECK(same->step(x) == skew_torus()->step(x));
  const PointMap bad = [](const Point& x) { return Point{Torus{wrap_unit(x.get_if<Torus>()->x + 0.1), x.get_if<Torus>()->y}}; };
  CHECK_THROWS_AS(conjugate_system(skew_torus(), bad, id), ConjugacyError);
}

TEST_CASE("system ids parse back") {
  CHECK(make_system("annulusN{N=5,k=0.618}")->id() == "annulusN{N=5,k=0.618}");
  CHECK(make_system("product(annulus2,annulus3)")->id().rfind("product(annulus2", 0) == 0);
  const auto p = make_system("power(rotation{alpha=1/3},2)");
  CHECK(circ(p->step(Circle{0}).get_if<Circle>()->x, 2.0 / 3.0) < 1e-15);
  CHECK_THROWS_AS(make_system("nosuch"), ParameterError);
  CHECK_THROWS_AS(make_system("rotation{beta=1}"), ParameterError);
  CHECK_THROWS_AS(make_system("annulusN{N=3}"), ParameterError);
}

TEST_CASE("inverse consistency on 1000 seeded points per system") {
  for (const auto& sys : every_system()) {
    const auto c = random_cloud(*sys, 1000, 11);
    const bool exact = sys->id() == "shift2";
    for (const auto& x : c.points) {
      REQUIRE(sys->valid(x));
      const Point a = sys->step_inv(sys->step(x));
      const Point b = sys->step(sys->step_inv(x));
      if (exact || x.is<OrbitIndex>()) {
        CHECK(a == x);
        CHECK(b == x);
      } else {
        CHECK(sys->distance(a, x) <= 1e-12);
        CHECK(sys->distance(b, x) <= 1e-12);
      }
    }
  }
}

TEST_CASE("metric axioms on sampled triples") {
  for (const auto& sys : every_system()) {
    auto c = random_cloud(*sys, 18, 5);
    if (auto an = as_annulus(*sys)) {
      // orbit radii beyond |n| = 5 are within rounding of the boundary circles
      c = an->cloud(3, 5);
    }
    const std::size_t m = c.size();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const double dij = sys->distance(c[i], c[j]);
        CHECK(dij == sys->distance(c[j], c[i]));
        CHECK((dij == 0.0) == (c[i] == c[j]));
        for (std::size_t k = 0; k < m; k += 3) CHECK(dij <= sys->distance(c[i], c[k]) + sys->distance(c[k], c[j]) + 1e-12);
      }
  }
}

TEST_CASE("closed form and loop iteration agree on the skew product") {
  const auto sys = skew_torus();
  const auto c = random_cloud(*sys, 5, 9);
  for (const auto& x : c.points)
    for (std::int64_t n : {1, 10, 999, -1000, 10000, -10000}) CHECK(sys->distance(sys->iterate(x, n), iterate_by_loop(*sys, x, n)) <= 1e-9);
}

TEST_CASE("orbit-index annulus iteration agrees with its polar form") {
  const auto a = annulus3();
  const auto* an = as_annulus(*a);
  for (std::int64_t n = -6; n <= 6; ++n) {
    const auto p = an->polar(a->iterate(OrbitIndex{0, 0, 0.0}, n));
    CHECK(circ(p.theta, frac_mul(kGolden, n)) < 1e-15);
    CHECK(p.r == doctest::Approx(1.0 + std::pow(0.5, std::ldexp(1.0, static_cast<int>(n)))).epsilon(1e-14));
  }
}

TEST_CASE("shift iteration is exact both ways") {
  const auto sh = shift2();
  const auto c = random_cloud(*sh, 200, 4);
  for (const auto& s : c.points)
    for (std::int64_t n : {1, 7, -13, 1000000}) CHECK(sh->iterate(sh->iterate(s, n), -n) == s);
  // canonical cores end on symbols different from the fill
  for (const auto& p : c.points) {
    const auto& s = *p.get_if<Symbol>();
    if (!s.core.empty()) {
      CHECK(s.core.front() != s.left_fill.back());
      CHECK(s.core.back() != s.right_fill.front());
    }
  }
  CHECK(canonical(Symbol::finite({0, 0, 1, 0}, -1)) == Symbol::finite({1}, 1));
  CHECK(Symbol::periodic({0, 1, 0, 1}) == Symbol::periodic({0, 1}));
  CHECK(!(Symbol::periodic({0, 1}) == Symbol::periodic({1, 0})));
}

TEST_CASE("torus and annulus coordinates are stored reduced") {
  for (const auto& sys : {skew_torus(), annulus3()}) {
    const auto c = random_cloud(*sys, 100, 8);
    for (const auto& x : c.points)
      for (std::int64_t n : {1, -1, 50}) {
        const Point y = sys->iterate(x, n);
        if (auto t = y.get_if<Torus>()) {
          CHECK((t->x >= 0.0 && t->x < 1.0));
          CHECK((t->y >= 0.0 && t->y < 1.0));
        }
        if (auto a = y.get_if<Annulus>()) {
          CHECK((a->theta >= 0.0 && a->theta < 1.0));
          CHECK((a->r >= 1.0 && a->r <= 2.0));
        }
      }
  }
}
