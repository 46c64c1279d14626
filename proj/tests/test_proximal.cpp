#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ndist/catalogue.hpp"
#include "ndist/combinators.hpp"
#include "ndist/errors.hpp"
#include "ndist/proximal.hpp"

using namespace ndist;

namespace {

std::size_t named(const PointCloud& c, const std::string& name) {
  auto i = c.index_of(name);
  REQUIRE(i.has_value());
  return *i;
}

bool subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// brute-force membership oracle straight from the iterate/distance primitives
std::vector<std::size_t> oracle_cell(const System& sys, const PointCloud& c, std::size_t x, int H, double eps) {
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < c.size(); ++y) {
    double m = 1e300;
    for (int n = -H; n <= H; ++n) m = std::min(m, sys.distance(sys.iterate(c[x], n), sys.iterate(c[y], n)));
    if (m < eps) out.push_back(y);
  }
  return out;
}

Point first_coord(const Point& z) { return Circle{z.get_if<Torus>()->x}; }

}  // namespace

TEST_CASE("min orbit distance examples") {
  const auto sk = skew_torus();
  for (int H : {0, 5, 50}) CHECK(min_orbit_distance(*sk, Torus{0, 0}, Torus{0, 0.3}, H) == doctest::Approx(0.3).epsilon(1e-12));
  const auto a3 = annulus3();
  CHECK(min_orbit_distance(*a3, OrbitIndex{0, 0, 0.0}, OrbitIndex{0, 0, 0.0}, 10) == 0.0);
  // the fifth listed gap, 2.3e-10, is reached at n = 5 (n = 4 gives 1.5e-5)
  CHECK(min_orbit_distance(*a3, OrbitIndex{0, 0, 0.0}, Annulus{0.0, 1.0}, 4) == doctest::Approx(std::ldexp(1.0, -16)));
  CHECK(min_orbit_distance(*a3, OrbitIndex{0, 0, 0.0}, Annulus{0.0, 1.0}, 5) <= 2.4e-10);
  // radial gaps along the forward orbit are (1/2)^(2^n)
  double prev = 1.0;
  for (int H = 0; H <= 5; ++H) {
    const double d = min_orbit_distance(*a3, OrbitIndex{0, 0, 0.0}, Annulus{0.0, 1.0}, H);
    CHECK(d == doctest::Approx(std::pow(0.5, std::ldexp(1.0, H))).epsilon(1e-9));
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("annulus3 cell at p and the 3-distal verdict") {
  const auto sys = annulus3();
  const auto cloud = as_annulus(*sys)->cloud(40, 40);
  const auto rep = distality_report(*sys, cloud, {200, 1e-3, 3, true});
  const auto p = named(cloud, "p");
  const auto& cell = rep.cells[p];
  CHECK(cell.contains(named(cloud, "inner0")));
  CHECK(cell.contains(named(cloud, "outer0")));
  CHECK(cell.size() == 3);
  CHECK(cell.stable_size() == 3);
  CHECK(rep.max_cell_size == 3);
  CHECK(rep.verdict.kind == VerdictKind::n_distal);
  CHECK(rep.verdict.n == 3);
  CHECK(rep.verdict.describe() == "3-distal, not 2-distal");
  CHECK(cell.members == oracle_cell(*sys, cloud, p, 200, 1e-3));
  for (std::size_t i = 0; i < cell.size(); ++i) CHECK(cell.min_dist_trace[i] < 1e-3);
}

TEST_CASE("verdict mapping") {
  CHECK(verdict_for(1, 3).kind == VerdictKind::distal);
  CHECK(verdict_for(2, 3).n == 2);
  CHECK(verdict_for(5, 3).kind == VerdictKind::not_n_distal_up_to);
  CHECK(verdict_for(5, 3).n == 3);
}

TEST_CASE("rotation and skew product are distal on sampled clouds") {
  const auto rot = rotation();
  const auto rc = rot->sample(64, 0);
  const auto rr = distality_report(*rot, rc, {200, 1e-3, 3, false});
  for (const auto& c : rr.cells) CHECK(c.members == std::vector<std::size_t>{c.base});
  CHECK(rr.verdict.kind == VerdictKind::distal);
  const auto sk = skew_torus();
  // on a grid the x-gap of a pair is constant and the y-gap is constant when the x-gap is 0
  const auto rep = distality_report(*sk, sk->sample(16, 0), {200, 1e-3, 3, false});
  CHECK(rep.max_cell_size == 1);
  CHECK(rep.verdict.kind == VerdictKind::distal);
}

TEST_CASE("shift cell at the zero sequence grows with the word radius") {
  const auto sh = shift2();
  std::vector<PointCloud> clouds;
  for (int W : {3, 4, 5, 6}) clouds.push_back(sh->sample(W, 0));
  const auto g = cell_growth(*sh, clouds, "zero", 200, 1e-3, 8);
  REQUIRE(g.sizes.size() == 4);
  CHECK(g.strictly_increasing);
  CHECK(g.not_n_distal_up_to);
  // every finite word is asymptotic to the zero fill, so the whole finite part qualifies
  CHECK(g.sizes[0] == 128);
}

TEST_CASE("graph symmetry and horizon monotonicity") {
  for (const auto& sys : {annulus3(), annulus2(), skew_torus(), shift2()}) {
    PointCloud c = random_cloud(*sys, 60, 17);
    if (auto an = as_annulus(*sys)) c = an->cloud(12, 12);
    const auto r1 = distality_report(*sys, c, {25, 1e-3, 3, false});
    const auto r2 = distality_report(*sys, c, {50, 1e-3, 3, false});
    for (std::size_t x = 0; x < c.size(); ++x) {
      for (std::size_t y : r1.cells[x].members) CHECK(r1.cells[y].contains(x));
      CHECK(subset(r1.cells[x].members, r2.cells[x].members));
      auto adj = r1.graph[x];
      adj.push_back(x);
      std::sort(adj.begin(), adj.end());
      CHECK(adj == r1.cells[x].members);
    }
  }
}

TEST_CASE("power containment") {
  const auto f = annulus3();
  const auto c = as_annulus(*f)->cloud(15, 20);
  for (int k : {2, 3, -2}) {
    const auto fk = power_system(f, k);
    const int H = 30;
    const auto rk = distality_report(*fk, c, {H, 1e-3, 3, false});
    const auto r1 = distality_report(*f, c, {H * std::abs(k), 1e-3, 3, false});
    for (std::size_t x = 0; x < c.size(); ++x) CHECK(subset(rk.cells[x].members, r1.cells[x].members));
  }
}

TEST_CASE("product containment and the 6-point cell") {
  const auto f = annulus2(), g = annulus3();
  const auto cf = as_annulus(*f)->cloud(2, 3), cg = as_annulus(*g)->cloud(2, 3);
  const auto pr = product_system(f, g);
  const auto pc = product_cloud(cf, cg);
  const int H = 100;
  const auto rp = distality_report(*pr, pc, {H, 1e-3, 8, false});
  const auto rf = distality_report(*f, cf, {H, 1e-3, 8, false});
  const auto rg = distality_report(*g, cg, {H, 1e-3, 8, false});
  for (std::size_t z = 0; z < pc.size(); ++z) {
    const std::size_t i = z / cg.size(), j = z % cg.size();
    REQUIRE(pc[z] == make_pair(cf[i], cg[j]));
    for (std::size_t w : rp.cells[z].members) {
      CHECK(rf.cells[i].contains(w / cg.size()));
      CHECK(rg.cells[j].contains(w % cg.size()));
    }
  }
  CHECK(rf.max_cell_size == 2);
  CHECK(rg.max_cell_size == 3);
  CHECK(rp.max_cell_size == 6);
  const std::size_t pp = named(cf, "p") * cg.size() + named(cg, "p");
  CHECK(rp.cells[pp].size() == 6);
}

TEST_CASE("product with the identity crosses cells with singletons") {
  const auto f = annulus3();
  const auto cf = as_annulus(*f)->cloud(3, 4);
  const auto id = identity();
  const auto ci = id->sample(5, 0);
  const auto pr = product_system(f, id);
  const auto pc = product_cloud(cf, ci);
  const auto rp = distality_report(*pr, pc, {60, 1e-3, 8, false});
  const auto rf = distality_report(*f, cf, {60, 1e-3, 8, false});
  for (std::size_t z = 0; z < pc.size(); ++z) {
    std::vector<std::size_t> expect;
    const std::size_t i = z / ci.size(), j = z % ci.size();
    for (std::size_t a : rf.cells[i].members) expect.push_back(a * ci.size() + j);
    CHECK(rp.cells[z].members == expect);
  }
}

TEST_CASE("conjugacy by an angle shift preserves cell cardinalities") {
  const auto f = annulus3();
  const auto c = as_annulus(*f)->cloud(12, 15);
  const auto h = angle_shift(0.137), h_inv = angle_shift(-0.137);
  const auto g = conjugate_system(f, h, h_inv, "shift", &c);
  const auto hc = map_cloud(c, h);
  const auto rf = distality_report(*f, c, {100, 1e-3, 3, false});
  const auto rg = distality_report(*g, hc, {100, 1e-3, 3, false});
  for (std::size_t x = 0; x < c.size(); ++x) CHECK(rf.cells[x].members == rg.cells[x].members);
  // torus rotation by beta keeps the skew product distal
  const auto sk = skew_torus();
  const auto sc = random_cloud(*sk, 60, 4);
  const auto sg = conjugate_system(sk, angle_shift(0.25), angle_shift(-0.25), "beta", &sc);
  CHECK(distality_report(*sg, map_cloud(sc, angle_shift(0.25)), {100, 1e-3, 3, false}).verdict.kind == VerdictKind::distal);
}

TEST_CASE("fiber cells") {
  const auto sk = skew_torus();
  const auto rot = rotation();
  const PointMap pi = first_coord;
  const auto c = random_cloud(*sk, 120, 21);
  for (const auto& cell : fiber_cells(*sk, *rot, pi, c, 200, 1e-3)) CHECK(cell.size() == 1);

  // skew fibers sampled exactly: equal x, spread y
  PointCloud fib;
  for (int i = 0; i < 8; ++i) fib.add(Torus{0.2, i / 8.0});
  fib.add(Torus{0.7, 0.1});
  CHECK(fiber_mesh(*rot, pi, fib) == doctest::Approx(0.5));
  for (const auto& cell : fiber_cells(*sk, *rot, pi, fib, 200, 1e-3)) CHECK(cell.size() == 1);

  const PointMap bad = [](const Point& z) { return Point{Circle{wrap_unit(z.get_if<Torus>()->y)}}; };
  CHECK_THROWS_AS(fiber_cells(*sk, *rot, bad, c, 10, 1e-3), HomomorphismError);

  const auto f = annulus2(), g = annulus3();
  const auto pr = product_system(f, g);
  const auto pc = product_cloud(as_annulus(*f)->cloud(2, 3), as_annulus(*g)->cloud(2, 3));
  const PointMap second = [](const Point& z) { return project(z, 1); };
  std::size_t biggest = 0;
  for (const auto& cell : fiber_cells(*pr, *g, second, pc, 100, 1e-3)) biggest = std::max(biggest, cell.size());
  CHECK(biggest == 2);
  CHECK(distality_report(*pr, pc, {100, 1e-3, 8, false}).max_cell_size <= 6);

  // the one-point factor: every point lies in one fiber
  const auto one = one_point();
  const PointMap to_one = [](const Point&) { return Point{Circle{0.0}}; };
  const auto a3 = annulus3();
  const auto ac = as_annulus(*a3)->cloud(5, 6);
  const auto full = distality_report(*a3, ac, {80, 1e-3, 3, false});
  const auto cells = fiber_cells(*a3, *one, to_one, ac, 80, 1e-3, 1.0);
  for (std::size_t x = 0; x < ac.size(); ++x) CHECK(cells[x].members == full.cells[x].members);
}

TEST_CASE("proximal quotient") {
  const auto a2 = annulus2();
  const auto c2 = as_annulus(*a2)->cloud(30, 30);
  const auto r2 = distality_report(*a2, c2, {200, 1e-3, 3, false});
  const auto q2 = proximal_quotient(r2, *a2, c2);
  CHECK(q2.is_equivalence);
  CHECK(!q2.violating_triple);
  std::size_t largest = 0;
  for (const auto& cls : q2.classes) largest = std::max(largest, cls.size());
  CHECK(largest == 2);
  REQUIRE(q2.factor.has_value());
  CHECK(q2.factor->max_cell_size == 1);
  CHECK(q2.image_violations == 0);
  CHECK(q2.image_checks > 0);
  // p and inner0 share a class
  CHECK(q2.class_of[named(c2, "p")] == q2.class_of[named(c2, "inner0")]);

  const auto a3 = annulus3();
  const auto c3 = as_annulus(*a3)->cloud(30, 30);
  const auto r3 = distality_report(*a3, c3, {200, 1e-3, 3, false});
  const auto q3 = proximal_quotient(r3, *a3, c3);
  CHECK(!q3.is_equivalence);
  REQUIRE(q3.violating_triple.has_value());
  const auto [a, b, cc] = *q3.violating_triple;
  CHECK(r3.cells[a].contains(b));
  CHECK(r3.cells[b].contains(cc));
  CHECK(!r3.cells[a].contains(cc));
  // the p-centred triple also violates transitivity
  const auto p = named(c3, "p"), in = named(c3, "inner0"), out = named(c3, "outer0");
  CHECK(r3.cells[in].contains(p));
  CHECK(r3.cells[p].contains(out));
  CHECK(!r3.cells[in].contains(out));

  const auto rot = rotation();
  const auto rc = rot->sample(32, 0);
  const auto qr = proximal_quotient(distality_report(*rot, rc, {100, 1e-3, 3, false}), *rot, rc);
  CHECK(qr.is_equivalence);
  CHECK(qr.classes.size() == rc.size());
  REQUIRE(qr.factor.has_value());
  CHECK(qr.factor->verdict.kind == VerdictKind::distal);
}
