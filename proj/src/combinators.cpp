#include "ndist/combinators.hpp"

#include <algorithm>

#include "ndist/catalogue.hpp"
#include "ndist/errors.hpp"

namespace ndist {

namespace {

const Pair& as_pair(const System& s, const Point& p) {
  auto q = p.get_if<Pair>();
  if (!q || q->parts.size() != 2) throw InvalidPoint(to_string(p) + " is not a point of " + s.id());
  return *q;
}

}  // namespace

Point project(const Point& x, std::size_t component) {
  auto q = x.get_if<Pair>();
  if (!q || component >= q->parts.size()) throw InvalidPoint("cannot project " + to_string(x));
  return q->parts[component];
}

ProductSystem::ProductSystem(SystemPtr f, SystemPtr g) : f_(std::move(f)), g_(std::move(g)) {
  if (!f_ || !g_) throw ParameterError("product of a null system");
}

std::string ProductSystem::id() const { return "product(" + f_->id() + "," + g_->id() + ")"; }

Point ProductSystem::step(const Point& x) const {
  const auto& p = as_pair(*this, x);
  return make_pair(f_->step(p.parts[0]), g_->step(p.parts[1]));
}

Point ProductSystem::step_inv(const Point& x) const {
  const auto& p = as_pair(*this, x);
  return make_pair(f_->step_inv(p.parts[0]), g_->step_inv(p.parts[1]));
}

Point ProductSystem::iterate(const Point& x, std::int64_t n) const {
  const auto& p = as_pair(*this, x);
  return make_pair(f_->iterate(p.parts[0], n), g_->iterate(p.parts[1], n));
}

double ProductSystem::distance(const Point& a, const Point& b) const {
  const auto& p = as_pair(*this, a);
  const auto& q = as_pair(*this, b);
  return std::max(f_->distance(p.parts[0], q.parts[0]), g_->distance(p.parts[1], q.parts[1]));
}

Point ProductSystem::resolve(const Point& x) const {
  const auto& p = as_pair(*this, x);
  return make_pair(f_->resolve(p.parts[0]), g_->resolve(p.parts[1]));
}

bool ProductSystem::valid(const Point& x) const {
  auto q = x.get_if<Pair>();
  return q && q->parts.size() == 2 && f_->valid(q->parts[0]) && g_->valid(q->parts[1]);
}

PointCloud product_cloud(const PointCloud& a, const PointCloud& b) {
  PointCloud c;
  c.provenance = a.provenance == b.provenance ? a.provenance : Provenance::grid;
  c.seed = a.seed;
  c.points.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c.points.push_back(make_pair(a[i], b[j]));
  for (const auto& [na, i] : a.named)
    for (const auto& [nb, j] : b.named) c.named.emplace_back(na + "|" + nb, i * b.size() + j);
  return c;
}

PointCloud ProductSystem::sample(int resolution, std::uint64_t seed) const {
  PointCloud c = product_cloud(f_->sample(resolution, seed), g_->sample(resolution, seed));
  c.system_id = id();
  c.seed = seed;
  return c;
}

Point ProductSystem::random_point(std::mt19937_64& rng) const {
  Point a = f_->random_point(rng);
  return make_pair(std::move(a), g_->random_point(rng));
}

SystemFacts ProductSystem::facts() const {
  auto a = f_->facts(), b = g_->facts();
  return {"product: " + a.distality + " x " + b.distality, a.omega_in_ap && b.omega_in_ap, "-"};
}

PowerSystem::PowerSystem(SystemPtr f, std::int64_t k) : f_(std::move(f)), k_(k) {
  if (k == 0) throw ParameterError("power_system needs a nonzero exponent");
  if (!f_) throw ParameterError("power of a null system");
}

std::string PowerSystem::id() const { return "power(" + f_->id() + "," + std::to_string(k_) + ")"; }

PointCloud PowerSystem::sample(int resolution, std::uint64_t seed) const {
  PointCloud c = f_->sample(resolution, seed);
  c.system_id = id();
  return c;
}

ConjugateSystem::ConjugateSystem(SystemPtr f, PointMap h, PointMap h_inv, std::string label)
    : f_(std::move(f)), h_(std::move(h)), h_inv_(std::move(h_inv)), label_(std::move(label)) {
  if (!f_ || !h_ || !h_inv_) throw ParameterError("conjugate_system needs a system and both maps");
}

std::string ConjugateSystem::id() const { return "conjugate(" + f_->id() + "," + label_ + ")"; }

PointCloud ConjugateSystem::sample(int resolution, std::uint64_t seed) const {
  PointCloud c = map_cloud(f_->sample(resolution, seed), h_);
  c.system_id = id();
  return c;
}

void ConjugateSystem::verify_on(const PointCloud& cloud) const {
  for (const auto& x : cloud.points) {
    // cloud points live in f's space
    const Point y = h_(x);
    const double back = f_->distance(h_inv_(y), x);
    const double fwd = f_->distance(h_(h_inv_(y)), y);
    if (!(back <= 1e-9) || !(fwd <= 1e-9))
      throw ConjugacyError("h and h_inv are not mutually inverse at " + to_string(x));
  }
}

SystemPtr product_system(SystemPtr f, SystemPtr g) { return std::make_shared<ProductSystem>(std::move(f), std::move(g)); }

SystemPtr power_system(SystemPtr f, std::int64_t k) { return std::make_shared<PowerSystem>(std::move(f), k); }

SystemPtr conjugate_system(SystemPtr f, PointMap h, PointMap h_inv, std::string label, const PointCloud* check_cloud) {
  auto sys = std::make_shared<ConjugateSystem>(f, std::move(h), std::move(h_inv), std::move(label));
  sys->verify_on(f->sample(std::min(f->default_resolution(), 8), 0));
  if (check_cloud) sys->verify_on(*check_cloud);
  return sys;
}

PointMap angle_shift(double beta) {
  return [beta](const Point& x) -> Point {
    if (auto c = x.get_if<Circle>()) return Circle{wrap_unit(c->x + beta)};
    if (auto a = x.get_if<Annulus>()) return Annulus{wrap_unit(a->theta + beta), a->r};
    if (auto o = x.get_if<OrbitIndex>()) return OrbitIndex{o->orbit, o->n, wrap_unit(o->phase + beta)};
    if (auto t = x.get_if<Torus>()) return Torus{wrap_unit(t->x + beta), wrap_unit(t->y + beta)};
    throw InvalidPoint("angle shift does not act on " + to_string(x));
  };
}

}  // namespace ndist
