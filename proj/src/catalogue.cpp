#include "ndist/catalogue.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "ndist/combinators.hpp"
#include "ndist/errors.hpp"

namespace ndist {

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// argument order fixed so the result is bitwise symmetric
double circle_gap(double a, double b) {
  if (a < b) std::swap(a, b);
  return std::fabs(wrap_signed(a - b));
}

bool in_unit(double x) { return x >= 0.0 && x < 1.0 && std::isfinite(x); }

const Circle& as_circle(const System& s, const Point& p) {
  if (auto c = p.get_if<Circle>()) return *c;
  throw InvalidPoint(to_string(p) + " is not a point of " + s.id());
}

const Torus& as_torus(const System& s, const Point& p) {
  if (auto t = p.get_if<Torus>()) return *t;
  throw InvalidPoint(to_string(p) + " is not a point of " + s.id());
}

const Symbol& as_symbol(const System& s, const Point& p) {
  if (auto w = p.get_if<Symbol>()) return *w;
  throw InvalidPoint(to_string(p) + " is not a point of " + s.id());
}

}  // namespace

// ---------------------------------------------------------------- rotation

RotationSystem::RotationSystem(double alpha, bool identity) : alpha_(identity ? 0.0 : wrap_unit(alpha)), identity_(identity) {}

std::string RotationSystem::id() const { return identity_ ? "identity" : "rotation{alpha=" + format_real(alpha_) + "}"; }

Point RotationSystem::step(const Point& x) const { return Circle{wrap_unit(as_circle(*this, x).x + alpha_)}; }

Point RotationSystem::step_inv(const Point& x) const { return Circle{wrap_unit(as_circle(*this, x).x - alpha_)}; }

Point RotationSystem::iterate(const Point& x, std::int64_t n) const {
  const double c = as_circle(*this, x).x;
  if (n == 0 || identity_) return x;
  if (n == 1) return step(x);
  if (n == -1) return step_inv(x);
  return Circle{wrap_unit(c + frac_mul(alpha_, n))};
}

double RotationSystem::distance(const Point& a, const Point& b) const {
  return circle_gap(as_circle(*this, a).x, as_circle(*this, b).x);
}

bool RotationSystem::valid(const Point& x) const {
  auto c = x.get_if<Circle>();
  return c && in_unit(c->x);
}

PointCloud RotationSystem::sample(int resolution, std::uint64_t seed) const {
  if (resolution < 1) throw ParameterError("resolution must be positive");
  PointCloud c;
  c.system_id = id();
  c.seed = seed;
  for (int j = 0; j < resolution; ++j) c.points.push_back(Circle{static_cast<double>(j) / resolution});
  c.named.emplace_back("zero", 0);
  return c;
}

Point RotationSystem::random_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return Circle{wrap_unit(u(rng))};
}

SystemFacts RotationSystem::facts() const {
  if (identity_) return {"distal (1-distal), every point fixed", true, "every point"};
  return {"distal, minimal, equicontinuous", true, "1"};
}

// ---------------------------------------------------------------- skew torus

SkewTorusSystem::SkewTorusSystem(double alpha) : alpha_(wrap_unit(alpha)) {}

std::string SkewTorusSystem::id() const { return "skew_torus{alpha=" + format_real(alpha_) + "}"; }

Point SkewTorusSystem::step(const Point& x) const {
  const auto& t = as_torus(*this, x);
  return Torus{wrap_unit(t.x + alpha_), wrap_unit(t.y + t.x)};
}

Point SkewTorusSystem::step_inv(const Point& x) const {
  const auto& t = as_torus(*this, x);
  const double px = wrap_unit(t.x - alpha_);
  return Torus{px, wrap_unit(t.y - px)};
}

Point SkewTorusSystem::iterate(const Point& x, std::int64_t n) const {
  const auto& t = as_torus(*this, x);
  if (n == 0) return x;
  // F^n(x,y) = (x + n a, y + n x + a n(n-1)/2), valid for every integer n
  const std::int64_t tri = n * (n - 1) / 2;
  return Torus{wrap_unit(t.x + frac_mul(alpha_, n)), wrap_unit(t.y + frac_mul(t.x, n) + frac_mul(alpha_, tri))};
}

double SkewTorusSystem::distance(const Point& a, const Point& b) const {
  const auto& p = as_torus(*this, a);
  const auto& q = as_torus(*this, b);
  return std::hypot(circle_gap(p.x, q.x), circle_gap(p.y, q.y));
}

bool SkewTorusSystem::valid(const Point& x) const {
  auto t = x.get_if<Torus>();
  return t && in_unit(t->x) && in_unit(t->y);
}

PointCloud SkewTorusSystem::sample(int resolution, std::uint64_t seed) const {
  if (resolution < 1) throw ParameterError("resolution must be positive");
  PointCloud c;
  c.system_id = id();
  c.seed = seed;
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j)
      c.points.push_back(Torus{static_cast<double>(i) / resolution, static_cast<double>(j) / resolution});
  c.named.emplace_back("origin", 0);
  return c;
}

Point SkewTorusSystem::random_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = wrap_unit(u(rng));
  return Torus{x, wrap_unit(u(rng))};
}

SystemFacts SkewTorusSystem::facts() const { return {"distal, minimal, not N-equicontinuous", true, "1"}; }

// ---------------------------------------------------------------- annulus

AnnulusSystem::AnnulusSystem(Kind kind, double k, int N) : kind_(kind), k_(wrap_unit(k)), N_(N) {
  switch (kind) {
    case Kind::three: gaps_ = {0.5}; break;
    case Kind::many:
      for (int m = 2; m <= N - 1; ++m) gaps_.push_back(1.0 / m);
      break;
    case Kind::two: gaps_ = {0.5}; break;
  }
}

std::shared_ptr<AnnulusSystem> AnnulusSystem::make(Kind kind, double k, int N) {
  if (kind == Kind::many && N < 4) throw ParameterError("annulusN needs N >= 4, got " + std::to_string(N));
  if (!std::isfinite(k)) throw ParameterError("annulus rotation number must be finite");
  return std::shared_ptr<AnnulusSystem>(new AnnulusSystem(kind, k, N));
}

std::string AnnulusSystem::id() const {
  switch (kind_) {
    case Kind::three: return "annulus3{k=" + format_real(k_) + "}";
    case Kind::many: return "annulusN{N=" + std::to_string(N_) + ",k=" + format_real(k_) + "}";
    case Kind::two: return "annulus2{k=" + format_real(k_) + "}";
  }
  return {};
}

double AnnulusSystem::orbit_radius(int orbit, std::int64_t n) const {
  if (kind_ == Kind::two) {
    const std::int64_t m = n < 0 ? -n : n;
    if (m > 1100) return 1.0;
    return 1.0 + std::ldexp(0.5, -static_cast<int>(m));
  }
  const double g = gaps_[static_cast<std::size_t>(orbit)];
  if (n > 2000) return 1.0;
  if (n < -2000) return 2.0;
  return 1.0 + std::pow(g, std::ldexp(1.0, static_cast<int>(n)));
}

// radial map r -> (r-1)^2 + 1 iterated n times
double AnnulusSystem::radial(double r, std::int64_t n) const {
  if (n == 0 || r == 1.0 || r == 2.0) return r;
  if (n > 0 && n <= 64) {
    for (std::int64_t i = 0; i < n; ++i) r = (r - 1.0) * (r - 1.0) + 1.0;
    return r;
  }
  if (n < 0 && n >= -64) {
    for (std::int64_t i = 0; i < -n; ++i) r = 1.0 + std::sqrt(r - 1.0);
    return r;
  }
  if (n > 0) return 1.0 + std::pow(r - 1.0, n > 2000 ? HUGE_VAL : std::ldexp(1.0, static_cast<int>(n)));
  return n < -2000 ? 2.0 : 1.0 + std::pow(r - 1.0, std::ldexp(1.0, static_cast<int>(n)));
}

Annulus AnnulusSystem::polar(const Point& x) const {
  if (auto a = x.get_if<Annulus>()) return *a;
  if (auto o = x.get_if<OrbitIndex>()) return Annulus{wrap_unit(o->phase + frac_mul(k_, o->n)), orbit_radius(o->orbit, o->n)};
  throw InvalidPoint(to_string(x) + " is not a point of " + id());
}

Point AnnulusSystem::iterate(const Point& x, std::int64_t n) const {
  if (n == 0) return x;
  if (auto o = x.get_if<OrbitIndex>()) return OrbitIndex{o->orbit, o->n + n, o->phase};
  if (auto a = x.get_if<Annulus>()) {
    const double th = n == 1 ? wrap_unit(a->theta + k_) : n == -1 ? wrap_unit(a->theta - k_) : wrap_unit(a->theta + frac_mul(k_, n));
    if (kind_ == Kind::two) return Annulus{th, a->r};
    return Annulus{th, radial(a->r, n)};
  }
  throw InvalidPoint(to_string(x) + " is not a point of " + id());
}

Point AnnulusSystem::step(const Point& x) const { return iterate(x, 1); }
Point AnnulusSystem::step_inv(const Point& x) const { return iterate(x, -1); }

double AnnulusSystem::distance(const Point& a, const Point& b) const {
  const Annulus p = polar(a), q = polar(b);
  const double s = std::sin(M_PI * circle_gap(p.theta, q.theta));
  const double dr = p.r - q.r;
  return std::sqrt(dr * dr + 4.0 * p.r * q.r * s * s);
}

bool AnnulusSystem::valid(const Point& x) const {
  if (auto a = x.get_if<Annulus>()) {
    if (!in_unit(a->theta)) return false;
    if (kind_ == Kind::two) return a->r == 1.0;
    return a->r >= 1.0 && a->r <= 2.0;
  }
  if (auto o = x.get_if<OrbitIndex>()) return o->orbit >= 0 && o->orbit < orbit_count() && in_unit(o->phase);
  return false;
}

PointCloud AnnulusSystem::cloud(int circle_radius, int orbit_radius, bool with_orbits) const {
  if (circle_radius < 0 || orbit_radius < 0) throw ParameterError("cloud radii must be nonnegative");
  PointCloud c;
  c.system_id = id();
  c.provenance = Provenance::orbit;
  std::vector<double> radii = {1.0};
  if (has_outer_circle()) radii.push_back(2.0);
  for (double r : radii) {
    const std::string tag = r == 1.0 ? "inner" : "outer";
    for (int m = -circle_radius; m <= circle_radius; ++m) {
      Point q = Annulus{frac_mul(k_, m), r};
      // rational k revisits angles; keep one copy
      if (auto seen = c.find(q)) {
        if (m == 0) c.named.emplace_back(tag + "0", *seen);
        continue;
      }
      c.add(std::move(q), m == 0 ? tag + "0" : std::string{});
    }
  }
  if (with_orbits) {
    for (int o = 0; o < orbit_count(); ++o) {
      for (int n = -orbit_radius; n <= orbit_radius; ++n) {
        std::string name;
        if (n == 0) {
          name = kind_ == Kind::many ? "p" + std::to_string(o + 2) : "p";
        }
        c.add(OrbitIndex{o, n, 0.0}, name);
        if (n == 0 && kind_ == Kind::many && o == 0) c.named.emplace_back("p", c.size() - 1);
      }
    }
  }
  return c;
}

PointCloud AnnulusSystem::sample(int resolution, std::uint64_t seed) const {
  PointCloud c = cloud(resolution, std::min(resolution, 40), true);
  c.seed = seed;
  return c;
}

Point AnnulusSystem::random_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 2);
  const int which = kind(rng);
  if (which == 2) {
    std::uniform_int_distribution<int> orb(0, orbit_count() - 1);
    std::uniform_int_distribution<int> idx(-60, 60);
    const int o = orb(rng);
    return OrbitIndex{o, idx(rng), 0.0};
  }
  const double th = wrap_unit(u(rng));
  return Annulus{th, (which == 1 && has_outer_circle()) ? 2.0 : 1.0};
}

SystemFacts AnnulusSystem::facts() const {
  switch (kind_) {
    case Kind::three: return {"3-distal, not 2-distal", true, "2"};
    case Kind::many:
      return {std::to_string(N_) + "-distal, not " + std::to_string(N_ - 1) + "-distal", true, "2"};
    case Kind::two: return {"2-distal, not distal", true, "1"};
  }
  return {};
}

// ---------------------------------------------------------------- shift

Point ShiftSystem::iterate(const Point& x, std::int64_t n) const {
  Symbol s = as_symbol(*this, x);
  if (n == 0) return x;
  s.offset -= n;
  return canonical(std::move(s));
}

Point ShiftSystem::step(const Point& x) const { return iterate(x, 1); }
Point ShiftSystem::step_inv(const Point& x) const { return iterate(x, -1); }

double ShiftSystem::distance(const Point& a, const Point& b) const {
  const Symbol& s = as_symbol(*this, a);
  const Symbol& t = as_symbol(*this, b);
  if (s == t) return 0.0;
  auto absl = [](std::int64_t v) { return v < 0 ? -v : v; };
  const std::int64_t edge = std::max({absl(s.offset), absl(s.end()), absl(t.offset), absl(t.end())});
  const auto lp = std::lcm(static_cast<std::int64_t>(s.left_fill.size()), static_cast<std::int64_t>(t.left_fill.size()));
  const auto lq = std::lcm(static_cast<std::int64_t>(s.right_fill.size()), static_cast<std::int64_t>(t.right_fill.size()));
  const std::int64_t bound = edge + lp + lq + 1;
  for (std::int64_t m = 0; m <= bound; ++m) {
    if (s.at(m) != t.at(m) || s.at(-m) != t.at(-m)) return m >= 1075 ? 0.0 : std::ldexp(1.0, -static_cast<int>(m));
  }
  // canonical representations that differ always differ within the bound
  throw InvalidPoint("non-canonical symbol representation");
}

bool ShiftSystem::valid(const Point& x) const {
  auto s = x.get_if<Symbol>();
  if (!s) return false;
  auto binary = [](const Symbols& w) {
    for (auto c : w)
      if (c > 1) return false;
    return true;
  };
  if (!binary(s->core) || !binary(s->left_fill) || !binary(s->right_fill)) return false;
  if (s->left_fill.empty() || s->right_fill.empty()) return false;
  return canonical(*s) == *s;
}

PointCloud ShiftSystem::sample(int resolution, std::uint64_t seed) const {
  if (resolution < 0 || resolution > 10) throw ParameterError("shift word radius must be in [0,10]");
  const int len = 2 * resolution + 1;
  PointCloud c;
  c.system_id = id();
  c.seed = seed;
  for (std::uint32_t w = 0; w < (1u << len); ++w) {
    Symbols word(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) word[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((w >> (len - 1 - i)) & 1u);
    c.add(Symbol::finite(std::move(word), -resolution), w == 0 ? "zero" : "");
  }
  c.add(Symbol::periodic({1}), "ones");
  c.add(Symbol::periodic({0, 1}), "alt");
  c.add(Symbol::periodic({1, 0}), "alt1");
  return c;
}

Point ShiftSystem::random_point(std::mt19937_64& rng) const {
  std::bernoulli_distribution bit(0.5);
  Symbols w(13);
  for (auto& b : w) b = bit(rng) ? 1 : 0;
  return Symbol::finite(std::move(w), -6);
}

SystemFacts ShiftSystem::facts() const { return {"expansive, not N-distal", false, "infinitely many"}; }

// ---------------------------------------------------------------- one point

double OnePointSystem::distance(const Point& a, const Point& b) const {
  if (!valid(a) || !valid(b)) throw InvalidPoint("one_point system has a single point");
  return 0.0;
}

bool OnePointSystem::valid(const Point& x) const {
  auto c = x.get_if<Circle>();
  return c && c->x == 0.0;
}

PointCloud OnePointSystem::sample(int, std::uint64_t seed) const {
  PointCloud c;
  c.system_id = id();
  c.seed = seed;
  c.add(Circle{0.0}, "star");
  return c;
}

// ---------------------------------------------------------------- catalogue

SystemPtr rotation(double alpha) { return std::make_shared<RotationSystem>(alpha); }
SystemPtr skew_torus(double alpha) { return std::make_shared<SkewTorusSystem>(alpha); }
SystemPtr annulus3(double k) { return AnnulusSystem::make(AnnulusSystem::Kind::three, k); }
SystemPtr annulus_n(int N, double k) { return AnnulusSystem::make(AnnulusSystem::Kind::many, k, N); }
SystemPtr annulus2(double k) { return AnnulusSystem::make(AnnulusSystem::Kind::two, k); }
SystemPtr shift2() { return std::make_shared<ShiftSystem>(); }
SystemPtr identity() { return std::make_shared<RotationSystem>(0.0, true); }
SystemPtr one_point() { return std::make_shared<OnePointSystem>(); }

std::vector<SystemPtr> catalogue() {
  return {rotation(), skew_torus(), annulus3(), annulus_n(5), annulus2(), shift2(), identity()};
}

const AnnulusSystem* as_annulus(const System& sys) { return dynamic_cast<const AnnulusSystem*>(&sys); }

PointCloud shift_periodic_cloud(int n) {
  if (n < 1 || n > 20) throw ParameterError("period must be in [1,20]");
  PointCloud c;
  c.system_id = "shift2";
  for (std::uint32_t w = 0; w < (1u << n); ++w) {
    Symbols word(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) word[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((w >> (n - 1 - i)) & 1u);
    c.points.push_back(Symbol::periodic(std::move(word)));
  }
  c.named.emplace_back("zero", 0);
  return c;
}

namespace {

struct SpecParser {
  std::string_view s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParameterError("system id '" + std::string(s) + "': " + what + " at column " + std::to_string(pos + 1));
  }
  void skip() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    std::size_t b = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    if (b == pos) fail("expected a name");
    return std::string(s.substr(b, pos - b));
  }
  std::string value() {
    skip();
    std::size_t b = pos;
    while (pos < s.size() && s[pos] != ',' && s[pos] != '}' && s[pos] != ')') ++pos;
    std::string v(s.substr(b, pos - b));
    while (!v.empty() && v.back() == ' ') v.pop_back();
    if (v.empty()) fail("expected a value");
    return v;
  }

  static double real(const std::string& v) {
    auto slash = v.find('/');
    try {
      std::size_t used = 0;
      if (slash != std::string::npos) {
        double a = std::stod(v.substr(0, slash), &used);
        if (used != slash) throw std::invalid_argument(v);
        std::string den = v.substr(slash + 1);
        double b = std::stod(den, &used);
        if (used != den.size() || b == 0.0) throw std::invalid_argument(v);
        return a / b;
      }
      double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ParameterError("not a real number: '" + v + "'");
    }
  }

  static std::int64_t integer(const std::string& v) {
    std::int64_t out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) throw ParameterError("not an integer: '" + v + "'");
    return out;
  }

  SystemPtr parse() {
    const std::string name = ident();
    if (name == "product" || name == "power") {
      if (!eat('(')) fail("expected '('");
      SystemPtr a = parse();
      if (!eat(',')) fail("expected ','");
      SystemPtr out;
      if (name == "product") {
        out = product_system(a, parse());
      } else {
        out = power_system(a, integer(value()));
      }
      if (!eat(')')) fail("expected ')'");
      return out;
    }
    std::map<std::string, std::string> params;
    if (eat('{')) {
      if (!eat('}')) {
        do {
          std::string key = ident();
          if (!eat('=')) fail("expected '='");
          if (params.count(key)) fail("duplicate parameter " + key);
          params[key] = value();
        } while (eat(','));
        if (!eat('}')) fail("expected '}'");
      }
    }
    auto take = [&](const std::string& key) -> std::optional<std::string> {
      auto it = params.find(key);
      if (it == params.end()) return std::nullopt;
      std::string v = it->second;
      params.erase(it);
      return v;
    };
    SystemPtr out;
    if (name == "rotation") {
      auto a = take("alpha");
      out = rotation(a ? real(*a) : kGolden);
    } else if (name == "skew_torus") {
      auto a = take("alpha");
      out = skew_torus(a ? real(*a) : kGolden);
    } else if (name == "annulus3") {
      auto k = take("k");
      out = annulus3(k ? real(*k) : kGolden);
    } else if (name == "annulusN") {
      auto k = take("k");
      auto n = take("N");
      out = annulus_n(n ? static_cast<int>(integer(*n)) : 4, k ? real(*k) : kGolden);
    } else if (name == "annulus2") {
      auto k = take("k");
      out = annulus2(k ? real(*k) : kGolden);
    } else if (name == "shift2") {
      out = shift2();
    } else if (name == "identity") {
      out = identity();
    } else if (name == "one_point") {
      out = one_point();
    } else {
      throw ParameterError("unknown system id '" + name + "'");
    }
    if (!params.empty()) throw ParameterError("unknown parameter '" + params.begin()->first + "' for " + name);
    return out;
  }
};

}  // namespace

SystemPtr make_system(std::string_view spec) {
  SpecParser p{spec};
  SystemPtr sys = p.parse();
  p.skip();
  if (p.pos != spec.size()) p.fail("trailing characters");
  return sys;
}

}  // namespace ndist
