#include "ndist/point.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "ndist/errors.hpp"

namespace ndist {

double wrap_unit(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

double wrap_signed(double x) {
  double f = wrap_unit(x);
  return f >= 0.5 ? f - 1.0 : f;
}

double frac_mul(double a, std::int64_t t) {
  const double td = static_cast<double>(t);
  const double p = a * td;
  const double e = std::fma(a, td, -p);
  return wrap_unit((p - std::floor(p)) + e);
}

namespace {

std::int64_t pmod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

Symbols primitive_root(const Symbols& w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
    if (ok) return Symbols(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
  }
  return w;
}

}  // namespace

std::uint8_t Symbol::at(std::int64_t i) const {
  if (i < offset) {
    const auto p = static_cast<std::int64_t>(left_fill.size());
    return left_fill[static_cast<std::size_t>(pmod(i - offset, p))];
  }
  if (i >= end()) {
    const auto q = static_cast<std::int64_t>(right_fill.size());
    return right_fill[static_cast<std::size_t>(pmod(i - end(), q))];
  }
  return core[static_cast<std::size_t>(i - offset)];
}

Symbol Symbol::finite(Symbols word, std::int64_t offset, std::uint8_t fill) {
  Symbol s;
  s.core = std::move(word);
  s.offset = offset;
  s.left_fill = {fill};
  s.right_fill = {fill};
  return canonical(std::move(s));
}

Symbol Symbol::periodic(Symbols word) {
  if (word.empty()) throw InvalidPoint("periodic symbol needs a nonempty word");
  Symbol s;
  s.offset = 0;
  s.left_fill = word;
  s.right_fill = word;
  return canonical(std::move(s));
}

Symbol canonical(Symbol s) {
  if (s.left_fill.empty() || s.right_fill.empty()) throw InvalidPoint("symbol fill word is empty");
  s.left_fill = primitive_root(s.left_fill);
  s.right_fill = primitive_root(s.right_fill);
  const auto p = static_cast<std::int64_t>(s.left_fill.size());
  const auto q = static_cast<std::int64_t>(s.right_fill.size());
  const std::int64_t a = s.offset;
  const std::int64_t m = s.end();

  // b: start of the right periodic tail
  std::int64_t b = m;
  bool fully_periodic = false;
  while (s.at(b - 1) == s.at(b - 1 + q)) {
    --b;
    if (b < a - (p + q) - 1) {
      fully_periodic = true;
      break;
    }
  }

  Symbol out;
  if (fully_periodic) {
    Symbols w(static_cast<std::size_t>(q));
    for (std::int64_t t = 0; t < q; ++t) w[static_cast<std::size_t>(t)] = s.at(t);
    out.offset = 0;
    out.left_fill = w;
    out.right_fill = w;
    return out;
  }

  // e: end of the left periodic head
  std::int64_t e = a;
  while (s.at(e) == s.at(e - p)) {
    ++e;
    if (e > m + p + q + 1) throw InvalidPoint("symbol canonicalization did not converge");
  }

  Symbols lf(static_cast<std::size_t>(p)), rf(static_cast<std::size_t>(q));
  if (e <= b) {
    for (std::int64_t t = 0; t < p; ++t) lf[static_cast<std::size_t>(t)] = s.at(e - p + t);
    for (std::int64_t t = 0; t < q; ++t) rf[static_cast<std::size_t>(t)] = s.at(b + t);
    out.core.reserve(static_cast<std::size_t>(b - e));
    for (std::int64_t i = e; i < b; ++i) out.core.push_back(s.at(i));
    out.offset = e;
  } else {
    for (std::int64_t t = 0; t < p; ++t) lf[static_cast<std::size_t>(t)] = s.at(b - p + t);
    for (std::int64_t t = 0; t < q; ++t) rf[static_cast<std::size_t>(t)] = s.at(b + t);
    out.offset = b;
  }
  out.left_fill = std::move(lf);
  out.right_fill = std::move(rf);
  return out;
}

bool Pair::operator==(const Pair& other) const { return parts == other.parts; }

Point make_pair(Point a, Point b) {
  Pair p;
  p.parts.push_back(std::move(a));
  p.parts.push_back(std::move(b));
  return Point(std::move(p));
}

Symbols parse_word(std::string_view bits) {
  Symbols w;
  w.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidPoint("symbol words are binary, got '" + std::string(bits) + "'");
    w.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return w;
}

std::string word_string(const Symbols& w) {
  std::string s;
  s.reserve(w.size());
  for (auto c : w) s.push_back(static_cast<char>('0' + c));
  return s;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Printer {
  std::string operator()(const Circle& c) const { return "Circle(" + num(c.x) + ")"; }
  std::string operator()(const Torus& t) const { return "Torus(" + num(t.x) + "," + num(t.y) + ")"; }
  std::string operator()(const Annulus& a) const { return "Annulus(" + num(a.theta) + "," + num(a.r) + ")"; }
  std::string operator()(const Symbol& s) const {
    std::ostringstream o;
    o << "Symbol(" << "(" << word_string(s.left_fill) << ")~" << word_string(s.core) << "@" << s.offset << "~("
      << word_string(s.right_fill) << "))";
    return o.str();
  }
  std::string operator()(const OrbitIndex& o) const {
    std::string s = "OrbitIndex(" + std::to_string(o.orbit) + "," + std::to_string(o.n);
    if (o.phase != 0.0) s += "," + num(o.phase);
    return s + ")";
  }
  std::string operator()(const Pair& p) const {
    std::string s = "Pair(";
    for (std::size_t i = 0; i < p.parts.size(); ++i) {
      if (i) s += ",";
      s += to_string(p.parts[i]);
    }
    return s + ")";
  }
};

}  // namespace

std::string to_string(const Point& p) { return std::visit(Printer{}, p.rep); }

std::string kind_name(const Point& p) {
  static const char* names[] = {"Circle", "Torus", "Annulus", "Symbol", "OrbitIndex", "Pair"};
  return names[p.rep.index()];
}

}  // namespace ndist
