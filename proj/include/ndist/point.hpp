#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ndist {

using Symbols = std::vector<std::uint8_t>;

// [0,1) representative of x mod 1
double wrap_unit(double x);
// [-1/2,1/2) representative of x mod 1
double wrap_signed(double x);
// fractional part of a*t computed with the rounding error of the product folded back in
double frac_mul(double a, std::int64_t t);

struct Circle {
  double x = 0.0;
  bool operator==(const Circle&) const = default;
};

struct Torus {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Torus&) const = default;
};

struct Annulus {
  double theta = 0.0;
  double r = 1.0;
  bool operator==(const Annulus&) const = default;
};

// Bi-infinite sequence: core occupies [offset, offset+|core|), the left tail
// repeats left_fill (ending at offset-1), the right tail repeats right_fill.
// Single-symbol fills give eventually constant sequences; longer fills give
// eventually periodic ones, which keeps periodic points exactly representable.
struct Symbol {
  Symbols core;
  std::int64_t offset = 0;
  Symbols left_fill{0};
  Symbols right_fill{0};

  std::uint8_t at(std::int64_t i) const;
  std::int64_t end() const { return offset + static_cast<std::int64_t>(core.size()); }

  static Symbol finite(Symbols word, std::int64_t offset, std::uint8_t fill = 0);
  static Symbol periodic(Symbols word);

  bool operator==(const Symbol&) const = default;
};

// Reduces a Symbol to its unique representation (primitive fills, minimal core,
// fully periodic sequences anchored at offset 0).
Symbol canonical(Symbol s);

// A point on an analytically defined wandering orbit; phase is an angle offset
// that lets rigid rotations act on the orbit without leaving this representation.
struct OrbitIndex {
  int orbit = 0;
  std::int64_t n = 0;
  double phase = 0.0;
  bool operator==(const OrbitIndex&) const = default;
};

struct Point;

struct Pair {
  std::vector<Point> parts;
  bool operator==(const Pair& other) const;
};

struct Point {
  using Rep = std::variant<Circle, Torus, Annulus, Symbol, OrbitIndex, Pair>;
  Rep rep;

  Point() = default;
  Point(Circle c) : rep(c) {}
  Point(Torus t) : rep(t) {}
  Point(Annulus a) : rep(a) {}
  Point(Symbol s) : rep(std::move(s)) {}
  Point(OrbitIndex o) : rep(o) {}
  Point(Pair p) : rep(std::move(p)) {}

  template <typename T>
  const T* get_if() const { return std::get_if<T>(&rep); }
  template <typename T>
  bool is() const { return std::holds_alternative<T>(rep); }

  bool operator==(const Point& other) const { return rep == other.rep; }
};

Point make_pair(Point a, Point b);

std::string to_string(const Point& p);
std::string kind_name(const Point& p);

Symbols parse_word(std::string_view bits);
std::string word_string(const Symbols& w);

}  // namespace ndist
