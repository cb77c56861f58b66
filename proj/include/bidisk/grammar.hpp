#pragma once

// Text grammar for functions, tuples and points.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*        division by constants only
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := number | number 'i' | 'i' | 'z1' | 'z2' | 'sqrt2'
//            | 'blaschke' '(' expr ',' ('z1' | 'z2') ')'
//            | 'compose' '(' expr ',' '(' expr ',' expr ')' ')'
//            | '(' expr ')'
//
// Points are written as two complex literals separated by a comma, e.g.
// "0.3+0.1i,0.2"; point files hold one "re1,im1,re2,im2" row per line.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bidisk/funcspace.hpp"

namespace bidisk {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  HoloFunc parse_expr() {
    HoloFunc lhs = parse_term();
    for (;;) {
      skip_ws();
      if (accept('+')) lhs = lhs + parse_term();
      else if (accept('-')) lhs = lhs - parse_term();
      else return lhs;
    }
  }

  std::vector<HoloFunc> parse_tuple() {
    expect('(');
    std::vector<HoloFunc> items{parse_expr()};
    while (accept(',')) items.push_back(parse_expr());
    expect(')');
    return items;
  }

  void finish() {
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
  }

 private:
  HoloFunc parse_term() {
    HoloFunc lhs = parse_unary();
    for (;;) {
      skip_ws();
      if (accept('*')) {
        lhs = lhs * parse_unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        const HoloFunc rhs = parse_unary();
        if (rhs.kind() != HoloFunc::Kind::Constant) fail_at(at, "division is only defined by constants");
        if (rhs.value() == 0.0) fail_at(at, "division by zero");
        lhs = HoloFunc::scale(1.0 / rhs.value(), lhs);
      } else {
        return lhs;
      }
    }
  }

  HoloFunc parse_unary() {
    skip_ws();
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  HoloFunc parse_power() {
    HoloFunc base = parse_primary();
    skip_ws();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    int n = 0;
    std::from_chars(text_.data() + start, text_.data() + pos_, n);
    if (n > 64) fail_at(start, "exponent too large");
    HoloFunc out = HoloFunc::constant(1.0);
    for (int k = 0; k < n; ++k) out = k == 0 ? base : out * base;
    return out;
  }

  HoloFunc parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char ch = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return parse_number();
    if (accept('(')) {
      HoloFunc inner = parse_expr();
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ',') fail("tuple where a single expression was expected");
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      const std::size_t at = pos_;
      const std::string id = identifier();
      if (id == "z1") return HoloFunc::z1();
      if (id == "z2") return HoloFunc::z2();
      if (id == "i") return HoloFunc::constant(cplx(0.0, 1.0));
      if (id == "sqrt2") return HoloFunc::constant(std::numbers::sqrt2);
      if (id == "blaschke") return parse_blaschke();
      if (id == "compose") return parse_compose();
      fail_at(at, "unknown identifier '" + id + "'");
    }
    fail(std::string("unexpected character '") + ch + "'");
  }

  HoloFunc parse_number() {
    double x = 0.0;
    const char* begin = text_.data() + pos_;
    auto res = std::from_chars(begin, text_.data() + text_.size(), x);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        (pos_ + 1 == text_.size() || !std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      return HoloFunc::constant(cplx(0.0, x));
    }
    return HoloFunc::constant(x);
  }

  HoloFunc parse_blaschke() {
    expect('(');
    const std::size_t at = pos_;
    const HoloFunc w = parse_expr();
    if (w.kind() != HoloFunc::Kind::Constant) fail_at(at, "Blaschke center must be a constant");
    expect(',');
    skip_ws();
    const std::size_t vat = pos_;
    const std::string var = identifier();
    if (var != "z1" && var != "z2") fail_at(vat, "Blaschke factor takes z1 or z2");
    expect(')');
    try {
      return HoloFunc::blaschke(DiskPoint(w.value()), var == "z1" ? 1 : 2);
    } catch (const DomainError& e) {
      fail_at(at, e.what());
    }
  }

  HoloFunc parse_compose() {
    expect('(');
    const HoloFunc outer = parse_expr();
    expect(',');
    skip_ws();
    const std::size_t at = pos_;
    const auto inner = parse_tuple();
    if (inner.size() != 2) fail_at(at, "compose expects a pair (f1, f2)");
    expect(')');
    return HoloFunc::compose(outer, inner[0], inner[1]);
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    throw ParseError(msg + " at column " + std::to_string(at + 1) + " in \"" + std::string(text_) + "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline HoloFunc parse_function(std::string_view text) {
  detail::Parser p(text);
  HoloFunc f = p.parse_expr();
  p.finish();
  return f;
}

/// "(f1, f2, ...)" with exactly `arity` entries.
inline std::vector<HoloFunc> parse_tuple(std::string_view text, std::size_t arity) {
  detail::Parser p(text);
  auto items = p.parse_tuple();
  p.finish();
  if (items.size() != arity)
    throw ParseError("expected a tuple of " + std::to_string(arity) + " functions, got " + std::to_string(items.size()));
  return items;
}

inline Triplet parse_triplet(std::string_view text) {
  auto f = parse_tuple(text, 3);
  return {f[0], f[1], f[2]};
}

/// Parses "(f1, f2)" and certifies it as a self-map.
inline SelfMap parse_self_map(std::string_view text) {
  auto f = parse_tuple(text, 2);
  return SelfMap::certify(f[0], f[1]);
}

inline cplx parse_complex(std::string_view text) {
  const HoloFunc f = parse_function(text);
  if (f.kind() != HoloFunc::Kind::Constant) throw ParseError("expected a complex constant, got \"" + std::string(text) + "\"");
  return f.value();
}

/// "a,b" with complex literals a and b.
inline BidiskPoint parse_point(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
    throw ParseError("a point is two complex numbers separated by one comma, got \"" + std::string(text) + "\"");
  const cplx a = parse_complex(text.substr(0, comma));
  const cplx b = parse_complex(text.substr(comma + 1));
  try {
    return {a, b};
  } catch (const DomainError& e) {
    throw ParseError(std::string("point outside the bidisk: ") + e.what());
  }
}

/// One "re1,im1,re2,im2" row per line; blank lines and '#' comments skipped.
inline std::vector<BidiskPoint> read_points_csv(std::istream& in) {
  std::vector<BidiskPoint> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double x = 0.0;
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t\r");
      if (b == std::string::npos) throw ParseError("empty field on line " + std::to_string(lineno));
      auto res = std::from_chars(cell.data() + b, cell.data() + e + 1, x);
      if (res.ec != std::errc() || res.ptr != cell.data() + e + 1)
        throw ParseError("malformed number on line " + std::to_string(lineno));
      v.push_back(x);
    }
    if (v.size() != 4) throw ParseError("expected 4 fields on line " + std::to_string(lineno));
    try {
      pts.emplace_back(cplx(v[0], v[1]), cplx(v[2], v[3]));
    } catch (const DomainError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return pts;
}

inline std::vector<BidiskPoint> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open point file " + path);
  return read_points_csv(in);
}

inline std::string format_point_csv(const BidiskPoint& z) {
  return detail::format_real(z.c1().real()) + "," + detail::format_real(z.c1().imag()) + "," +
         detail::format_real(z.c2().real()) + "," + detail::format_real(z.c2().imag());
}

}  // namespace bidisk
