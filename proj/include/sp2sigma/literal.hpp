#pragma once

#include <array>
#include <cctype>
#include <string>

#include "sp2sigma/value.hpp"

namespace sp2sigma {

struct LiteralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Tiny recursive-descent parser for command-line ring literals:
/// integers and rationals, the ring symbols (i, eps, Z, the Laurent variable),
/// '+'/'-'/'*', '^' with integer exponents, parentheses, and bracketed matrix
/// rows for matrix rings. Values are built in the fraction closure of the
/// requested ring and narrowed at the end.
class LiteralParser {
 public:
  LiteralParser(std::string text) : text_(std::move(text)) {}

  Value parse_element(const Ring& r) {
    Value v = expr(r);
    expect_end();
    return v;
  }

  std::array<Value, 3> parse_triple(const Ring& r) {
    expect('[');
    Value a = expr(r);
    expect(',');
    Value b = expr(r);
    expect(',');
    Value c = expr(r);
    expect(']');
    expect_end();
    return {std::move(a), std::move(b), std::move(c)};
  }

  std::array<Value, 4> parse_mat2(const Ring& r) {
    expect('[');
    expect('[');
    Value a = expr(r);
    expect(',');
    Value b = expr(r);
    expect(']');
    expect(',');
    expect('[');
    Value c = expr(r);
    expect(',');
    Value d = expr(r);
    expect(']');
    expect(']');
    expect_end();
    return {std::move(a), std::move(b), std::move(c), std::move(d)};
  }

 private:
  Value expr(const Ring& r) {
    Value acc = peek() == '-' ? (advance(), neg(term(r))) : term(r);
    while (true) {
      char c = peek();
      if (c == '+') {
        advance();
        acc = add(acc, term(r));
      } else if (c == '-') {
        advance();
        acc = sub(acc, term(r));
      } else {
        return acc;
      }
    }
  }

  Value term(const Ring& r) {
    Value acc = factor(r);
    while (true) {
      char c = peek();
      if (c == '*') {
        advance();
        acc = mul(acc, factor(r));
      } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '(') {
        acc = mul(acc, factor(r));  // juxtaposition: 2Z, 3t^2
      } else {
        return acc;
      }
    }
  }

  Value factor(const Ring& r) {
    Value base = atom(r);
    if (peek() == '^') {
      advance();
      long e = integer();
      base = power(base, e, r);
    }
    return base;
  }

  Value power(const Value& base, long e, const Ring& r) {
    if (e < 0) {
      auto inv = try_inverse(base);
      if (!inv) throw LiteralError("negative power of a non-unit in literal");
      return power(*inv, -e, r);
    }
    Value acc = one(r);
    for (long k = 0; k < e; ++k) acc = mul(acc, base);
    return acc;
  }

  Value atom(const Ring& r) {
    char c = peek();
    if (c == '(') {
      advance();
      Value v = expr(r);
      expect(')');
      return v;
    }
    if (c == '[') {
      if (r->kind != RingKind::Mat) throw LiteralError("matrix literal in a non-matrix ring");
      advance();
      std::vector<Value> entries;
      for (int i = 0; i < r->n; ++i) {
        expect('[');
        for (int j = 0; j < r->n; ++j) {
          entries.push_back(expr(r->base));
          if (j + 1 < r->n) expect(',');
        }
        expect(']');
        if (i + 1 < r->n) expect(',');
      }
      expect(']');
      return mat_of(r, std::move(entries));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return from_rat(r, rational());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name = ident();
      return symbol(r, name);
    }
    throw LiteralError(std::string("unexpected character '") + c + "' in literal");
  }

  Value symbol(const Ring& r, const std::string& name) {
    switch (r->kind) {
      case RingKind::Complex:
        if (name == "i") return complex_of(0, 1);
        break;
      case RingKind::Dual:
        if (name == "eps") return dual_of(r, zero(r->base), one(r->base));
        return embed(r, symbol(r->base, name));
      case RingKind::Group:
        if (name == "Z") return group_gen_power(r, 1);
        return embed(r, symbol(r->base, name));
      case RingKind::Laurent:
      case RingKind::RatFunc:
        if (name == r->var) return var_power(r, 1);
        if (r->kind == RingKind::Laurent) return embed(r, symbol(r->base, name));
        break;
      case RingKind::Mat: return embed(r, symbol(r->base, name));
      default: break;
    }
    throw LiteralError("unknown symbol '" + name + "' in ring " + ring_spec(r));
  }

  /// Scalar embedding of a base-ring value along the unit.
  static Value embed(const Ring& r, const Value& b) {
    switch (r->kind) {
      case RingKind::Dual: return dual_of(r, b, zero(r->base));
      case RingKind::Mat: {
        Value v = zero(r);
        for (int i = 0; i < r->n; ++i) mat_at(v, i, i) = b;
        return v;
      }
      case RingKind::Group: {
        Value v = zero(r);
        v.parts[0] = b;
        return v;
      }
      case RingKind::Laurent: {
        Value v{r};
        v.parts = {b};
        return laurent_canon(std::move(v));
      }
      default: throw LiteralError("cannot embed into " + ring_spec(r));
    }
  }

  Rat rational() {
    Int p = natural();
    if (peek() == '/') {
      size_t save = pos_;
      advance();
      if (std::isdigit(static_cast<unsigned char>(peek()))) return Rat(p, natural());
      pos_ = save;
    }
    return Rat(p);
  }

  Int natural() {
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek()))) digits += take();
    if (digits.empty()) throw LiteralError("expected a number");
    return Int(digits);
  }

  long integer() {
    bool negate = false;
    if (peek() == '-') {
      advance();
      negate = true;
    }
    long v = static_cast<long>(natural());
    return negate ? -v : v;
  }

  std::string ident() {
    std::string name;
    while (std::isalpha(static_cast<unsigned char>(peek()))) name += take();
    return name;
  }

  char peek() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  char take() { return text_[pos_++]; }
  void advance() {
    peek();
    ++pos_;
  }
  void expect(char c) {
    if (peek() != c) throw LiteralError(std::string("expected '") + c + "' in literal");
    advance();
  }
  void expect_end() {
    if (peek() != '\0') throw LiteralError("trailing input in literal");
  }

  std::string text_;
  size_t pos_ = 0;
};

inline Value narrowed(const Value& v, const Ring& target, const std::string& what) {
  auto n = narrow(v, target);
  if (!n) throw LiteralError(what + " does not lie in ring " + ring_spec(target));
  return *n;
}

}  // namespace detail

inline Value parse_literal(const Ring& r, const std::string& text) {
  detail::LiteralParser p(text);
  return detail::narrowed(p.parse_element(fraction_closure(r)), r, "literal");
}

inline std::array<Value, 3> parse_triple_literal(const Ring& r, const std::string& text) {
  detail::LiteralParser p(text);
  auto t = p.parse_triple(fraction_closure(r));
  return {detail::narrowed(t[0], r, "triple entry"), detail::narrowed(t[1], r, "triple entry"),
          detail::narrowed(t[2], r, "triple entry")};
}

inline std::array<Value, 4> parse_mat2_literal(const Ring& r, const std::string& text) {
  detail::LiteralParser p(text);
  auto m = p.parse_mat2(fraction_closure(r));
  return {detail::narrowed(m[0], r, "matrix entry"), detail::narrowed(m[1], r, "matrix entry"),
          detail::narrowed(m[2], r, "matrix entry"), detail::narrowed(m[3], r, "matrix entry")};
}

}  // namespace sp2sigma
