#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sp2sigma/ring.hpp"

namespace sp2sigma {

namespace poly {

/// Dense univariate polynomials over the rationals, index = degree.
/// Canonical form: empty vector is zero; otherwise the leading coefficient is
/// nonzero.
using Poly = std::vector<Rat>;

inline Poly trim(Poly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

inline Poly add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return trim(std::move(r));
}

inline Poly neg(Poly a) {
  for (auto& c : a) c = -c;
  return a;
}

inline Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return trim(std::move(r));
}

inline Poly scale(Poly a, const Rat& c) {
  if (c == 0) return {};
  for (auto& x : a) x *= c;
  return a;
}

/// Polynomial division with remainder; requires b nonzero.
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  Poly q(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, Rat(0));
  while (a.size() >= b.size()) {
    Rat c = a.back() / b.back();
    size_t shift = a.size() - b.size();
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    a = trim(std::move(a));
    if (a.empty()) break;
    if (a.size() >= b.size() && a.back() == 0) a = trim(std::move(a));
  }
  return {trim(std::move(q)), std::move(a)};
}

inline Poly monic(Poly a) {
  if (a.empty()) return a;
  Rat lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

inline Poly gcd(Poly a, Poly b) {
  a = trim(std::move(a));
  b = trim(std::move(b));
  while (!b.empty()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(std::move(a));
}

inline Rat eval(const Poly& p, const Rat& x) {
  Rat acc(0);
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

}  // namespace poly

struct Value;

/// Thrown for structural misuse (mixed rings, unsupported compositions).
struct RingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown by project_sigma on rings where 2 is not a unit.
struct HalfUnavailable : RingError {
  HalfUnavailable() : RingError("2 is not invertible in this ring") {}
};

/// An immutable element of a registered ring. The payload interpretation is
/// fixed by the descriptor:
///   Int/Rat:  a
///   Complex:  a + b*i
///   RatFunc:  num/den (den monic, gcd(num,den) = 1)
///   Dual:     parts = {value, eps-shadow}
///   Mat:      parts = n*n entries, row-major
///   Group:    parts = n coefficients indexed by exponent of the generator
///   Laurent:  parts = coefficients of v^(lo), v^(lo+1), ...; trimmed at both
///             ends, zero is the empty vector with lo = 0
struct Value {
  Ring ring;
  Rat a, b;
  poly::Poly num, den;
  std::vector<Value> parts;
  long lo = 0;
};

inline void require_same_ring(const Value& x, const Value& y) {
  if (!same_ring(x.ring, y.ring)) throw RingError("operands from different rings");
}

Value zero(const Ring& r);
Value one(const Ring& r);
Value add(const Value& x, const Value& y);
Value neg(const Value& x);
Value mul(const Value& x, const Value& y);
Value sigma(const Value& x);
bool is_zero(const Value& x);
std::optional<Value> try_inverse(const Value& x);

inline Value sub(const Value& x, const Value& y) { return add(x, neg(y)); }
inline bool equal(const Value& x, const Value& y) { return same_ring(x.ring, y.ring) && is_zero(sub(x, y)); }
inline bool operator==(const Value& x, const Value& y) { return equal(x, y); }
inline bool operator!=(const Value& x, const Value& y) { return !equal(x, y); }

// --- constructors -----------------------------------------------------------

/// Embeds a rational scalar along the unit of the ring. Throws when the
/// scalar does not exist there (non-integer in an integer-coefficient ring).
inline Value from_rat(const Ring& r, const Rat& q) {
  switch (r->kind) {
    case RingKind::Int:
      if (!is_integer(q)) throw RingError("non-integer scalar in integer ring");
      [[fallthrough]];
    case RingKind::Rat: {
      Value v{r};
      v.a = q;
      return v;
    }
    case RingKind::Complex: {
      Value v{r};
      v.a = q;
      v.b = 0;
      return v;
    }
    case RingKind::RatFunc: {
      Value v{r};
      if (q != 0) v.num = {q};
      v.den = {Rat(1)};
      return v;
    }
    case RingKind::Dual: {
      Value v{r};
      v.parts = {from_rat(r->base, q), zero(r->base)};
      return v;
    }
    case RingKind::Mat: {
      Value v = zero(r);
      for (int i = 0; i < r->n; ++i) v.parts[i * r->n + i] = from_rat(r->base, q);
      return v;
    }
    case RingKind::Group: {
      Value v = zero(r);
      v.parts[0] = from_rat(r->base, q);
      return v;
    }
    case RingKind::Laurent: {
      Value v{r};
      if (q != 0) {
        v.parts = {from_rat(r->base, q)};
        v.lo = 0;
      }
      return v;
    }
  }
  throw std::logic_error("unreachable ring kind");
}

inline Value from_int(const Ring& r, long n) { return from_rat(r, Rat(n)); }

inline Value zero_impl(const Ring& r) {
  Value v{r};
  switch (r->kind) {
    case RingKind::Int:
    case RingKind::Rat: v.a = 0; break;
    case RingKind::Complex: v.a = 0; v.b = 0; break;
    case RingKind::RatFunc: v.den = {Rat(1)}; break;
    case RingKind::Dual: v.parts = {zero(r->base), zero(r->base)}; break;
    case RingKind::Mat: v.parts.assign(static_cast<size_t>(r->n) * r->n, zero(r->base)); break;
    case RingKind::Group: v.parts.assign(static_cast<size_t>(r->n), zero(r->base)); break;
    case RingKind::Laurent: break;
  }
  return v;
}

inline Value zero(const Ring& r) { return zero_impl(r); }
inline Value one(const Ring& r) { return from_rat(r, Rat(1)); }

/// The Laurent/rational-function variable as a ring element (exponent k).
inline Value var_power(const Ring& r, long k) {
  if (r->kind == RingKind::Laurent) {
    Value v{r};
    v.parts = {one(r->base)};
    v.lo = k;
    return v;
  }
  if (r->kind == RingKind::RatFunc) {
    Value v{r};
    if (k >= 0) {
      v.num.assign(static_cast<size_t>(k) + 1, Rat(0));
      v.num.back() = 1;
      v.den = {Rat(1)};
    } else {
      v.num = {Rat(1)};
      v.den.assign(static_cast<size_t>(-k) + 1, Rat(0));
      v.den.back() = 1;
    }
    return v;
  }
  throw RingError("ring has no distinguished variable");
}

/// The generator Z of a cyclic group ring, to the k-th power.
inline Value group_gen_power(const Ring& r, long k) {
  if (r->kind != RingKind::Group) throw RingError("not a group ring");
  Value v = zero(r);
  long idx = ((k % r->n) + r->n) % r->n;
  v.parts[static_cast<size_t>(idx)] = one(r->base);
  return v;
}

/// a + b*eps in a dual ring.
inline Value dual_of(const Ring& r, Value real, Value shadow) {
  if (r->kind != RingKind::Dual) throw RingError("not a dual ring");
  Value v{r};
  v.parts = {std::move(real), std::move(shadow)};
  return v;
}

inline Value complex_of(const Rat& re, const Rat& im) {
  Value v{ring_complex()};
  v.a = re;
  v.b = im;
  return v;
}

// --- matrix payload helpers --------------------------------------------------

inline const Value& mat_at(const Value& m, int i, int j) {
  return m.parts[static_cast<size_t>(i) * m.ring->n + j];
}
inline Value& mat_at(Value& m, int i, int j) {
  return m.parts[static_cast<size_t>(i) * m.ring->n + j];
}

/// Builds a matrix value from row-major entries of the base ring.
inline Value mat_of(const Ring& r, std::vector<Value> entries) {
  if (r->kind != RingKind::Mat) throw RingError("not a matrix ring");
  if (entries.size() != static_cast<size_t>(r->n) * r->n) throw RingError("wrong entry count");
  Value v{r};
  v.parts = std::move(entries);
  return v;
}

// --- canonicalization --------------------------------------------------------

inline Value laurent_canon(Value v) {
  while (!v.parts.empty() && is_zero(v.parts.back())) v.parts.pop_back();
  size_t lead = 0;
  while (lead < v.parts.size() && is_zero(v.parts[lead])) ++lead;
  if (lead > 0) {
    v.parts.erase(v.parts.begin(), v.parts.begin() + static_cast<long>(lead));
    v.lo += static_cast<long>(lead);
  }
  if (v.parts.empty()) v.lo = 0;
  return v;
}

inline Value ratfunc_canon(Value v) {
  v.num = poly::trim(std::move(v.num));
  v.den = poly::trim(std::move(v.den));
  if (v.den.empty()) throw std::domain_error("rational function with zero denominator");
  if (v.num.empty()) {
    v.den = {Rat(1)};
    return v;
  }
  poly::Poly g = poly::gcd(v.num, v.den);
  if (g.size() > 1) {
    v.num = poly::divmod(v.num, g).first;
    v.den = poly::divmod(v.den, g).first;
  }
  Rat lead = v.den.back();
  if (lead != 1) {
    for (auto& c : v.den) c /= lead;
    for (auto& c : v.num) c /= lead;
  }
  return v;
}

// --- arithmetic --------------------------------------------------------------

inline bool is_zero(const Value& x) {
  switch (x.ring->kind) {
    case RingKind::Int:
    case RingKind::Rat: return x.a == 0;
    case RingKind::Complex: return x.a == 0 && x.b == 0;
    case RingKind::RatFunc: return x.num.empty();
    case RingKind::Laurent: {
      for (const auto& c : x.parts)
        if (!is_zero(c)) return false;
      return true;
    }
    default: {
      for (const auto& c : x.parts)
        if (!is_zero(c)) return false;
      return true;
    }
  }
}

inline Value add(const Value& x, const Value& y) {
  require_same_ring(x, y);
  Value r{x.ring};
  switch (x.ring->kind) {
    case RingKind::Int:
    case RingKind::Rat: r.a = x.a + y.a; return r;
    case RingKind::Complex: r.a = x.a + y.a; r.b = x.b + y.b; return r;
    case RingKind::RatFunc:
      r.num = poly::add(poly::mul(x.num, y.den), poly::mul(y.num, x.den));
      r.den = poly::mul(x.den, y.den);
      return ratfunc_canon(std::move(r));
    case RingKind::Laurent: {
      if (x.parts.empty()) return y;
      if (y.parts.empty()) return x;
      long lo = std::min(x.lo, y.lo);
      long hi = std::max(x.lo + static_cast<long>(x.parts.size()), y.lo + static_cast<long>(y.parts.size()));
      r.lo = lo;
      r.parts.assign(static_cast<size_t>(hi - lo), zero(x.ring->base));
      for (size_t i = 0; i < x.parts.size(); ++i)
        r.parts[static_cast<size_t>(x.lo - lo) + i] = x.parts[i];
      for (size_t i = 0; i < y.parts.size(); ++i) {
        auto& slot = r.parts[static_cast<size_t>(y.lo - lo) + i];
        slot = add(slot, y.parts[i]);
      }
      return laurent_canon(std::move(r));
    }
    default: {
      r.parts.reserve(x.parts.size());
      for (size_t i = 0; i < x.parts.size(); ++i) r.parts.push_back(add(x.parts[i], y.parts[i]));
      return r;
    }
  }
}

inline Value neg(const Value& x) {
  Value r{x.ring};
  switch (x.ring->kind) {
    case RingKind::Int:
    case RingKind::Rat: r.a = -x.a; return r;
    case RingKind::Complex: r.a = -x.a; r.b = -x.b; return r;
    case RingKind::RatFunc: r.num = poly::neg(x.num); r.den = x.den; return r;
    case RingKind::Laurent: r.lo = x.lo; [[fallthrough]];
    default: {
      r.parts.reserve(x.parts.size());
      for (const auto& c : x.parts) r.parts.push_back(neg(c));
      return r;
    }
  }
}

inline Value mul(const Value& x, const Value& y) {
  require_same_ring(x, y);
  Value r{x.ring};
  const int n = x.ring->n;
  switch (x.ring->kind) {
    case RingKind::Int:
    case RingKind::Rat: r.a = x.a * y.a; return r;
    case RingKind::Complex:
      r.a = x.a * y.a - x.b * y.b;
      r.b = x.a * y.b + x.b * y.a;
      return r;
    case RingKind::RatFunc:
      r.num = poly::mul(x.num, y.num);
      r.den = poly::mul(x.den, y.den);
      return ratfunc_canon(std::move(r));
    case RingKind::Dual:
      r.parts = {mul(x.parts[0], y.parts[0]),
                 add(mul(x.parts[0], y.parts[1]), mul(x.parts[1], y.parts[0]))};
      return r;
    case RingKind::Mat: {
      r.parts.assign(static_cast<size_t>(n) * n, zero(x.ring->base));
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          const Value& xik = mat_at(x, i, k);
          if (is_zero(xik)) continue;
          for (int j = 0; j < n; ++j)
            mat_at(r, i, j) = add(mat_at(r, i, j), mul(xik, mat_at(y, k, j)));
        }
      return r;
    }
    case RingKind::Group: {
      r.parts.assign(static_cast<size_t>(n), zero(x.ring->base));
      for (int i = 0; i < n; ++i) {
        if (is_zero(x.parts[static_cast<size_t>(i)])) continue;
        for (int j = 0; j < n; ++j) {
          int k = (i + j) % n;
          r.parts[static_cast<size_t>(k)] =
              add(r.parts[static_cast<size_t>(k)],
                  mul(x.parts[static_cast<size_t>(i)], y.parts[static_cast<size_t>(j)]));
        }
      }
      return r;
    }
    case RingKind::Laurent: {
      if (x.parts.empty() || y.parts.empty()) return zero(x.ring);
      r.lo = x.lo + y.lo;
      r.parts.assign(x.parts.size() + y.parts.size() - 1, zero(x.ring->base));
      for (size_t i = 0; i < x.parts.size(); ++i) {
        if (is_zero(x.parts[i])) continue;
        for (size_t j = 0; j < y.parts.size(); ++j)
          r.parts[i + j] = add(r.parts[i + j], mul(x.parts[i], y.parts[j]));
      }
      return laurent_canon(std::move(r));
    }
  }
  throw std::logic_error("unreachable ring kind");
}

inline Value sigma(const Value& x) {
  Value r{x.ring};
  const int n = x.ring->n;
  switch (x.ring->kind) {
    case RingKind::Int:
    case RingKind::Rat:
    case RingKind::RatFunc: return x;
    case RingKind::Complex: r.a = x.a; r.b = -x.b; return r;
    case RingKind::Dual:
      r.parts = {sigma(x.parts[0]), x.ring->conj ? neg(sigma(x.parts[1])) : sigma(x.parts[1])};
      return r;
    case RingKind::Mat: {
      r.parts.assign(static_cast<size_t>(n) * n, zero(x.ring->base));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mat_at(r, j, i) = sigma(mat_at(x, i, j));
      return r;
    }
    case RingKind::Group: {
      r.parts.assign(static_cast<size_t>(n), zero(x.ring->base));
      for (int i = 0; i < n; ++i) r.parts[static_cast<size_t>((n - i) % n)] = sigma(x.parts[static_cast<size_t>(i)]);
      return r;
    }
    case RingKind::Laurent: {
      if (x.parts.empty()) return x;
      if (!x.ring->conj) {
        r.lo = x.lo;
        r.parts.reserve(x.parts.size());
        for (const auto& c : x.parts) r.parts.push_back(sigma(c));
        return r;
      }
      // q-mode: the variable is inverted, coefficients get the base sigma.
      long hi = x.lo + static_cast<long>(x.parts.size()) - 1;
      r.lo = -hi;
      r.parts.reserve(x.parts.size());
      for (size_t i = x.parts.size(); i-- > 0;) r.parts.push_back(sigma(x.parts[i]));
      return r;
    }
  }
  throw std::logic_error("unreachable ring kind");
}

inline bool is_sigma_fixed(const Value& x) { return equal(sigma(x), x); }

// --- widening / narrowing ----------------------------------------------------

/// Re-expresses a value in a structurally compatible wider ring (typically
/// fraction_closure of its own ring).
inline Value widen(const Value& x, const Ring& target) {
  if (same_ring(x.ring, target)) {
    Value v = x;
    v.ring = target;
    return v;
  }
  switch (target->kind) {
    case RingKind::Rat: {
      if (x.ring->kind != RingKind::Int) break;
      Value v{target};
      v.a = x.a;
      return v;
    }
    case RingKind::RatFunc: {
      if (x.ring->kind != RingKind::Laurent || x.ring->var != target->var) break;
      Value v = from_rat(target, Rat(0));
      for (size_t i = 0; i < x.parts.size(); ++i) {
        const Value& c = x.parts[i];
        if (is_zero(c)) continue;
        if (c.ring->kind != RingKind::Int && c.ring->kind != RingKind::Rat)
          throw RingError("cannot widen Laurent coefficients to rationals");
        v = add(v, mul(from_rat(target, c.a), var_power(target, x.lo + static_cast<long>(i))));
      }
      return v;
    }
    case RingKind::Dual:
    case RingKind::Mat:
    case RingKind::Group:
    case RingKind::Laurent: {
      if (x.ring->kind != target->kind || x.ring->n != target->n || x.ring->conj != target->conj ||
          x.ring->var != target->var)
        break;
      Value v{target};
      v.lo = x.lo;
      v.parts.reserve(x.parts.size());
      for (const auto& c : x.parts) v.parts.push_back(widen(c, target->base));
      return v;
    }
    default: break;
  }
  throw RingError("cannot widen " + ring_spec(x.ring) + " to " + ring_spec(target));
}

/// Attempts to re-express a value in a structurally compatible narrower ring;
/// returns nullopt when the value does not lie there (fractional integer,
/// genuine rational function, ...).
inline std::optional<Value> narrow(const Value& x, const Ring& target) {
  if (same_ring(x.ring, target)) {
    Value v = x;
    v.ring = target;
    return v;
  }
  switch (x.ring->kind) {
    case RingKind::Rat: {
      if (target->kind != RingKind::Int) break;
      if (!is_integer(x.a)) return std::nullopt;
      Value v{target};
      v.a = x.a;
      return v;
    }
    case RingKind::RatFunc: {
      if (target->kind != RingKind::Laurent || target->var != x.ring->var) break;
      // The denominator must be a monomial v^k (it is monic in canonical form).
      size_t k = x.den.size() - 1;
      for (size_t i = 0; i + 1 < x.den.size(); ++i)
        if (x.den[i] != 0) return std::nullopt;
      if (x.den.back() != 1) return std::nullopt;
      Value v = zero(target);
      for (size_t i = 0; i < x.num.size(); ++i) {
        if (x.num[i] == 0) continue;
        Rat c = x.num[i];
        if (target->base->kind == RingKind::Int && !is_integer(c)) return std::nullopt;
        Value term{target};
        term.lo = static_cast<long>(i) - static_cast<long>(k);
        term.parts = {from_rat(target->base, c)};
        v = add(v, term);
      }
      return v;
    }
    case RingKind::Dual:
    case RingKind::Mat:
    case RingKind::Group:
    case RingKind::Laurent: {
      if (target->kind != x.ring->kind || target->n != x.ring->n || target->conj != x.ring->conj ||
          target->var != x.ring->var)
        break;
      Value v{target};
      v.lo = x.lo;
      v.parts.reserve(x.parts.size());
      for (const auto& c : x.parts) {
        auto nc = narrow(c, target->base);
        if (!nc) return std::nullopt;
        v.parts.push_back(std::move(*nc));
      }
      return v;
    }
    default: break;
  }
  throw RingError("cannot narrow " + ring_spec(x.ring) + " to " + ring_spec(target));
}

// --- inversion ---------------------------------------------------------------

namespace detail {

/// Gauss-Jordan inversion over a base ring in which the non-units behave like
/// an ideal (fields and local rings: rat, complex, ratfunc, dual over these).
/// Pivots are chosen by try_inverse success.
inline std::optional<std::vector<Value>> invert_square(const Ring& base, int n, std::vector<Value> m) {
  auto at = [&](std::vector<Value>& v, int i, int j) -> Value& { return v[static_cast<size_t>(i) * n + j]; };
  std::vector<Value> inv;
  inv.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.push_back(i == j ? one(base) : zero(base));
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    std::optional<Value> pinv;
    for (int row = col; row < n; ++row) {
      pinv = try_inverse(at(m, row, col));
      if (pinv) {
        pivot = row;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(at(m, pivot, j), at(m, col, j));
        std::swap(at(inv, pivot, j), at(inv, col, j));
      }
    }
    for (int j = 0; j < n; ++j) {
      at(m, col, j) = mul(*pinv, at(m, col, j));
      at(inv, col, j) = mul(*pinv, at(inv, col, j));
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || is_zero(at(m, row, col))) continue;
      Value f = at(m, row, col);
      for (int j = 0; j < n; ++j) {
        at(m, row, j) = sub(at(m, row, j), mul(f, at(m, col, j)));
        at(inv, row, j) = sub(at(inv, row, j), mul(f, at(inv, col, j)));
      }
    }
  }
  return inv;
}

}  // namespace detail

Value hurley_embed(const Value& x);

inline std::optional<Value> try_inverse(const Value& x) {
  const Ring& r = x.ring;
  switch (r->kind) {
    case RingKind::Int: {
      if (x.a != 1 && x.a != -1) return std::nullopt;
      return x;
    }
    case RingKind::Rat: {
      if (x.a == 0) return std::nullopt;
      Value v{r};
      v.a = 1 / x.a;
      return v;
    }
    case RingKind::Complex: {
      Rat norm = x.a * x.a + x.b * x.b;
      if (norm == 0) return std::nullopt;
      Value v{r};
      v.a = x.a / norm;
      v.b = -x.b / norm;
      return v;
    }
    case RingKind::RatFunc: {
      if (x.num.empty()) return std::nullopt;
      Value v{r};
      v.num = x.den;
      v.den = x.num;
      return ratfunc_canon(std::move(v));
    }
    case RingKind::Dual: {
      auto inv0 = try_inverse(x.parts[0]);
      if (!inv0) return std::nullopt;
      // (a + d eps)^-1 = a^-1 - a^-1 d a^-1 eps
      Value v{r};
      v.parts = {*inv0, neg(mul(mul(*inv0, x.parts[1]), *inv0))};
      return v;
    }
    case RingKind::Laurent: {
      // Units are single terms c * v^k with c a unit of the base.
      Value c = laurent_canon(x);
      if (c.parts.size() != 1) return std::nullopt;
      auto cinv = try_inverse(c.parts[0]);
      if (!cinv) return std::nullopt;
      Value v{r};
      v.lo = -c.lo;
      v.parts = {*cinv};
      return v;
    }
    case RingKind::Mat: {
      Ring fb = fraction_closure(r->base);
      if (same_ring(fb, r->base)) {
        auto inv = detail::invert_square(r->base, r->n, x.parts);
        if (!inv) return std::nullopt;
        return mat_of(r, std::move(*inv));
      }
      // Invert over the fraction field of the base, then require the entries
      // to land back in the base.
      std::vector<Value> wide;
      wide.reserve(x.parts.size());
      for (const auto& e : x.parts) wide.push_back(widen(e, fb));
      auto inv = detail::invert_square(fb, r->n, std::move(wide));
      if (!inv) return std::nullopt;
      std::vector<Value> back;
      back.reserve(inv->size());
      for (const auto& e : *inv) {
        auto ne = narrow(e, r->base);
        if (!ne) return std::nullopt;
        back.push_back(std::move(*ne));
      }
      return mat_of(r, std::move(back));
    }
    case RingKind::Group: {
      // Invert the Hurley image and pull the first row back; the first row of
      // the image of y is exactly the coefficient vector of y.
      Value img = hurley_embed(x);
      auto minv = try_inverse(img);
      if (!minv) return std::nullopt;
      Value v{r};
      v.parts.assign(minv->parts.begin(), minv->parts.begin() + r->n);
      if (!equal(mul(x, v), one(r)) || !equal(mul(v, x), one(r))) return std::nullopt;
      return v;
    }
  }
  throw std::logic_error("unreachable ring kind");
}

// --- the remaining ring-core operations --------------------------------------

/// Coefficient-matrix embedding of a cyclic group ring into mat:n:base;
/// entry (i,j) is the coefficient of g_i^-1 g_j = Z^(j-i).
inline Value hurley_embed(const Value& x) {
  const Ring& r = x.ring;
  if (r->kind != RingKind::Group) throw RingError("hurley_embed needs a group-ring value");
  Ring target = ring_mat(r->n, r->base);
  Value m = zero(target);
  for (int i = 0; i < r->n; ++i)
    for (int j = 0; j < r->n; ++j)
      mat_at(m, i, j) = x.parts[static_cast<size_t>(((j - i) % r->n + r->n) % r->n)];
  return m;
}

inline Value twisted_commutator_left(const Value& a, const Value& b) {
  return sub(mul(sigma(a), b), mul(sigma(b), a));
}
inline Value twisted_commutator_right(const Value& a, const Value& b) {
  return sub(mul(a, sigma(b)), mul(b, sigma(a)));
}

/// x -> (x + sigma(x))/2; requires 2 invertible.
inline Value project_sigma(const Value& x) {
  if (!has_half(x.ring)) throw HalfUnavailable();
  return mul(add(x, sigma(x)), from_rat(x.ring, Rat(1, 2)));
}

/// True when every scalar payload has integer coefficients (the "integral
/// subring" used by Markov admissibility).
inline bool is_integral(const Value& x) {
  switch (x.ring->kind) {
    case RingKind::Int: return true;
    case RingKind::Rat: return is_integer(x.a);
    case RingKind::Complex: return is_integer(x.a) && is_integer(x.b);
    case RingKind::RatFunc: {
      if (x.den.size() != 1 || x.den[0] != 1) return false;
      for (const auto& c : x.num)
        if (!is_integer(c)) return false;
      return true;
    }
    default:
      for (const auto& c : x.parts)
        if (!is_integral(c)) return false;
      return true;
  }
}

/// Substitutes a rational point for the distinguished variable of a Laurent or
/// rational-function scalar; other scalars pass through unchanged and
/// composite values map entrywise. Used by the positivity grid and the s=1 /
/// Z=1 specializations.
inline Value eval_var(const Value& x, const Rat& point, const Ring& target) {
  switch (x.ring->kind) {
    case RingKind::Laurent: {
      if (point == 0) {
        if (x.lo < 0 && !x.parts.empty()) throw std::domain_error("negative exponent at 0");
        Value acc = zero(target);
        if (!x.parts.empty() && x.lo <= 0 && -x.lo < static_cast<long>(x.parts.size()))
          acc = x.lo == 0 ? widen(x.parts[0], target) : widen(x.parts[static_cast<size_t>(-x.lo)], target);
        return acc;
      }
      Value acc = zero(target);
      Rat p = 1;
      for (long k = 0; k < x.lo; ++k) p *= point;
      for (long k = 0; k > x.lo; --k) p /= point;
      for (const auto& c : x.parts) {
        acc = add(acc, mul(widen(c, target), from_rat(target, p)));
        p *= point;
      }
      return acc;
    }
    case RingKind::RatFunc: {
      Rat d = poly::eval(x.den, point);
      if (d == 0) throw std::domain_error("denominator vanishes at sample point");
      return from_rat(target, poly::eval(x.num, point) / d);
    }
    case RingKind::Int:
    case RingKind::Rat:
    case RingKind::Complex: return widen(x, target);
    default: {
      Value v{target};
      v.lo = x.lo;
      v.parts.reserve(x.parts.size());
      for (const auto& c : x.parts) v.parts.push_back(eval_var(c, point, target->base));
      return v;
    }
  }
}

/// Sum of group-ring coefficients: the evaluation Z -> 1.
inline Value group_eval_one(const Value& x) {
  if (x.ring->kind != RingKind::Group) throw RingError("group_eval_one needs a group-ring value");
  Value acc = zero(x.ring->base);
  for (const auto& c : x.parts) acc = add(acc, c);
  return acc;
}

/// Ring obtained by specializing the distinguished variable to a rational
/// point (laurent:v:base -> fraction_closure-compatible base).
inline Ring eval_ring(const Ring& r) {
  switch (r->kind) {
    case RingKind::Laurent: return fraction_closure(r->base);
    case RingKind::RatFunc: return ring_rat();
    case RingKind::Int: return ring_rat();
    case RingKind::Rat:
    case RingKind::Complex: return r;
    case RingKind::Dual: return ring_dual(r->conj, eval_ring(r->base));
    case RingKind::Mat: return ring_mat(r->n, eval_ring(r->base));
    case RingKind::Group: return ring_group(r->n, eval_ring(r->base));
    default: throw RingError("cannot specialize this ring");
  }
}

}  // namespace sp2sigma
