#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "sp2sigma/rational.hpp"

namespace sp2sigma {

/// Kinds of registered involutive rings (A, sigma).
enum class RingKind {
  Int,      ///< integers, sigma = id
  Rat,      ///< rationals, sigma = id
  Complex,  ///< rationals adjoined i, sigma = complex conjugation
  Dual,     ///< base[eps]/(eps^2); sigma fixes eps ("triv") or negates it ("conj")
  Mat,      ///< n x n matrices over base, sigma = transpose o entrywise sigma
  Group,    ///< base[Z/nZ], sigma induced by g -> g^-1 composed with entrywise sigma
  Laurent,  ///< base[v, v^-1]; sigma acts entrywise, and inverts v in q-mode
  RatFunc,  ///< univariate rational functions over the rationals, sigma = id.
            ///< Internal fraction-field carrier for Laurent rings; not part of
            ///< the public ring-spec grammar but printable/parsable for debugging.
};

struct RingDesc;
using Ring = std::shared_ptr<const RingDesc>;

/// Immutable description of an involutive ring. Values carry a Ring pointer;
/// descriptor equality is structural.
struct RingDesc {
  RingKind kind = RingKind::Int;
  int n = 0;              ///< matrix size (Mat) or group order (Group)
  bool conj = false;      ///< Dual: sigma negates the eps part; Laurent: q-mode (sigma inverts the variable)
  std::string var;        ///< Laurent / RatFunc variable name
  Ring base;              ///< element ring for Dual, Mat, Group, Laurent
};

inline Ring make_ring(RingDesc d) { return std::make_shared<const RingDesc>(std::move(d)); }

inline Ring ring_int() {
  static Ring r = make_ring({RingKind::Int});
  return r;
}
inline Ring ring_rat() {
  static Ring r = make_ring({RingKind::Rat});
  return r;
}
inline Ring ring_complex() {
  static Ring r = make_ring({RingKind::Complex});
  return r;
}
inline Ring ring_dual(bool conj, Ring base = ring_rat()) {
  return make_ring({RingKind::Dual, 0, conj, "", std::move(base)});
}
inline Ring ring_mat(int n, Ring base) {
  if (n < 1) throw std::invalid_argument("matrix ring needs n >= 1");
  return make_ring({RingKind::Mat, n, false, "", std::move(base)});
}
inline Ring ring_group(int n, Ring base) {
  if (n < 2) throw std::invalid_argument("group ring needs cyclic order n >= 2");
  return make_ring({RingKind::Group, n, false, "", std::move(base)});
}
inline Ring ring_laurent(std::string var, Ring base, bool qmode = false) {
  return make_ring({RingKind::Laurent, 0, qmode, std::move(var), std::move(base)});
}
inline Ring ring_ratfunc(std::string var) {
  return make_ring({RingKind::RatFunc, 0, false, std::move(var), nullptr});
}

inline bool same_ring(const Ring& a, const Ring& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->n != b->n || a->conj != b->conj || a->var != b->var) return false;
  if (!a->base && !b->base) return true;
  return same_ring(a->base, b->base);
}

/// The ring A[eps]/(eps^2) with sigma(a, alpha) = (sigma(a), sigma(alpha)).
/// Used as the exact carrier of first-order (dual-number) computations.
inline Ring dual_extend(const Ring& base) { return ring_dual(/*conj=*/false, base); }

/// Canonical spec-string printer; inverse of parse_ring_spec.
inline std::string ring_spec(const Ring& r) {
  switch (r->kind) {
    case RingKind::Int: return "int";
    case RingKind::Rat: return "rat";
    case RingKind::Complex: return "complex-conj";
    case RingKind::Dual: {
      std::string head = r->conj ? "dual:conj" : "dual:triv";
      if (r->base->kind == RingKind::Rat) return head;
      return head + ":" + ring_spec(r->base);
    }
    case RingKind::Mat: return "mat:" + std::to_string(r->n) + ":" + ring_spec(r->base);
    case RingKind::Group: return "group:Z" + std::to_string(r->n) + ":" + ring_spec(r->base);
    case RingKind::Laurent:
      return std::string(r->conj ? "qlaurent:" : "laurent:") + r->var + ":" + ring_spec(r->base);
    case RingKind::RatFunc: return "ratfunc:" + r->var;
  }
  throw std::logic_error("unreachable ring kind");
}

struct RingSpecError : std::runtime_error {
  size_t offset;
  RingSpecError(const std::string& msg, size_t off)
      : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

namespace detail {

class RingSpecParser {
 public:
  explicit RingSpecParser(const std::string& text) : text_(text) {}

  Ring parse() {
    Ring r = ring();
    if (pos_ != text_.size()) throw RingSpecError("trailing input in ring spec", pos_);
    return r;
  }

 private:
  Ring ring() {
    size_t start = pos_;
    std::string tok = token();
    if (tok == "int") return ring_int();
    if (tok == "rat") return ring_rat();
    if (tok == "complex-conj") return ring_complex();
    if (tok == "dual") {
      std::string flavor = token();
      if (flavor != "triv" && flavor != "conj")
        throw RingSpecError("dual flavor must be 'triv' or 'conj'", start);
      Ring base = at_end() ? ring_rat() : ring();
      return ring_dual(flavor == "conj", base);
    }
    if (tok == "mat") {
      int n = integer();
      if (n < 1) throw RingSpecError("matrix size must be >= 1", start);
      return ring_mat(n, ring());
    }
    if (tok == "group") {
      std::string g = token();
      if (g.size() < 2 || g[0] != 'Z') throw RingSpecError("group must be Z<n>", start);
      int n = 0;
      try {
        n = std::stoi(g.substr(1));
      } catch (const std::exception&) {
        throw RingSpecError("bad cyclic order in group spec", start);
      }
      if (n < 2) throw RingSpecError("unsupported group order (need n >= 2)", start);
      Ring base = at_end() ? ring_int() : ring();
      return ring_group(n, base);
    }
    if (tok == "laurent" || tok == "qlaurent") {
      std::string var = token();
      if (var.empty() || !std::isalpha(static_cast<unsigned char>(var[0])))
        throw RingSpecError("laurent variable must be an identifier", start);
      Ring base = at_end() ? ring_int() : ring();
      return ring_laurent(var, base, tok == "qlaurent");
    }
    if (tok == "ratfunc") {
      std::string var = token();
      if (var.empty()) throw RingSpecError("ratfunc needs a variable", start);
      return ring_ratfunc(var);
    }
    throw RingSpecError("unknown ring '" + tok + "'", start);
  }

  bool at_end() const { return pos_ >= text_.size(); }

  std::string token() {
    if (at_end()) throw RingSpecError("unexpected end of ring spec", pos_);
    size_t next = text_.find(':', pos_);
    std::string tok = text_.substr(pos_, next == std::string::npos ? std::string::npos : next - pos_);
    pos_ = next == std::string::npos ? text_.size() : next + 1;
    if (tok.empty()) throw RingSpecError("empty component in ring spec", pos_);
    return tok;
  }

  int integer() {
    size_t start = pos_;
    std::string tok = token();
    try {
      return std::stoi(tok);
    } catch (const std::exception&) {
      throw RingSpecError("expected an integer", start);
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace detail

inline Ring parse_ring_spec(const std::string& text) {
  return detail::RingSpecParser(text).parse();
}

/// True when the ring's multiplication is commutative (cyclic group rings are
/// commutative; matrix rings of size >= 2 are not).
inline bool is_commutative(const Ring& r) {
  switch (r->kind) {
    case RingKind::Int:
    case RingKind::Rat:
    case RingKind::Complex:
    case RingKind::RatFunc: return true;
    case RingKind::Dual:
    case RingKind::Group:
    case RingKind::Laurent: return is_commutative(r->base);
    case RingKind::Mat: return r->n == 1 && is_commutative(r->base);
  }
  return false;
}

/// True when 2 is invertible (project_sigma is available).
inline bool has_half(const Ring& r) {
  switch (r->kind) {
    case RingKind::Int: return false;
    case RingKind::Rat:
    case RingKind::Complex:
    case RingKind::RatFunc: return true;
    default: return has_half(r->base);
  }
}

/// Widens every scalar leaf to its fraction field: int -> rat, Laurent ->
/// rational functions. Composite structure is preserved. Mutation and angle
/// formulas are evaluated in this ring and narrowed back afterwards.
inline Ring fraction_closure(const Ring& r) {
  switch (r->kind) {
    case RingKind::Int: return ring_rat();
    case RingKind::Rat:
    case RingKind::Complex:
    case RingKind::RatFunc: return r;
    case RingKind::Dual: return ring_dual(r->conj, fraction_closure(r->base));
    case RingKind::Mat: return ring_mat(r->n, fraction_closure(r->base));
    case RingKind::Group: return ring_group(r->n, fraction_closure(r->base));
    case RingKind::Laurent:
      if (r->conj) return r;  // q-mode rings only ever need unit inverses
      if (r->base->kind == RingKind::Int || r->base->kind == RingKind::Rat)
        return ring_ratfunc(r->var);
      return ring_laurent(r->var, fraction_closure(r->base), r->conj);
  }
  throw std::logic_error("unreachable ring kind");
}

}  // namespace sp2sigma
