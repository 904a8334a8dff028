#pragma once

#include <vector>

#include "sp2sigma/value.hpp"

namespace sp2sigma {

/// Sample points used for positivity of Laurent / rational-function payloads.
/// "Positive definite for all t" is semialgebraic and the source material never
/// algorithmizes it; this grid is a falsifier, documented as incomplete.
inline const std::vector<Rat>& positivity_grid() {
  static const std::vector<Rat> grid = {Rat(-2), Rat(-1), Rat(-1, 2), Rat(1, 2), Rat(1), Rat(2)};
  return grid;
}

namespace detail {

/// True when the exact rational symmetric matrix is positive definite:
/// Sylvester's criterion via pivot signs of an LU sweep without row exchanges
/// (pivot_k = M_k / M_{k-1}, so all leading principal minors positive iff all
/// pivots positive; a vanishing pivot forces a vanishing minor).
inline bool rational_pd(std::vector<std::vector<Rat>> m) {
  const size_t n = m.size();
  for (size_t col = 0; col < n; ++col) {
    if (m[col][col] <= 0) return false;
    for (size_t row = col + 1; row < n; ++row) {
      Rat f = m[row][col] / m[col][col];
      if (f == 0) continue;
      for (size_t j = col; j < n; ++j) m[row][j] -= f * m[col][j];
    }
  }
  return true;
}

/// Flattens a matrix value with int/rat scalar entries to exact rationals.
inline std::vector<std::vector<Rat>> to_rational_matrix(const Value& m) {
  const int n = m.ring->n;
  std::vector<std::vector<Rat>> out(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Value& e = mat_at(m, i, j);
      if (e.ring->kind != RingKind::Int && e.ring->kind != RingKind::Rat)
        throw RingError("matrix entries are not rational scalars");
      out[static_cast<size_t>(i)][static_cast<size_t>(j)] = e.a;
    }
  return out;
}

inline bool matrix_value_pd(const Value& m) {
  const Ring& base = m.ring->base;
  if (base->kind == RingKind::Int || base->kind == RingKind::Rat)
    return rational_pd(to_rational_matrix(m));
  if (base->kind == RingKind::Laurent || base->kind == RingKind::RatFunc) {
    Ring sample_ring = ring_mat(m.ring->n, ring_rat());
    for (const Rat& t : positivity_grid()) {
      Value at;
      try {
        at = eval_var(m, t, sample_ring);
      } catch (const std::domain_error&) {
        return false;  // denominator vanishes on the grid: conservatively out
      }
      if (!rational_pd(to_rational_matrix(at))) return false;
    }
    return true;
  }
  throw RingError("positivity is not defined for matrices over " + ring_spec(base));
}

}  // namespace detail

/// Membership test for the ring's positive cone A+^sigma. Per-ring rules:
/// int/rat: x > 0; complex: real and positive; dual:triv: positive real part;
/// dual:conj: sigma-fixed with positive real part; matrices: sigma-fixed and
/// positive definite (exact Sylvester over the rationals, or the sample grid
/// for Laurent entries); group rings: positive definiteness of the Hurley
/// image; Laurent scalars: positive on the sample grid.
inline bool is_positive(const Value& x) {
  switch (x.ring->kind) {
    case RingKind::Int:
    case RingKind::Rat: return x.a > 0;
    case RingKind::Complex: return x.b == 0 && x.a > 0;
    case RingKind::Dual:
      if (x.ring->conj && !is_zero(x.parts[1])) return false;
      return is_positive(x.parts[0]);
    case RingKind::Laurent:
    case RingKind::RatFunc: {
      for (const Rat& t : positivity_grid()) {
        try {
          Value at = eval_var(x, t, eval_ring(x.ring));
          if (!is_positive(at)) return false;
        } catch (const std::domain_error&) {
          return false;
        }
      }
      return true;
    }
    case RingKind::Mat:
      if (!is_sigma_fixed(x)) return false;
      return detail::matrix_value_pd(x);
    case RingKind::Group:
      if (!is_sigma_fixed(x)) return false;
      return detail::matrix_value_pd(hurley_embed(x));
  }
  throw std::logic_error("unreachable ring kind");
}

}  // namespace sp2sigma
