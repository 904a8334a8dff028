#pragma once

#include <random>

#include "sp2sigma/value.hpp"

namespace sp2sigma {

/// Deterministic random source for property tests and fuzz suites. All suites
/// take an explicit seed; there is no ambient entropy.
using Rng = std::mt19937_64;

inline long rand_range(Rng& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

/// Small random element of any registered ring (coefficients in [-2, 2]).
inline Value random_value(const Ring& r, Rng& rng) {
  switch (r->kind) {
    case RingKind::Int:
    case RingKind::Rat: {
      Value v{r};
      v.a = Rat(rand_range(rng, -2, 2));
      if (r->kind == RingKind::Rat && rand_range(rng, 0, 3) == 0) v.a /= 2;
      return v;
    }
    case RingKind::Complex: return complex_of(Rat(rand_range(rng, -2, 2)), Rat(rand_range(rng, -2, 2)));
    case RingKind::RatFunc: {
      Value v = from_rat(r, Rat(rand_range(rng, -2, 2)));
      return add(v, mul(from_rat(r, Rat(rand_range(rng, -2, 2))), var_power(r, rand_range(rng, 0, 2))));
    }
    case RingKind::Dual: return dual_of(r, random_value(r->base, rng), random_value(r->base, rng));
    case RingKind::Mat: {
      Value v = zero(r);
      for (auto& e : v.parts) e = random_value(r->base, rng);
      return v;
    }
    case RingKind::Group: {
      Value v = zero(r);
      for (auto& e : v.parts) e = random_value(r->base, rng);
      return v;
    }
    case RingKind::Laurent: {
      Value v = zero(r);
      long terms = rand_range(rng, 1, 2);
      for (long k = 0; k < terms; ++k) {
        Value t{r};
        t.lo = rand_range(rng, -1, 2);
        t.parts = {random_value(r->base, rng)};
        v = add(v, t);
      }
      return v;
    }
  }
  throw std::logic_error("unreachable ring kind");
}

/// sigma-fixed element: x + sigma(x) for a small random x.
inline Value random_sigma_fixed(const Ring& r, Rng& rng) {
  Value x = random_value(r, rng);
  return add(x, sigma(x));
}

/// A unit of the ring, constructed per kind so try_inverse always succeeds:
/// +-1, small nonzero rationals, nonzero Gaussian rationals, dual values with
/// unit real part, signed permutation matrices, +-Z^k, +-v^k times a base unit.
inline Value random_unit(const Ring& r, Rng& rng) {
  switch (r->kind) {
    case RingKind::Int: return from_int(r, rand_range(rng, 0, 1) ? 1 : -1);
    case RingKind::Rat: {
      Rat q(rand_range(rng, 1, 3), rand_range(rng, 1, 3));
      if (rand_range(rng, 0, 1)) q = -q;
      return from_rat(r, q);
    }
    case RingKind::Complex: {
      switch (rand_range(rng, 0, 3)) {
        case 0: return complex_of(1, 0);
        case 1: return complex_of(-1, 0);
        case 2: return complex_of(0, 1);
        default: return complex_of(Rat(rand_range(rng, 1, 2)), Rat(rand_range(rng, -2, 2)));
      }
    }
    case RingKind::RatFunc: {
      Value u = from_rat(r, Rat(rand_range(rng, 0, 1) ? 1 : -1));
      return mul(u, var_power(r, rand_range(rng, -1, 1)));
    }
    case RingKind::Dual: return dual_of(r, random_unit(r->base, rng), random_value(r->base, rng));
    case RingKind::Mat: {
      // signed permutation of base units
      std::vector<int> perm(static_cast<size_t>(r->n));
      for (int i = 0; i < r->n; ++i) perm[static_cast<size_t>(i)] = i;
      for (int i = r->n - 1; i > 0; --i)
        std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(rand_range(rng, 0, i))]);
      Value v = zero(r);
      for (int i = 0; i < r->n; ++i) {
        Value u = random_unit(r->base, rng);
        mat_at(v, i, perm[static_cast<size_t>(i)]) = rand_range(rng, 0, 1) ? u : neg(u);
      }
      return v;
    }
    case RingKind::Group: {
      Value v = group_gen_power(r, rand_range(rng, 0, r->n - 1));
      Value u = random_unit(r->base, rng);
      Value scaled = zero(r);
      for (size_t i = 0; i < v.parts.size(); ++i) scaled.parts[i] = mul(v.parts[i], u);
      return scaled;
    }
    case RingKind::Laurent: {
      Value v{r};
      v.lo = rand_range(rng, -1, 1);
      v.parts = {random_unit(r->base, rng)};
      return v;
    }
  }
  throw std::logic_error("unreachable ring kind");
}

}  // namespace sp2sigma
