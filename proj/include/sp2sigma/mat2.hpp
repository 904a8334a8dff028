#pragma once

#include <array>

#include "sp2sigma/sampler.hpp"
#include "sp2sigma/value.hpp"

namespace sp2sigma {

/// 2x2 matrix over an involutive ring (A, sigma). Note that the entrywise
/// sigma used below is NOT a ring anti-involution of the matrix ring; it is
/// the coordinate operation the symplectic equations are written in.
struct Mat2 {
  Ring ring;
  Value A, B, C, D;
};

struct Vec2 {
  Value v1, v2;
};

inline Mat2 mat2_of(Value A, Value B, Value C, Value D) {
  Ring r = A.ring;
  return Mat2{r, std::move(A), std::move(B), std::move(C), std::move(D)};
}

inline Mat2 mat2_identity(const Ring& r) { return {r, one(r), zero(r), zero(r), one(r)}; }

inline Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
  return {x.ring, add(mul(x.A, y.A), mul(x.B, y.C)), add(mul(x.A, y.B), mul(x.B, y.D)),
          add(mul(x.C, y.A), mul(x.D, y.C)), add(mul(x.C, y.B), mul(x.D, y.D))};
}

inline Mat2 mat2_add(const Mat2& x, const Mat2& y) {
  return {x.ring, add(x.A, y.A), add(x.B, y.B), add(x.C, y.C), add(x.D, y.D)};
}

inline Mat2 mat2_sub(const Mat2& x, const Mat2& y) {
  return {x.ring, sub(x.A, y.A), sub(x.B, y.B), sub(x.C, y.C), sub(x.D, y.D)};
}

inline Mat2 mat2_neg(const Mat2& x) { return {x.ring, neg(x.A), neg(x.B), neg(x.C), neg(x.D)}; }

/// Entrywise sigma (no transpose).
inline Mat2 mat2_sigma(const Mat2& x) { return {x.ring, sigma(x.A), sigma(x.B), sigma(x.C), sigma(x.D)}; }

inline Mat2 mat2_transpose(const Mat2& x) { return {x.ring, x.A, x.C, x.B, x.D}; }

/// Left multiplication by a ring scalar.
inline Mat2 mat2_scale(const Value& s, const Mat2& x) {
  return {x.ring, mul(s, x.A), mul(s, x.B), mul(s, x.C), mul(s, x.D)};
}

inline bool mat2_is_zero(const Mat2& x) {
  return is_zero(x.A) && is_zero(x.B) && is_zero(x.C) && is_zero(x.D);
}

inline bool mat2_equal(const Mat2& x, const Mat2& y) { return mat2_is_zero(mat2_sub(x, y)); }

inline Mat2 mat2_widen(const Mat2& m, const Ring& target) {
  return {target, widen(m.A, target), widen(m.B, target), widen(m.C, target), widen(m.D, target)};
}

inline std::optional<Mat2> mat2_narrow(const Mat2& m, const Ring& target) {
  auto a = narrow(m.A, target), b = narrow(m.B, target), c = narrow(m.C, target), d = narrow(m.D, target);
  if (!a || !b || !c || !d) return std::nullopt;
  return Mat2{target, std::move(*a), std::move(*b), std::move(*c), std::move(*d)};
}

// --- symplectic form ----------------------------------------------------------

/// omega(v, w) = sigma(v)^T Omega_1 w with Omega_1 = [[0,1],[-1,0]].
inline Value omega(const Vec2& v, const Vec2& w) {
  return sub(mul(sigma(v.v1), w.v2), mul(sigma(v.v2), w.v1));
}

inline bool is_isotropic(const Vec2& v) {
  return equal(mul(sigma(v.v1), v.v2), mul(sigma(v.v2), v.v1));
}

inline Vec2 mat2_apply(const Mat2& m, const Vec2& v) {
  return {add(mul(m.A, v.v1), mul(m.B, v.v2)), add(mul(m.C, v.v1), mul(m.D, v.v2))};
}

// --- membership ----------------------------------------------------------------

/// The adjoint matrix [[sigma(D), -sigma(B)], [-sigma(C), sigma(A)]]; a
/// two-sided inverse for members of the full symplectic group.
inline Mat2 adjugate(const Mat2& m) {
  return {m.ring, sigma(m.D), neg(sigma(m.B)), neg(sigma(m.C)), sigma(m.A)};
}

struct SymplecticReport {
  std::array<Value, 3> left_residuals;
  std::array<Value, 3> right_residuals;
  bool is_left = false, is_right = false, is_full = false;
};

inline SymplecticReport symplectic_report(const Mat2& m) {
  const Value unit = one(m.ring);
  SymplecticReport rep{
      {sub(mul(sigma(m.A), m.C), mul(sigma(m.C), m.A)),
       sub(mul(sigma(m.B), m.D), mul(sigma(m.D), m.B)),
       sub(sub(mul(sigma(m.A), m.D), mul(sigma(m.C), m.B)), unit)},
      {sub(mul(m.A, sigma(m.B)), mul(m.B, sigma(m.A))),
       sub(mul(m.C, sigma(m.D)), mul(m.D, sigma(m.C))),
       sub(sub(mul(m.A, sigma(m.D)), mul(m.B, sigma(m.C))), unit)},
  };
  auto all_zero = [](const std::array<Value, 3>& v) {
    return is_zero(v[0]) && is_zero(v[1]) && is_zero(v[2]);
  };
  rep.is_left = all_zero(rep.left_residuals);
  rep.is_right = all_zero(rep.right_residuals);
  rep.is_full = rep.is_left && rep.is_right;
  return rep;
}

struct AEntryNotInvertible : RingError {
  AEntryNotInvertible() : RingError("entry A is not invertible (in the fraction closure)") {}
};

/// Shortcut membership test valid when A is invertible: the first left
/// equation, the first right equation and the left determinant equation
/// together imply full membership.
inline bool is_symplectic_via_A_inverse(const Mat2& m) {
  Ring closed = fraction_closure(m.ring);
  Mat2 w = mat2_widen(m, closed);
  if (!try_inverse(w.A)) throw AEntryNotInvertible();
  return is_zero(sub(mul(sigma(w.A), w.C), mul(sigma(w.C), w.A))) &&
         is_zero(sub(mul(w.A, sigma(w.B)), mul(w.B, sigma(w.A)))) &&
         equal(sub(mul(sigma(w.A), w.D), mul(sigma(w.C), w.B)), one(closed));
}

// --- determinants and traces ---------------------------------------------------

inline Value det_l(const Mat2& m) { return sub(mul(sigma(m.A), m.D), mul(sigma(m.C), m.B)); }
inline Value det_r(const Mat2& m) { return sub(mul(m.A, sigma(m.D)), mul(m.B, sigma(m.C))); }
inline Value trace(const Mat2& m) { return add(m.A, m.D); }
inline Value trace_sigma(const Mat2& m) { return add(sigma(m.A), m.D); }

// --- identities ----------------------------------------------------------------

/// General Cayley-Hamilton: sigma(M)M - sigma(tr M)M + [[sigma(det_l), [D,B]_l],
/// [[A,C]_l, det_l]] vanishes for EVERY M; returns the residual matrix.
inline Mat2 cayley_hamilton_residual(const Mat2& m) {
  Mat2 lhs = mat2_sub(mat2_mul(mat2_sigma(m), m), mat2_scale(sigma(trace(m)), m));
  Value dl = det_l(m);
  Mat2 tail{m.ring, sigma(dl), twisted_commutator_left(m.D, m.B), twisted_commutator_left(m.A, m.C), dl};
  return mat2_add(lhs, tail);
}

/// Eq. (5) residual sigma(M)M - sigma(tr M)M + Id; zero iff M is left symplectic.
inline Mat2 cayley_hamilton_symplectic_residual(const Mat2& m) {
  return mat2_add(mat2_sub(mat2_mul(mat2_sigma(m), m), mat2_scale(sigma(trace(m)), m)),
                  mat2_identity(m.ring));
}

inline bool ch_symplectic_holds(const Mat2& m) {
  return mat2_is_zero(cayley_hamilton_symplectic_residual(m));
}

/// trace(Adj(M)N) + trace(sigma(M)N) - sigma(trace(M)) trace(N); zero for all pairs.
inline Value classical_trace_identity_residual(const Mat2& m, const Mat2& n) {
  return sub(add(trace(mat2_mul(adjugate(m), n)), trace(mat2_mul(mat2_sigma(m), n))),
             mul(sigma(trace(m)), trace(n)));
}

struct NotRightSymplectic : RingError {
  NotRightSymplectic() : RingError("commutator trace identity needs right-symplectic arguments") {}
};

/// Fricke-style trace identity for the twisted commutator; inverses are taken
/// as adjugates, valid on the right symplectic monoid.
inline Value commutator_trace_identity_residual(const Mat2& x, const Mat2& y) {
  if (!symplectic_report(x).is_right || !symplectic_report(y).is_right) throw NotRightSymplectic();
  Mat2 xinv = adjugate(x), yinv = adjugate(y);
  Value lhs = trace(mat2_mul(mat2_mul(x, mat2_sigma(mat2_mul(mat2_sigma(y), mat2_sigma(xinv)))), yinv));
  Value tx = trace(x), ty = trace(y), tz = trace(mat2_mul(mat2_sigma(x), y));
  Value rhs = add(add(mul(tx, sigma(tx)), mul(ty, sigma(ty))),
                  sub(trace(mat2_mul(mat2_mul(x, mat2_sigma(mat2_mul(mat2_sigma(y), x))), mat2_sigma(y))),
                      mul(mul(tx, tz), sigma(ty))));
  return sub(lhs, rhs);
}

/// M^{sigma k}: the alternating product ending in M, e.g. M^{sigma 2} =
/// sigma(M) M and M^{sigma 3} = M sigma(M) M.
inline Mat2 sigma_power(const Mat2& m, int k) {
  if (k < 1) throw RingError("sigma_power needs k >= 1");
  Mat2 acc = m;
  for (int step = 2; step <= k; ++step) acc = mat2_mul(step % 2 == 0 ? mat2_sigma(m) : m, acc);
  return acc;
}

struct NotFullSymplectic : RingError {
  NotFullSymplectic() : RingError("operation requires a full symplectic matrix") {}
};

/// trace(M^{sigma k}) - U_k(trace M) with the Chebyshev-style recurrence
/// U_0 = 2, U_1 = tr M, U_{k+1} = tr(M)^(sigma-alternating) U_k - U_{k-1};
/// the multiplier is sigma(tr M) on odd steps, matching the alternating powers.
/// Valid over commutative involutive rings. Over noncommutative rings only the
/// odd steps of the recurrence close (see chebyshev_odd_step_residual); the
/// even steps would need Adj(sigma(M)) sigma(M) = Id, which membership of M
/// does not provide, and explicit Mat_2(Z) counterexamples exist.
inline Value chebyshev_trace_residual(const Mat2& m, int k) {
  if (!symplectic_report(m).is_full) throw NotFullSymplectic();
  Value t = trace(m);
  Value ukm1 = from_int(m.ring, 2);  // U_0
  Value uk = t;                      // U_1
  for (int step = 1; step < k; ++step) {
    Value next = sub(mul(step % 2 == 1 ? sigma(t) : t, uk), ukm1);
    ukm1 = uk;
    uk = next;
  }
  return sub(trace(sigma_power(m, k)), uk);
}

/// The provable half of the power recurrence over any ring: for odd k,
/// trace(M^{sigma(k+1)}) = sigma(tr M) trace(M^{sigma k}) - trace(M^{sigma(k-1)}).
/// (Follows from sigma(M)N = sigma(tr M)N - M^{-1}N applied to N = M^{sigma k}.)
inline Value chebyshev_odd_step_residual(const Mat2& m, int k) {
  if (k % 2 != 1) throw RingError("odd-step residual needs odd k");
  if (!symplectic_report(m).is_full) throw NotFullSymplectic();
  Value vkm1 = k == 1 ? from_int(m.ring, 2) : trace(sigma_power(m, k - 1));
  Value vk = trace(sigma_power(m, k));
  Value vkp1 = trace(sigma_power(m, k + 1));
  return sub(vkp1, sub(mul(sigma(trace(m)), vk), vkm1));
}

/// det_l(MN) expanded per the product formula, minus det_l(MN); zero always.
/// Expanding sigma(AE+BG)(CF+DH) - sigma(CE+DG)(AF+BH) and collecting on
/// sigma(E), sigma(G) gives the coefficient of [B,D]_left as sigma(G), so the
/// correction terms are weighted by the same column of N as the determinants.
inline Value det_product_residual(const Mat2& m, const Mat2& n) {
  const Value &E = n.A, &F = n.B, &G = n.C, &H = n.D;
  Value dl = det_l(m);
  Value rhs = add(sub(mul(mul(sigma(E), dl), H), mul(mul(sigma(G), sigma(dl)), F)),
                  add(mul(mul(sigma(E), twisted_commutator_left(m.A, m.C)), F),
                      mul(mul(sigma(G), twisted_commutator_left(m.B, m.D)), H)));
  return sub(det_l(mat2_mul(m, n)), rhs);
}

struct HypothesisViolated : RingError {
  using RingError::RingError;
};

/// Conjugation invariance of trace + sigma(trace) and of trace_sigma, under
/// the hypotheses: B, C and A + sigma(D) sigma-fixed, A + sigma(D) central
/// (centrality is checked against a probe set of ring samples), N full.
inline std::pair<Value, Value> trace_conjugation_checks(const Mat2& m, const Mat2& n) {
  if (!symplectic_report(n).is_full) throw HypothesisViolated("N is not full symplectic");
  if (!is_sigma_fixed(m.B)) throw HypothesisViolated("B is not sigma-fixed");
  if (!is_sigma_fixed(m.C)) throw HypothesisViolated("C is not sigma-fixed");
  Value central = add(m.A, sigma(m.D));
  if (!is_sigma_fixed(central)) throw HypothesisViolated("A + sigma(D) is not sigma-fixed");
  Rng rng(1);
  for (int probe = 0; probe < 8; ++probe) {
    Value x = random_value(m.ring, rng);
    if (!equal(mul(central, x), mul(x, central)))
      throw HypothesisViolated("A + sigma(D) is not central");
  }
  Mat2 conj = mat2_mul(mat2_mul(adjugate(n), m), n);
  auto tr_plus = [](const Mat2& w) { return add(trace(w), sigma(trace(w))); };
  return {sub(tr_plus(conj), tr_plus(m)), sub(trace_sigma(conj), trace_sigma(m))};
}

/// Exact first-order determinant formula over the dual extension:
/// det_l(M + eps Y) - (det_l(M) + eps trace_sigma(Adj(M) Y)).
inline Value first_order_det_residual(const Mat2& m, const Mat2& y) {
  Ring dr = dual_extend(m.ring);
  auto lift = [&](const Value& v, const Value& s) { return dual_of(dr, v, s); };
  Mat2 me{dr, lift(m.A, y.A), lift(m.B, y.B), lift(m.C, y.C), lift(m.D, y.D)};
  Value expect = lift(det_l(m), trace_sigma(mat2_mul(adjugate(m), y)));
  return sub(det_l(me), expect);
}

/// Manin commutativity equations (no sigma): AC = CA, BD = DB, AD - CB = DA - BC.
inline bool is_manin(const Mat2& m) {
  return equal(mul(m.A, m.C), mul(m.C, m.A)) && equal(mul(m.B, m.D), mul(m.D, m.B)) &&
         equal(sub(mul(m.A, m.D), mul(m.C, m.B)), sub(mul(m.D, m.A), mul(m.B, m.C)));
}

// --- sampler -------------------------------------------------------------------

/// Product of elementary generators E+(b), E-(c) (b, c sigma-fixed) and
/// D(u) = [[u, 0], [0, sigma(u)^-1]] for units u; always full symplectic and
/// deterministic in the seed.
inline Mat2 random_symplectic(const Ring& r, unsigned long seed, int word_length) {
  Rng rng(seed);
  Mat2 acc = mat2_identity(r);
  for (int step = 0; step < word_length; ++step) {
    switch (rand_range(rng, 0, 2)) {
      case 0: {
        Value b = random_sigma_fixed(r, rng);
        acc = mat2_mul(acc, Mat2{r, one(r), b, zero(r), one(r)});
        break;
      }
      case 1: {
        Value c = random_sigma_fixed(r, rng);
        acc = mat2_mul(acc, Mat2{r, one(r), zero(r), c, one(r)});
        break;
      }
      default: {
        Value u = random_unit(r, rng);
        acc = mat2_mul(acc, Mat2{r, u, zero(r), zero(r), *try_inverse(sigma(u))});
        break;
      }
    }
  }
  return acc;
}

}  // namespace sp2sigma
