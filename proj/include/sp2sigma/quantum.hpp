#pragma once

#include "sp2sigma/mat2.hpp"

namespace sp2sigma {

/// Laurent ring in s = q^{1/2} over the base, with sigma(s) = s^-1 acting
/// alongside the entrywise base involution; q is everywhere s^2.
inline Ring qring(const Ring& base) { return ring_laurent("s", base, /*qmode=*/true); }

/// Base value embedded as the constant coefficient.
inline Value q_scalar(const Ring& qr, const Value& x) {
  if (qr->kind != RingKind::Laurent || !qr->conj) throw RingError("not a quantum ring");
  Value v{qr};
  v.parts = {x};
  v.lo = 0;
  return laurent_canon(std::move(v));
}

/// s^k as a ring element; q^k is s_power(qr, 2k).
inline Value s_power(const Ring& qr, long k) { return var_power(qr, k); }

/// The lift [[A, sB], [s^-1 C, D]] of a classical matrix; sends the classical
/// symplectic group into the quantum one.
inline Mat2 lift_to_quantum(const Mat2& m) {
  Ring qr = qring(m.ring);
  return {qr, q_scalar(qr, m.A), mul(s_power(qr, 1), q_scalar(qr, m.B)),
          mul(s_power(qr, -1), q_scalar(qr, m.C)), q_scalar(qr, m.D)};
}

/// The six quantum symplectic equations: the classical ones with the second
/// term weighted by q^-1.
inline SymplecticReport quantum_symplectic_report(const Mat2& m) {
  const Ring& qr = m.ring;
  Value qinv = s_power(qr, -2);
  Value unit = one(qr);
  SymplecticReport rep{
      {sub(mul(sigma(m.A), m.C), mul(qinv, mul(sigma(m.C), m.A))),
       sub(mul(sigma(m.B), m.D), mul(qinv, mul(sigma(m.D), m.B))),
       sub(sub(mul(sigma(m.A), m.D), mul(qinv, mul(sigma(m.C), m.B))), unit)},
      {sub(mul(m.A, sigma(m.B)), mul(qinv, mul(m.B, sigma(m.A)))),
       sub(mul(m.C, sigma(m.D)), mul(qinv, mul(m.D, sigma(m.C)))),
       sub(sub(mul(m.A, sigma(m.D)), mul(qinv, mul(m.B, sigma(m.C)))), unit)},
  };
  auto all_zero = [](const std::array<Value, 3>& v) {
    return is_zero(v[0]) && is_zero(v[1]) && is_zero(v[2]);
  };
  rep.is_left = all_zero(rep.left_residuals);
  rep.is_right = all_zero(rep.right_residuals);
  rep.is_full = rep.is_left && rep.is_right;
  return rep;
}

/// Quantum determinant sigma(A)D - q^-1 sigma(C)B; equals 1 on quantum-full
/// members (it is the left-hand side of the third quantum equation plus 1).
inline Value quantum_det(const Mat2& m) {
  return sub(mul(sigma(m.A), m.D), mul(s_power(m.ring, -2), mul(sigma(m.C), m.B)));
}

/// [[sigma(D), -q sigma(B)], [-q^-1 sigma(C), sigma(A)]]; a two-sided inverse
/// of quantum-full matrices.
inline Mat2 quantum_adjugate(const Mat2& m) {
  return {m.ring, sigma(m.D), neg(mul(s_power(m.ring, 2), sigma(m.B))),
          neg(mul(s_power(m.ring, -2), sigma(m.C))), sigma(m.A)};
}

/// Left quantum plane relation q^-1 sigma(V2)V1 = sigma(V1)V2.
inline bool q_isotropic(const Vec2& v) {
  return equal(mul(s_power(v.v1.ring, -2), mul(sigma(v.v2), v.v1)), mul(sigma(v.v1), v.v2));
}

/// Specialize s = 1, landing in the fraction closure of the base ring.
inline Value specialize_s_one(const Value& x) {
  return eval_var(x, Rat(1), eval_ring(x.ring));
}

}  // namespace sp2sigma
