#include <catch2/catch_amalgamated.hpp>

#include "sp2sigma/literal.hpp"
#include "sp2sigma/quantum.hpp"

using namespace sp2sigma;

namespace {
const std::vector<std::string>& base_specs() {
  static const std::vector<std::string> specs = {
      "int", "rat", "complex-conj", "dual:conj", "mat:2:int", "group:Z5:int",
  };
  return specs;
}
}  // namespace

TEST_CASE("quantum ring basics: q commutes and sigma(q) = q^-1") {
  Ring qr = qring(parse_ring_spec("mat:2:int"));
  Rng rng(3);
  Ring base = parse_ring_spec("mat:2:int");
  Value q = s_power(qr, 2);
  for (int trial = 0; trial < 20; ++trial) {
    Value x = q_scalar(qr, random_value(base, rng));
    CHECK(equal(mul(q, x), mul(x, q)));
  }
  CHECK(equal(sigma(q), s_power(qr, -2)));
  CHECK(equal(sigma(s_power(qr, 1)), s_power(qr, -1)));
  // sigma also acts on coefficients.
  Ring qc = qring(ring_complex());
  Value z = mul(s_power(qc, 3), q_scalar(qc, complex_of(Rat(0), Rat(1))));
  CHECK(equal(sigma(z), mul(s_power(qc, -3), q_scalar(qc, complex_of(Rat(0), Rat(-1))))));
}

TEST_CASE("lift of classical symplectic samples is quantum-full with det 1") {
  for (const auto& spec : base_specs()) {
    Ring r = parse_ring_spec(spec);
    for (unsigned long seed = 1; seed <= 100; ++seed) {
      Mat2 m = random_symplectic(r, seed, 4);
      Mat2 qm = lift_to_quantum(m);
      INFO(spec << " seed " << seed);
      REQUIRE(quantum_symplectic_report(qm).is_full);
      CHECK(equal(quantum_det(qm), one(qm.ring)));
      Mat2 adj = quantum_adjugate(qm);
      CHECK(mat2_equal(mat2_mul(adj, qm), mat2_identity(qm.ring)));
      CHECK(mat2_equal(mat2_mul(qm, adj), mat2_identity(qm.ring)));
    }
  }
}

TEST_CASE("s = 1 specialization recovers the classical residuals") {
  for (const auto& spec : base_specs()) {
    Ring r = parse_ring_spec(spec);
    Rng rng(17);
    Ring qr = qring(r);
    Ring closed = eval_ring(qr);
    for (int trial = 0; trial < 40; ++trial) {
      Mat2 m{r, random_value(r, rng), random_value(r, rng), random_value(r, rng),
             random_value(r, rng)};
      Mat2 qm{qr, q_scalar(qr, m.A), q_scalar(qr, m.B), q_scalar(qr, m.C), q_scalar(qr, m.D)};
      auto qrep = quantum_symplectic_report(qm);
      auto crep = symplectic_report(m);
      for (int i = 0; i < 3; ++i) {
        CHECK(equal(specialize_s_one(qrep.left_residuals[i]), widen(crep.left_residuals[i], closed)));
        CHECK(equal(specialize_s_one(qrep.right_residuals[i]), widen(crep.right_residuals[i], closed)));
      }
      CHECK(equal(specialize_s_one(quantum_det(qm)), widen(det_l(m), closed)));
    }
  }
}

TEST_CASE("quantum plane preservation on probe vectors") {
  for (const auto& spec : base_specs()) {
    Ring r = parse_ring_spec(spec);
    Ring qr = qring(r);
    std::vector<Vec2> probes = {{one(qr), zero(qr)}, {zero(qr), one(qr)}};
    for (const auto& v : probes) CHECK(q_isotropic(v));
    for (unsigned long seed = 1; seed <= 30; ++seed) {
      Mat2 qm = lift_to_quantum(random_symplectic(r, seed, 3));
      for (const auto& v : probes) {
        INFO(spec << " seed " << seed);
        CHECK(q_isotropic(mat2_apply(qm, v)));
      }
    }
  }
}

TEST_CASE("spot examples") {
  SECTION("identity is quantum-full") {
    Ring qr = qring(ring_int());
    CHECK(quantum_symplectic_report(mat2_identity(qr)).is_full);
    CHECK(equal(quantum_det(mat2_identity(qr)), one(qr)));
  }

  SECTION("lift of [[1,b],[0,1]] with b sigma-fixed") {
    Ring r = parse_ring_spec("mat:2:int");
    Rng rng(5);
    Mat2 m{r, one(r), random_sigma_fixed(r, rng), zero(r), one(r)};
    CHECK(quantum_symplectic_report(lift_to_quantum(m)).is_full);
  }

  SECTION("unlifted [[2,1],[1,1]] fails the first quantum equation by 2 - 2q^-1") {
    Ring r = ring_int();
    Ring qr = qring(r);
    Mat2 qm{qr, q_scalar(qr, from_int(r, 2)), one(qr), one(qr), one(qr)};
    auto rep = quantum_symplectic_report(qm);
    CHECK_FALSE(rep.is_full);
    Value expect = sub(q_scalar(qr, from_int(r, 2)), mul(s_power(qr, -2), q_scalar(qr, from_int(r, 2))));
    CHECK(equal(rep.left_residuals[0], expect));
    // ...while the lift [[2, s],[s^-1, 1]] is quantum-full.
    Mat2 lifted = lift_to_quantum(Mat2{r, from_int(r, 2), one(r), one(r), one(r)});
    CHECK(equal(lifted.B, s_power(qr, 1)));
    CHECK(equal(lifted.C, s_power(qr, -1)));
    CHECK(quantum_symplectic_report(lifted).is_full);
  }

  SECTION("(1, s) is not q-isotropic") {
    Ring qr = qring(ring_int());
    CHECK_FALSE(q_isotropic(Vec2{one(qr), s_power(qr, 1)}));
  }

  SECTION("diagonal scaling keeps quantum det 1") {
    Ring r = ring_complex();
    Rng rng(7);
    Value u = random_unit(r, rng);
    Mat2 m{r, u, zero(r), zero(r), *try_inverse(sigma(u))};
    CHECK(equal(quantum_det(lift_to_quantum(m)), one(qring(r))));
  }
}
