#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sp2sigma/cluster.hpp"
#include "sp2sigma/positivity.hpp"

namespace sp2sigma {

struct ExitsRing : RingError {
  ExitsRing() : RingError("mutated value does not lie in the original ring") {}
};
struct CNotSigmaFixed : RingError {
  CNotSigmaFixed() : RingError("frozen entry C must be sigma-fixed") {}
};
struct ShadowConstraintViolated : RingError {
  ShadowConstraintViolated() : RingError("dual conj split rule needs shadow parts summing to zero") {}
};

/// Generalized Markov triple: the three edge values (A, B, C) of the
/// once-punctured-torus seed, A on the diagonal.
struct MarkovTriple {
  Value A, B, C;
};

inline MarkovTriple rotate_left(const MarkovTriple& t) { return {t.B, t.C, t.A}; }
inline MarkovTriple rotate_right(const MarkovTriple& t) { return {t.C, t.A, t.B}; }

inline MarkovTriple widen_triple(const MarkovTriple& t, const Ring& target) {
  return {widen(t.A, target), widen(t.B, target), widen(t.C, target)};
}

inline bool triple_equal(const MarkovTriple& x, const MarkovTriple& y) {
  return equal(x.A, y.A) && equal(x.B, y.B) && equal(x.C, y.C);
}

/// The six noncommutative torus angles, starting with sigma(A^-1) B sigma(C^-1)
/// and alternating between the two cyclic orientations.
inline std::array<Value, 6> torus_angles(const MarkovTriple& t) {
  Ring closed = fraction_closure(t.A.ring);
  MarkovTriple w = widen_triple(t, closed);
  Value ai = inverted(w.A), bi = inverted(w.B), ci = inverted(w.C);
  return {mul(mul(sigma(ai), w.B), sigma(ci)), mul(mul(sigma(bi), w.C), sigma(ai)),
          mul(mul(sigma(ci), w.A), sigma(bi)), mul(mul(sigma(ci), w.B), sigma(ai)),
          mul(mul(sigma(bi), w.A), sigma(ci)), mul(mul(sigma(ai), w.C), sigma(bi))};
}

/// Generalized Markov function: the sum of the six torus angles (that is, the
/// total angle at the puncture). Invariant under mutation.
inline Value markov_function(const MarkovTriple& t) {
  auto angles = torus_angles(t);
  Value acc = angles[0];
  for (size_t i = 1; i < angles.size(); ++i) acc = add(acc, angles[i]);
  return acc;
}

struct AdmissibilityReport {
  std::array<bool, 3> integral{};    ///< entry lies in the integral subring
  std::array<bool, 3> invertible{};  ///< entry invertible in the fraction closure
  std::array<bool, 6> positive{};    ///< angle lies in the positivity cone
  bool ok = false;
};

inline AdmissibilityReport is_admissible(const MarkovTriple& t) {
  AdmissibilityReport rep;
  Ring closed = fraction_closure(t.A.ring);
  const Value* entries[3] = {&t.A, &t.B, &t.C};
  bool all = true;
  for (int i = 0; i < 3; ++i) {
    rep.integral[i] = is_integral(*entries[i]);
    rep.invertible[i] = try_inverse(widen(*entries[i], closed)).has_value();
    all = all && rep.integral[i] && rep.invertible[i];
  }
  if (!rep.invertible[0] || !rep.invertible[1] || !rep.invertible[2]) return rep;
  auto angles = torus_angles(t);
  for (int i = 0; i < 6; ++i) {
    rep.positive[i] = is_positive(angles[i]);
    all = all && rep.positive[i];
  }
  rep.ok = all;
  return rep;
}

/// Mutation at the diagonal: (A, B, C) -> (A', C, sigma(B)) with
/// A' = sigma(C) A^-1 sigma(C) + B sigma(A^-1) B. Other positions rotate that
/// slot into first place, mutate, and rotate back, so the mutated value stays
/// at its position. The result is narrowed back to the entry ring; a value
/// that cannot be narrowed is reported as ExitsRing.
inline MarkovTriple mutate(const MarkovTriple& t, int pos) {
  Ring r = t.A.ring;
  Ring closed = fraction_closure(r);
  MarkovTriple w = widen_triple(t, closed);
  for (int i = 0; i < pos; ++i) w = rotate_left(w);
  Value fresh = add(mul(mul(sigma(w.C), inverted(w.A)), sigma(w.C)),
                    mul(mul(w.B, sigma(inverted(w.A))), w.B));
  if (!try_inverse(fresh)) throw NotInvertible();
  MarkovTriple out{std::move(fresh), w.C, sigma(w.B)};
  for (int i = 0; i < pos; ++i) out = rotate_right(out);
  auto a = narrow(out.A, r), b = narrow(out.B, r), c = narrow(out.C, r);
  if (!a || !b || !c) throw ExitsRing();
  return {std::move(*a), std::move(*b), std::move(*c)};
}

/// Same mutation, alternate indexing convention: the result is left in the
/// rotated frame, i.e. the fresh value always lands in the first slot as
/// (A', C, sigma(B)). Value multisets of trees generated under either
/// convention agree; cross-checked in the tests.
inline MarkovTriple mutate_reshuffled(const MarkovTriple& t, int pos) {
  MarkovTriple out = mutate(t, pos);
  for (int i = 0; i < pos; ++i) out = rotate_left(out);
  return out;
}

// --- tree enumeration -----------------------------------------------------------

struct MarkovTreeNode {
  std::string word;  ///< mutation positions from the root, e.g. "021"
  MarkovTriple triple;
  AdmissibilityReport report;
  bool admissible = false;
  bool frontier_failure = false;  ///< some mutation from here failed (NotInvertible/ExitsRing)
};

struct MarkovTree {
  MarkovTriple root;
  Value F0;
  std::vector<MarkovTreeNode> nodes;  ///< word-lexicographic order, root first
};

/// Breadth-first expansion of mutation words with no immediately repeated
/// position; with dedup, a node whose triple was already seen is kept but not
/// expanded. Failed mutations leaf-mark the parent instead of aborting.
inline MarkovTree enumerate_tree(const MarkovTriple& root, int depth, bool dedup = false) {
  MarkovTree tree{root, markov_function(root), {}};
  std::set<std::string> seen;
  auto key = [](const MarkovTriple& t) {
    // canonical serialization: ring spec + the three payloads
    std::string k = ring_spec(t.A.ring);
    std::function<void(const Value&)> walk = [&](const Value& v) {
      k += ";" + rat_to_string(v.a) + "," + rat_to_string(v.b) + "," + std::to_string(v.lo);
      for (const auto& c : v.num) k += "n" + rat_to_string(c);
      for (const auto& c : v.den) k += "d" + rat_to_string(c);
      for (const auto& p : v.parts) walk(p);
    };
    for (const Value* e : {&t.A, &t.B, &t.C}) walk(*e);
    return k;
  };
  auto make_node = [](std::string word, MarkovTriple t) {
    AdmissibilityReport rep = is_admissible(t);
    return MarkovTreeNode{std::move(word), std::move(t), rep, rep.ok, false};
  };
  std::deque<size_t> queue;
  tree.nodes.push_back(make_node("", root));
  if (dedup) seen.insert(key(root));
  queue.push_back(0);
  while (!queue.empty()) {
    size_t idx = queue.front();
    queue.pop_front();
    std::string word = tree.nodes[idx].word;
    if (static_cast<int>(word.size()) >= depth) continue;
    for (int pos = 0; pos < 3; ++pos) {
      if (!word.empty() && word.back() - '0' == pos) continue;
      MarkovTriple child;
      try {
        child = mutate(tree.nodes[idx].triple, pos);
      } catch (const RingError&) {
        tree.nodes[idx].frontier_failure = true;
        continue;
      }
      bool expand = true;
      if (dedup) {
        std::string k = key(child);
        if (seen.count(k)) expand = false;
        seen.insert(k);
      }
      tree.nodes.push_back(make_node(word + static_cast<char>('0' + pos), child));
      if (expand) queue.push_back(tree.nodes.size() - 1);
    }
  }
  std::sort(tree.nodes.begin(), tree.nodes.end(),
            [](const MarkovTreeNode& x, const MarkovTreeNode& y) { return x.word < y.word; });
  return tree;
}

// --- the Fibonacci branch ---------------------------------------------------------

/// Phi(A, B, C) = sigma(C^-1) A sigma(B^-1) + sigma(A^-1) B sigma(C^-1)
/// + B^-1 sigma(C) A^-1; invariant along the branch that freezes C.
inline Value phi_frozen(const MarkovTriple& t) {
  Ring closed = fraction_closure(t.A.ring);
  MarkovTriple w = widen_triple(t, closed);
  Value ai = inverted(w.A), bi = inverted(w.B), ci = inverted(w.C);
  return add(add(mul(mul(sigma(ci), w.A), sigma(bi)), mul(mul(sigma(ai), w.B), sigma(ci))),
             mul(mul(bi, sigma(w.C)), ai));
}

struct FibonacciBranch {
  Value phi;                            ///< Phi of the root (branch invariant)
  std::vector<Value> by_mutation;       ///< F_0 = A, F_1 = B, F_{k+1} = fresh value of step k
  std::vector<Value> by_recurrence;     ///< same sequence from F_{i+1} = F_i Phi C - sigma(prev first)
  std::vector<MarkovTriple> triples;    ///< T_0 = root, T_{k+1} = (sigma(B_k), A'_k, C)
};

/// Repeated mutation at the first slot with C frozen: (A, B, C) ->
/// (sigma(B), A', C). Requires C sigma-fixed. Values are computed in the
/// fraction closure.
inline FibonacciBranch fibonacci_branch(const MarkovTriple& t, int n) {
  Ring closed = fraction_closure(t.A.ring);
  MarkovTriple w = widen_triple(t, closed);
  if (!is_sigma_fixed(w.C)) throw CNotSigmaFixed();
  FibonacciBranch br;
  br.phi = phi_frozen(t);
  br.triples = {w};
  br.by_mutation = {w.A, w.B};
  br.by_recurrence = {w.A, w.B};
  for (int i = 1; i + 1 < n; ++i) {
    const MarkovTriple& cur = br.triples.back();
    Value fresh = add(mul(mul(sigma(cur.C), inverted(cur.A)), sigma(cur.C)),
                      mul(mul(cur.B, sigma(inverted(cur.A))), cur.B));
    br.by_mutation.push_back(fresh);
    // F_{i+1} = F_i Phi C - sigma(first entry of T_{i-1}).
    br.by_recurrence.push_back(sub(mul(mul(br.by_recurrence.back(), br.phi), w.C),
                                   sigma(br.triples[static_cast<size_t>(i) - 1].A)));
    br.triples.push_back({sigma(cur.B), fresh, cur.C});
  }
  return br;
}

/// Rotates the triple until the sigma-fixed entry sits in the frozen C slot.
inline std::optional<MarkovTriple> rotate_to_sigma_fixed_C(const MarkovTriple& t) {
  MarkovTriple cur = t;
  for (int i = 0; i < 3; ++i) {
    if (is_sigma_fixed(cur.C)) return cur;
    cur = rotate_left(cur);
  }
  return std::nullopt;
}

// --- split-form mutations -----------------------------------------------------------

/// Exact polar form of a nonzero complex number: positive rational modulus and
/// rational argument in [0, 1) (as a fraction of a full turn). This carrier is
/// not a ring; it only supports the mutation split rule, with cyclic group
/// rings as the exact oracle.
struct PolarTriple {
  std::array<Rat, 3> mod;
  std::array<Rat, 3> arg;
};

inline Rat arg_normalize(Rat x) {
  Int shift = rat_num(x) / rat_den(x);
  x -= Rat(shift);
  if (x < 0) x += 1;
  return x;
}

/// Split mutation rule at `pos`: modulus follows the classical Markov rule
/// (b^2 + c^2)/a, the argument becomes arg(B) - arg(C), then the reshuffle
/// (A', C, sigma(B)) with sigma negating arguments.
inline PolarTriple complex_polar_mutate(const PolarTriple& t, int pos) {
  auto at = [&](int i) { return (pos + i) % 3; };
  Rat a = t.mod[at(0)], b = t.mod[at(1)], c = t.mod[at(2)];
  Rat alpha = t.arg[at(0)], beta = t.arg[at(1)], gamma = t.arg[at(2)];
  (void)alpha;
  PolarTriple out = t;
  out.mod[at(0)] = (b * b + c * c) / a;
  out.arg[at(0)] = arg_normalize(beta - gamma);
  out.mod[at(1)] = c;
  out.arg[at(1)] = gamma;
  out.mod[at(2)] = b;
  out.arg[at(2)] = arg_normalize(-beta);
  return out;
}

/// The complex number m e^{2 pi i k/n} as the group-ring element m Z^k in
/// group:Zn:rat; exact carrier for oracle comparisons.
inline Value polar_to_group(const Ring& gr, const Rat& modulus, const Rat& arg) {
  long n = gr->n;
  Rat scaled = arg * n;
  if (!is_integer(scaled)) throw RingError("argument denominator does not divide group order");
  long k = static_cast<long>(rat_num(scaled));
  return mul(from_rat(gr, modulus), group_gen_power(gr, k));
}

/// Mutation over dual numbers, asserting the closed split forms.
/// Trivial sigma, entries a + alpha eps: the real part follows the classical
/// rule and the shadow is (2ab beta + 2ac gamma - (b^2+c^2) alpha)/a^2.
/// Conjugation sigma, entries x(1 + xi eps) with alpha + beta + gamma = 0: the
/// real part follows the classical rule with relative shadow (beta - gamma).
inline MarkovTriple dual_split_mutate(const MarkovTriple& t, int pos) {
  const Ring& r = t.A.ring;
  if (r->kind != RingKind::Dual) throw RingError("dual_split_mutate needs a dual ring");
  MarkovTriple rot = t;
  for (int i = 0; i < pos; ++i) rot = rotate_left(rot);
  auto real = [](const Value& v) { return v.parts[0].a; };
  auto shadow = [](const Value& v) { return v.parts[1].a; };
  Rat a = real(rot.A), b = real(rot.B), c = real(rot.C);
  MarkovTriple expect{zero(r), rot.C, sigma(rot.B)};
  if (!r->conj) {
    Rat alpha = shadow(rot.A), beta = shadow(rot.B), gamma = shadow(rot.C);
    Rat fresh_re = (b * b + c * c) / a;
    Rat fresh_sh = (2 * a * b * beta + 2 * a * c * gamma - (b * b + c * c) * alpha) / (a * a);
    expect.A = dual_of(r, from_rat(r->base, fresh_re), from_rat(r->base, fresh_sh));
  } else {
    Rat alpha = shadow(rot.A) / a, beta = shadow(rot.B) / b, gamma = shadow(rot.C) / c;
    if (alpha + beta + gamma != 0) throw ShadowConstraintViolated();
    Rat fresh_re = (b * b + c * c) / a;
    expect.A = dual_of(r, from_rat(r->base, fresh_re), from_rat(r->base, fresh_re * (beta - gamma)));
  }
  for (int i = 0; i < pos; ++i) expect = rotate_right(expect);
  MarkovTriple generic = mutate(t, pos);
  if (!triple_equal(generic, expect)) throw RingError("dual split rule disagrees with mutation");
  return generic;
}

// --- evaluation helpers ----------------------------------------------------------

/// Z -> 1 evaluation of every coefficient of a group-ring value, or t -> point
/// for Laurent-based values; used for the functoriality checks against the
/// classical Markov tree.
inline Value eval_triple_entry(const Value& v, const Rat& point) {
  if (v.ring->kind == RingKind::Group) return group_eval_one(v);
  return eval_var(v, point, eval_ring(v.ring));
}

}  // namespace sp2sigma
