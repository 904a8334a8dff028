#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "sp2sigma/mat2.hpp"

namespace sp2sigma {

struct MissingEdge : RingError {
  MissingEdge() : RingError("edge not present in seed") {}
};
struct FrozenEdge : RingError {
  FrozenEdge() : RingError("cannot mutate a frozen edge") {}
};
struct NoQuadrilateral : RingError {
  NoQuadrilateral() : RingError("edge is not the diagonal of a unique quadrilateral") {}
};
struct NotInvertible : RingError {
  NotInvertible() : RingError("cluster value is not invertible") {}
};
struct NotSymplectic : RingError {
  NotSymplectic() : RingError("matrix is not full symplectic") {}
};
struct EntryNotInvertible : RingError {
  EntryNotInvertible() : RingError("matrix entry is not invertible") {}
};

/// Cluster seed on a triangulated marked surface (square/cylinder or
/// once-punctured torus). One value is stored per undirected edge, oriented
/// min -> max; the reverse direction is sigma of the stored value. Values live
/// in the fraction closure of the ring of interest so mutation can divide.
struct ClusterSeed {
  Ring ring;
  std::vector<int> points;
  std::map<std::pair<int, int>, Value> edges;
  std::vector<std::array<int, 3>> triangles;  ///< sorted triples
  std::set<std::pair<int, int>> frozen;
  std::map<int, int> vertex_class;  ///< corner id -> marked point it belongs to
};

namespace detail {
inline std::pair<int, int> edge_key(int i, int j) { return {std::min(i, j), std::max(i, j)}; }
}  // namespace detail

inline bool has_edge(const ClusterSeed& s, int i, int j) {
  return s.edges.count(detail::edge_key(i, j)) != 0;
}

/// X_{ij}: the value on edge (i, j) read from i to j.
inline Value edge_value(const ClusterSeed& s, int i, int j) {
  auto it = s.edges.find(detail::edge_key(i, j));
  if (it == s.edges.end()) throw MissingEdge();
  return i < j ? it->second : sigma(it->second);
}

/// Stores X_{ij} = v (and implicitly X_{ji} = sigma(v)).
inline void set_edge(ClusterSeed& s, int i, int j, Value v) {
  s.edges[detail::edge_key(i, j)] = i < j ? std::move(v) : sigma(v);
}

inline Value inverted(const Value& x) {
  auto inv = try_inverse(x);
  if (!inv) throw NotInvertible();
  return *inv;
}

/// Noncommutative angle T_i^{jk} = X_{ji}^-1 X_{jk} X_{ik}^-1 at corner i of
/// triangle {i, j, k}.
inline Value angle(const ClusterSeed& s, int i, int j, int k) {
  return mul(mul(inverted(edge_value(s, j, i)), edge_value(s, j, k)),
             inverted(edge_value(s, i, k)));
}

/// Triangle condition: the angle is sigma-fixed at one corner (hence at all,
/// since T_i^{kj} = sigma(T_i^{jk})).
inline bool triangle_condition(const ClusterSeed& s, const std::array<int, 3>& tri) {
  return is_sigma_fixed(angle(s, tri[0], tri[1], tri[2]));
}

inline bool all_triangle_conditions(const ClusterSeed& s) {
  for (const auto& tri : s.triangles)
    if (!triangle_condition(s, tri)) return false;
  return true;
}

/// Total angle at marked point m: sum of T_p^{qr} over every triangle corner p
/// belonging to class m.
inline Value vertex_angle_sum(const ClusterSeed& s, int m) {
  Value acc = zero(s.ring);
  for (const auto& tri : s.triangles)
    for (int c = 0; c < 3; ++c) {
      int p = tri[c];
      if (s.vertex_class.at(p) != m) continue;
      acc = add(acc, angle(s, p, tri[(c + 1) % 3], tri[(c + 2) % 3]));
    }
  return acc;
}

/// Flip of the diagonal (i, k): the new edge (j, l) across the quadrilateral
/// carries X_{jl} = X_{jk} X_{ik}^-1 X_{il} + X_{ji} X_{ki}^-1 X_{kl}.
inline ClusterSeed mutate_edge(const ClusterSeed& s, int i, int k) {
  auto key = detail::edge_key(i, k);
  if (!s.edges.count(key)) throw MissingEdge();
  if (s.frozen.count(key)) throw FrozenEdge();
  std::vector<size_t> hit;
  for (size_t t = 0; t < s.triangles.size(); ++t) {
    const auto& tri = s.triangles[t];
    if (std::count(tri.begin(), tri.end(), i) && std::count(tri.begin(), tri.end(), k)) hit.push_back(t);
  }
  if (hit.size() != 2) throw NoQuadrilateral();
  auto third = [&](size_t t) {
    for (int p : s.triangles[t])
      if (p != i && p != k) return p;
    throw NoQuadrilateral();
  };
  int j = third(hit[0]), l = third(hit[1]);
  Value fresh = add(mul(mul(edge_value(s, j, k), inverted(edge_value(s, i, k))), edge_value(s, i, l)),
                    mul(mul(edge_value(s, j, i), inverted(edge_value(s, k, i))), edge_value(s, k, l)));
  if (!try_inverse(fresh)) throw NotInvertible();
  ClusterSeed out = s;
  out.edges.erase(key);
  set_edge(out, j, l, fresh);
  auto sorted = [](int a, int b, int c) {
    std::array<int, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    return t;
  };
  out.triangles[hit[0]] = sorted(i, j, l);
  out.triangles[hit[1]] = sorted(j, k, l);
  std::sort(out.triangles.begin(), out.triangles.end());
  return out;
}

inline ClusterSeed mutate_edge(const ClusterSeed& s, std::pair<int, int> e) {
  return mutate_edge(s, e.first, e.second);
}

// --- the square ---------------------------------------------------------------

/// Square seed of a symplectic matrix: corners 1..4, boundary edges frozen,
/// X_12 = X_34 = 1, X_13 = A (the diagonal), X_23 = C, X_14 = B. Corners 1, 4
/// sit at the left marked point (class 0), corners 2, 3 at the right (class 1).
inline ClusterSeed seed_from_matrix(const Mat2& m) {
  Ring closed = fraction_closure(m.ring);
  Mat2 w = mat2_widen(m, closed);
  if (!symplectic_report(w).is_full) throw NotSymplectic();
  for (const Value* e : {&w.A, &w.B, &w.C, &w.D})
    if (!try_inverse(*e)) throw EntryNotInvertible();
  ClusterSeed s;
  s.ring = closed;
  s.points = {1, 2, 3, 4};
  set_edge(s, 1, 2, one(closed));
  set_edge(s, 3, 4, one(closed));
  set_edge(s, 1, 3, w.A);
  set_edge(s, 2, 3, w.C);
  set_edge(s, 1, 4, w.B);
  s.triangles = {{1, 2, 3}, {1, 3, 4}};
  s.frozen = {{1, 2}, {2, 3}, {1, 4}, {3, 4}};
  s.vertex_class = {{1, 0}, {2, 1}, {3, 1}, {4, 0}};
  return s;
}

/// Reads the matrix back out of a square seed laid out like seed_from_matrix
/// on corners (p1, p2, p3, p4): D is produced by flipping the diagonal.
inline Mat2 extract_square(const ClusterSeed& s, std::array<int, 4> p) {
  ClusterSeed flipped = mutate_edge(s, p[0], p[2]);
  return {s.ring, edge_value(s, p[0], p[2]), edge_value(s, p[0], p[3]),
          edge_value(s, p[1], p[2]), edge_value(flipped, p[1], p[3])};
}

inline Mat2 extract_matrix(const ClusterSeed& s) { return extract_square(s, {1, 2, 3, 4}); }

/// Vertex angle sums at the two marked points of the cylinder square:
/// phi_L = D B^-1 + B^-1 A at the left point, phi_R = A C^-1 + C^-1 D at the right.
inline Value phi_L(const ClusterSeed& s) { return vertex_angle_sum(s, 0); }
inline Value phi_R(const ClusterSeed& s) { return vertex_angle_sum(s, 1); }

/// 180-degree rotation of the square: corner permutation (1 3)(2 4); the
/// rotated seed is the seed of [[sigma(A), sigma(C)], [sigma(B), sigma(D)]].
inline ClusterSeed rotate_180(const ClusterSeed& s) {
  auto rot = [](int p) { return p == 1 ? 3 : p == 2 ? 4 : p == 3 ? 1 : 2; };
  ClusterSeed out = s;
  out.edges.clear();
  out.frozen.clear();
  for (const auto& [key, v] : s.edges) {
    int i = rot(key.first), j = rot(key.second);
    set_edge(out, i, j, v);
    if (s.frozen.count(key)) out.frozen.insert(detail::edge_key(i, j));
  }
  out.triangles.clear();
  for (const auto& tri : s.triangles) {
    std::array<int, 3> t{rot(tri[0]), rot(tri[1]), rot(tri[2])};
    std::sort(t.begin(), t.end());
    out.triangles.push_back(t);
  }
  std::sort(out.triangles.begin(), out.triangles.end());
  // Classes stay with the marked points, which the rotation swaps onto the
  // opposite corners: the corner set of each class is preserved setwise.
  return out;
}

/// Rescales the decoration at marked point m by the unit B: edges leaving a
/// class-m corner pick up sigma(B)^-1 on the left; the arriving direction is
/// then forced to pick up B^-1 on the right by X_{jm} = sigma(X_{mj}). The
/// vertex angle sum transforms as Phi -> B Phi sigma(B), all others are fixed.
inline ClusterSeed rescale_vertex(const ClusterSeed& s, int m, const Value& b) {
  Value binv_s = inverted(sigma(b));
  Value binv = inverted(b);
  ClusterSeed out = s;
  for (auto& [key, v] : out.edges) {
    bool from_m = s.vertex_class.at(key.first) == m;
    bool to_m = s.vertex_class.at(key.second) == m;
    if (from_m) v = mul(binv_s, v);
    if (to_m) v = mul(v, binv);
  }
  return out;
}

// --- amalgamation ---------------------------------------------------------------

/// Glues the square of N onto the square of M along the identity edge (3, 4)
/// (corners 5, 6 complete N's square), then flips (3,4), (1,3), (4,6). The
/// square on corners (1, 2, 6, 5) then carries the entries of M N.
inline std::pair<ClusterSeed, Mat2> amalgamate_multiply(const Mat2& m, const Mat2& n) {
  ClusterSeed s = seed_from_matrix(m);
  Ring closed = s.ring;
  Mat2 wn = mat2_widen(n, closed);
  if (!symplectic_report(wn).is_full) throw NotSymplectic();
  for (const Value* e : {&wn.A, &wn.B, &wn.C, &wn.D})
    if (!try_inverse(*e)) throw EntryNotInvertible();
  s.points.push_back(5);
  s.points.push_back(6);
  // N's square is (4, 3, 6, 5) against the shared edge: X_46 = E, X_36 = G,
  // X_45 = F, X_56 = 1.
  set_edge(s, 4, 6, wn.A);
  set_edge(s, 3, 6, wn.C);
  set_edge(s, 4, 5, wn.B);
  set_edge(s, 5, 6, one(closed));
  s.triangles.push_back({3, 4, 6});
  s.triangles.push_back({4, 5, 6});
  std::sort(s.triangles.begin(), s.triangles.end());
  s.frozen = {{1, 2}, {2, 3}, {1, 4}, {4, 5}, {5, 6}, {3, 6}};
  s.vertex_class = {{1, 0}, {2, 1}, {3, 1}, {4, 0}, {5, 0}, {6, 1}};
  s = mutate_edge(s, 3, 4);  // X_16 = AE + BG
  s = mutate_edge(s, 1, 3);  // X_26 = CE + DG
  s = mutate_edge(s, 4, 6);  // X_15 = AF + BH
  Mat2 prod = extract_square(s, {1, 2, 6, 5});
  return {std::move(s), std::move(prod)};
}

// --- monodromy ------------------------------------------------------------------

/// Edge-path tokens across the decorated hexagons: Short(i; k, j) contributes
/// G_i^{kj} = [[1, T_i^{kj}], [0, 1]], Long(i, j) contributes
/// S_ij = [[0, -sigma(X_ij^-1)], [X_ij, 0]]; reversed tokens use the inverse.
struct PathToken {
  enum Kind { Short, Long } kind;
  int i = 0, j = 0, k = 0;  ///< Short: corner i between edges (i,k), (i,j); Long: edge (i,j)
  bool reverse = false;
};

using MonodromyPath = std::vector<PathToken>;

inline Mat2 token_matrix(const ClusterSeed& s, const PathToken& t) {
  const Ring& r = s.ring;
  if (t.kind == PathToken::Short) {
    Value a = angle(s, t.i, t.k, t.j);
    return {r, one(r), t.reverse ? neg(a) : a, zero(r), one(r)};
  }
  Value x = edge_value(s, t.i, t.j);
  if (!t.reverse) return {r, zero(r), neg(sigma(inverted(x))), x, zero(r)};
  return {r, zero(r), inverted(x), neg(sigma(x)), zero(r)};
}

inline Mat2 monodromy(const ClusterSeed& s, const MonodromyPath& path) {
  Mat2 acc = mat2_identity(s.ring);
  for (const auto& t : path) acc = mat2_mul(acc, token_matrix(s, t));
  return acc;
}

/// The path across the square whose monodromy is the generating matrix:
/// G_2^{13} S_23 G_3^{21} G_3^{14}.
inline MonodromyPath canonical_square_path() {
  return {{PathToken::Short, 2, 3, 1, false},
          {PathToken::Long, 2, 3, 0, false},
          {PathToken::Short, 3, 1, 2, false},
          {PathToken::Short, 3, 4, 1, false}};
}

// --- the torus ------------------------------------------------------------------

/// Once-punctured torus seed from the triple (A, B, C): the square fundamental
/// domain has all four corners at the single puncture; A is the diagonal, the
/// two B sides are X_34 = B, X_12 = sigma(B), the two C sides are X_23 = X_14 =
/// sigma(C). Nothing is frozen.
inline ClusterSeed make_torus_seed(const Value& A, const Value& B, const Value& C) {
  Ring closed = fraction_closure(A.ring);
  ClusterSeed s;
  s.ring = closed;
  s.points = {1, 2, 3, 4};
  set_edge(s, 1, 3, widen(A, closed));
  set_edge(s, 3, 4, widen(B, closed));
  set_edge(s, 1, 2, sigma(widen(B, closed)));
  set_edge(s, 2, 3, sigma(widen(C, closed)));
  set_edge(s, 1, 4, sigma(widen(C, closed)));
  s.triangles = {{1, 2, 3}, {1, 3, 4}};
  s.vertex_class = {{1, 0}, {2, 0}, {3, 0}, {4, 0}};
  return s;
}

}  // namespace sp2sigma
