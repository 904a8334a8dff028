#pragma once

#include <string>

#include "sp2sigma/json_io.hpp"
#include "sp2sigma/markov.hpp"
#include "sp2sigma/quantum.hpp"

namespace sp2sigma {

/// JSON builders shared by the command-line tool and the golden-file tests.
/// Every builder is a pure function of its inputs so the serialized output is
/// byte-identical across runs and worker counts.

inline Json encode_mat2(const Mat2& m) {
  return Json{{"ring", ring_spec(m.ring)},
              {"A", encode_value(m.A)},
              {"B", encode_value(m.B)},
              {"C", encode_value(m.C)},
              {"D", encode_value(m.D)}};
}

inline Json encode_seed(const ClusterSeed& s) {
  Json edges = Json::object();
  for (const auto& [key, value] : s.edges)
    edges[std::to_string(key.first) + "-" + std::to_string(key.second)] = encode_value(value);
  Json triangles = Json::array();
  for (const auto& tri : s.triangles) triangles.push_back(Json{tri[0], tri[1], tri[2]});
  Json frozen = Json::array();
  for (const auto& key : s.frozen)
    frozen.push_back(std::to_string(key.first) + "-" + std::to_string(key.second));
  Json points = Json::array();
  for (int p : s.points) points.push_back(p);
  return Json{{"ring", ring_spec(s.ring)},
              {"points", std::move(points)},
              {"edges", std::move(edges)},
              {"triangles", std::move(triangles)},
              {"frozen", std::move(frozen)}};
}

inline Json encode_triple(const MarkovTriple& t) {
  return Json{encode_value(t.A), encode_value(t.B), encode_value(t.C)};
}

inline Json encode_tree(const MarkovTree& tree) {
  Json nodes = Json::array();
  for (const auto& node : tree.nodes)
    nodes.push_back(Json{{"word", node.word},
                         {"triple", encode_triple(node.triple)},
                         {"admissible", node.admissible}});
  return Json{{"ring", ring_spec(tree.root.A.ring)},
              {"root", encode_triple(tree.root)},
              {"F0", encode_value(tree.F0)},
              {"nodes", std::move(nodes)}};
}

inline Json sp2_verify_report(const Mat2& m) {
  SymplecticReport rep = symplectic_report(m);
  auto residuals = [](const std::array<Value, 3>& rs) {
    Json out = Json::array();
    for (const Value& r : rs) out.push_back(encode_value(r));
    return out;
  };
  return Json{{"ring", ring_spec(m.ring)},
              {"matrix", encode_mat2(m)},
              {"left_residuals", residuals(rep.left_residuals)},
              {"right_residuals", residuals(rep.right_residuals)},
              {"is_left", rep.is_left},
              {"is_right", rep.is_right},
              {"is_full", rep.is_full}};
}

inline Json quantum_verify_report(const Mat2& m) {
  Mat2 lifted = lift_to_quantum(m);
  SymplecticReport rep = quantum_symplectic_report(lifted);
  Json residuals = Json::array();
  for (const Value& r : rep.left_residuals) residuals.push_back(encode_value(r));
  for (const Value& r : rep.right_residuals) residuals.push_back(encode_value(r));
  Value det = quantum_det(lifted);
  bool det_one = equal(det, one(det.ring));
  return Json{{"ring", ring_spec(m.ring)},
              {"matrix", encode_mat2(m)},
              {"lift", encode_mat2(lifted)},
              {"residuals", std::move(residuals)},
              {"is_full", rep.is_full},
              {"quantum_det", encode_value(det)},
              {"quantum_det_is_one", det_one}};
}

inline Json markov_check_report(const MarkovTriple& t) {
  AdmissibilityReport rep = is_admissible(t);
  Json angles = Json::array();
  auto values = torus_angles(t);
  for (int i = 0; i < 6; ++i)
    angles.push_back(Json{{"value", encode_value(values[static_cast<size_t>(i)])},
                          {"sigma_fixed", is_sigma_fixed(values[static_cast<size_t>(i)])},
                          {"positive", rep.positive[static_cast<size_t>(i)]}});
  Json entries = Json::array();
  for (int i = 0; i < 3; ++i)
    entries.push_back(Json{{"integral", rep.integral[static_cast<size_t>(i)]},
                           {"invertible", rep.invertible[static_cast<size_t>(i)]}});
  return Json{{"ring", ring_spec(t.A.ring)},
              {"triple", encode_triple(t)},
              {"F", encode_value(markov_function(t))},
              {"entries", std::move(entries)},
              {"angles", std::move(angles)},
              {"admissible", rep.ok}};
}

inline Json fibonacci_report(const MarkovTriple& t, int n) {
  FibonacciBranch br = fibonacci_branch(t, n);
  Json mutation = Json::array(), recurrence = Json::array();
  bool agree = true;
  for (size_t i = 0; i < br.by_mutation.size(); ++i) {
    mutation.push_back(encode_value(br.by_mutation[i]));
    recurrence.push_back(encode_value(br.by_recurrence[i]));
    agree = agree && equal(br.by_mutation[i], br.by_recurrence[i]);
  }
  return Json{{"ring", ring_spec(t.A.ring)},
              {"seed", encode_triple(t)},
              {"phi", encode_value(br.phi)},
              {"by_mutation", std::move(mutation)},
              {"by_recurrence", std::move(recurrence)},
              {"sequences_agree", agree}};
}

inline Json cluster_square_report(const Mat2& m) {
  ClusterSeed seed = seed_from_matrix(m);
  Ring closed = seed.ring;
  Mat2 back = extract_matrix(seed);
  bool round_trip = mat2_equal(back, mat2_widen(m, closed));
  ClusterSeed flipped = mutate_edge(seed, 1, 3);
  Mat2 monodromy_m = monodromy(seed, canonical_square_path());
  return Json{{"ring", ring_spec(m.ring)},
              {"matrix", encode_mat2(m)},
              {"seed", encode_seed(seed)},
              {"round_trip", round_trip},
              {"phi_L", encode_value(phi_L(seed))},
              {"phi_R", encode_value(phi_R(seed))},
              {"flip_value", encode_value(edge_value(flipped, 2, 4))},
              {"monodromy_matches", mat2_equal(monodromy_m, mat2_widen(m, closed))}};
}

}  // namespace sp2sigma
