#pragma once

#include <utility>
#include <vector>

#include "sp2sigma/literal.hpp"
#include "sp2sigma/reports.hpp"

namespace sp2sigma {

/// The golden corpus: every pinned report, regenerated from scratch as
/// (file name, serialized content). Shared by the command-line regenerator
/// and the byte-comparison test.
inline std::vector<std::pair<std::string, std::string>> golden_corpus() {
  std::vector<std::pair<std::string, std::string>> files;
  auto put = [&](const std::string& name, const Json& j) {
    files.emplace_back(name, j.dump(2) + "\n");
  };
  auto triple = [](const Ring& r, const std::string& text) {
    auto entries = parse_triple_literal(r, text);
    return MarkovTriple{entries[0], entries[1], entries[2]};
  };
  auto matrix = [](const Ring& r, const std::string& text) {
    auto entries = parse_mat2_literal(r, text);
    return Mat2{r, entries[0], entries[1], entries[2], entries[3]};
  };

  Ring z = ring_int();
  put("classical_tree_depth4.json", encode_tree(enumerate_tree(triple(z, "[1,1,1]"), 4)));

  Ring g5 = parse_ring_spec("group:Z5:int");
  put("markov_check_z5.json", markov_check_report(triple(g5, "[Z, 1-Z+Z^2, 1+Z-Z^3]")));

  Ring ml = parse_ring_spec("mat:2:laurent:t:int");
  put("fib_matrix_branch.json",
      fibonacci_report(triple(ml, "[[[1,t],[0,1]], [[1,-t],[0,1]], [[1,0],[0,1]]]"), 6));
  put("fib_classical.json", fibonacci_report(triple(z, "[2,1,1]"), 10));

  put("cluster_square.json", cluster_square_report(matrix(z, "[[2,1],[1,1]]")));
  put("sp2_verify_int.json", sp2_verify_report(matrix(z, "[[2,1],[1,1]]")));
  put("quantum_verify_int.json", quantum_verify_report(matrix(z, "[[2,1],[1,1]]")));

  Ring c = ring_complex();
  put("markov_tree_complex_depth3.json",
      encode_tree(enumerate_tree(triple(c, "[1, i, -i]"), 3)));
  return files;
}

}  // namespace sp2sigma
