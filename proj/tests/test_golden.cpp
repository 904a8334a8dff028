#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "sp2sigma/golden.hpp"

using namespace sp2sigma;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// The golden directory sits next to this source file; the acceptance binary
// receives it as an argument, but the unit test can rely on the source layout.
std::string golden_dir() { return std::string(GOLDEN_DIR); }

}  // namespace

TEST_CASE("golden corpus is reproduced byte-identically") {
  auto corpus = golden_corpus();
  CHECK(corpus.size() == 8);
  for (const auto& [name, content] : corpus) {
    INFO("golden file " << name);
    CHECK(read_file(golden_dir() + "/" + name) == content);
  }
}

TEST_CASE("regeneration is deterministic") {
  auto first = golden_corpus();
  auto second = golden_corpus();
  REQUIRE(first.size() == second.size());
  for (size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].first == second[i].first);
    CHECK(first[i].second == second[i].second);
  }
}

TEST_CASE("golden trees decode back to their triples") {
  Json tree = Json::parse(read_file(golden_dir() + "/classical_tree_depth4.json"));
  Ring r = parse_ring_spec(tree["ring"].get<std::string>());
  CHECK(equal(decode_value(r, tree["root"][0]), one(r)));
  std::set<Rat> values;
  for (const auto& node : tree["nodes"])
    for (const auto& entry : node["triple"]) values.insert(decode_value(r, entry).a);
  for (long m : {1L, 2L, 5L, 13L, 29L, 34L}) CHECK(values.count(Rat(m)));

  Json z5 = Json::parse(read_file(golden_dir() + "/markov_check_z5.json"));
  Ring g5 = parse_ring_spec(z5["ring"].get<std::string>());
  CHECK(equal(decode_value(fraction_closure(g5), z5["F"]),
              widen(parse_literal(g5, "14-2Z-2Z^2-2Z^3-2Z^4"), fraction_closure(g5))));
  CHECK(z5["admissible"].get<bool>());
}
