#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "sp2sigma/golden.hpp"
#include "sp2sigma/literal.hpp"
#include "sp2sigma/reports.hpp"
#include "sp2sigma/sampler.hpp"

using namespace sp2sigma;

namespace {

void emit(const Json& report, const std::string& out_path) {
  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << text;
  }
}

Mat2 parse_matrix_seed(const Ring& r, const std::string& seed) {
  auto entries = parse_mat2_literal(r, seed);
  return {r, entries[0], entries[1], entries[2], entries[3]};
}

MarkovTriple parse_triple_seed(const Ring& r, const std::string& seed) {
  auto entries = parse_triple_literal(r, seed);
  return {entries[0], entries[1], entries[2]};
}

/// One sampled matrix through every identity suite; returns the names of the
/// residual checks that failed (empty = all identities hold exactly).
std::vector<std::string> fuzz_one(const Ring& r, unsigned long seed) {
  std::vector<std::string> failures;
  auto expect_zero = [&](const char* name, const Value& residual) {
    if (!is_zero(residual)) failures.push_back(name);
  };

  Rng rng(seed);
  Mat2 any = {r, random_value(r, rng), random_value(r, rng), random_value(r, rng),
              random_value(r, rng)};
  if (!mat2_is_zero(cayley_hamilton_residual(any))) failures.push_back("cayley_hamilton");

  Mat2 m = random_symplectic(r, seed, 4);
  if (!mat2_is_zero(cayley_hamilton_symplectic_residual(m)))
    failures.push_back("symplectic_cayley_hamilton");
  Mat2 shadow = {r, random_value(r, rng), random_value(r, rng), random_value(r, rng),
                 random_value(r, rng)};
  expect_zero("first_order_det", first_order_det_residual(m, shadow));
  Mat2 n = random_symplectic(r, seed + 1, 4);
  expect_zero("classical_trace", classical_trace_identity_residual(m, n));
  expect_zero("det_product", det_product_residual(m, n));
  expect_zero("commutator_trace", commutator_trace_identity_residual(m, n));

  Mat2 adj = adjugate(m);
  if (!mat2_equal(mat2_mul(adj, m), mat2_identity(r)) ||
      !mat2_equal(mat2_mul(m, adj), mat2_identity(r)))
    failures.push_back("adjugate_inverse");
  expect_zero("inverse_trace", sub(trace(adj), sigma(trace(m))));

  if (is_commutative(r)) {
    for (int k = 1; k <= 6; ++k) {
      if (!is_zero(chebyshev_trace_residual(m, k))) {
        failures.push_back("chebyshev_k" + std::to_string(k));
      }
    }
  } else {
    for (int k : {1, 3, 5})
      if (!is_zero(chebyshev_odd_step_residual(m, k)))
        failures.push_back("chebyshev_odd_k" + std::to_string(k));
  }

  // Quantum: the lift is quantum-symplectic with quantum determinant 1.
  Mat2 lifted = lift_to_quantum(m);
  if (!quantum_symplectic_report(lifted).is_full) failures.push_back("quantum_lift");
  expect_zero("quantum_det", sub(quantum_det(lifted), one(lifted.ring)));
  return failures;
}

int cmd_identities_fuzz(const std::string& ring_spec_text, long count, unsigned long rng_seed,
                        long jobs, const std::string& out_path) {
  Ring r = parse_ring_spec(ring_spec_text);
  std::vector<std::vector<std::string>> failures(static_cast<size_t>(count));
  std::mutex next_mutex;
  long next = 0;
  auto worker = [&] {
    for (;;) {
      long i;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= count) return;
        i = next++;
      }
      failures[static_cast<size_t>(i)] = fuzz_one(r, rng_seed + static_cast<unsigned long>(i));
    }
  };
  std::vector<std::thread> pool;
  for (long j = 0; j < std::max(1L, jobs); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  Json failing = Json::array();
  for (long i = 0; i < count; ++i)
    for (const std::string& name : failures[static_cast<size_t>(i)])
      failing.push_back(Json{{"sample", i}, {"check", name}});
  bool ok = failing.empty();
  emit(Json{{"command", "identities-fuzz"},
            {"ring", ring_spec_text},
            {"count", count},
            {"rng_seed", rng_seed},
            {"failures", std::move(failing)},
            {"all_identities_hold", ok}},
       out_path);
  return ok ? 0 : 1;
}

int cmd_golden_regen(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, content] : golden_corpus()) {
    std::ofstream out(std::filesystem::path(out_dir) / name, std::ios::binary);
    out << content;
  }
  emit(Json{{"command", "golden-regen"}, {"out", out_dir},
            {"files", golden_corpus().size()}},
       "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification and enumeration tool for involutive symplectic rings"};
  app.require_subcommand(1);

  std::string ring_spec_text = "int", seed_text, out_path, out_dir = "tests/golden";
  long depth = 4, count = 100, jobs = 1, terms = 10;
  unsigned long rng_seed = 1;
  bool dedup = false;

  auto add_common = [&](CLI::App* sub, bool needs_seed) {
    sub->add_option("--ring", ring_spec_text, "ring specification, e.g. mat:2:laurent:t:int");
    if (needs_seed) sub->add_option("--seed", seed_text, "value literal")->required();
    sub->add_option("--out", out_path, "write the JSON report to a file instead of stdout");
  };

  CLI::App* sp2 = app.add_subcommand("sp2-verify", "check the six symplectic equations");
  add_common(sp2, true);
  CLI::App* fuzz = app.add_subcommand("identities-fuzz", "randomized identity suites");
  add_common(fuzz, false);
  fuzz->add_option("--count", count, "number of samples");
  fuzz->add_option("--rng-seed", rng_seed, "deterministic seed");
  fuzz->add_option("--jobs", jobs, "worker threads");
  CLI::App* quantum = app.add_subcommand("quantum-verify", "lift a matrix and check the quantum equations");
  add_common(quantum, true);
  CLI::App* square = app.add_subcommand("cluster-square", "square seed, round-trip, and monodromy");
  add_common(square, true);
  CLI::App* check = app.add_subcommand("markov-check", "Markov function and admissibility of a triple");
  add_common(check, true);
  CLI::App* tree = app.add_subcommand("markov-tree", "enumerate the mutation tree");
  add_common(tree, true);
  tree->add_option("--depth", depth, "maximum word length");
  tree->add_flag("--dedup", dedup, "skip expansion of repeated triples");
  tree->add_option("--jobs", jobs, "worker threads (output is order-canonical)");
  CLI::App* fib = app.add_subcommand("markov-fib", "frozen-C Fibonacci branch");
  add_common(fib, true);
  fib->add_option("--count", terms, "number of terms");
  CLI::App* regen = app.add_subcommand("golden-regen", "rewrite the golden corpus");
  regen->add_option("--out", out_dir, "golden directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (sp2->parsed()) {
      Ring r = parse_ring_spec(ring_spec_text);
      Json report = sp2_verify_report(parse_matrix_seed(r, seed_text));
      emit(report, out_path);
      return report["is_full"].get<bool>() ? 0 : 1;
    }
    if (fuzz->parsed())
      return cmd_identities_fuzz(ring_spec_text, count, rng_seed, jobs, out_path);
    if (quantum->parsed()) {
      Ring r = parse_ring_spec(ring_spec_text);
      Json report = quantum_verify_report(parse_matrix_seed(r, seed_text));
      emit(report, out_path);
      return report["is_full"].get<bool>() && report["quantum_det_is_one"].get<bool>() ? 0 : 1;
    }
    if (square->parsed()) {
      Ring r = parse_ring_spec(ring_spec_text);
      Json report = cluster_square_report(parse_matrix_seed(r, seed_text));
      emit(report, out_path);
      return report["round_trip"].get<bool>() && report["monodromy_matches"].get<bool>() ? 0 : 1;
    }
    if (check->parsed()) {
      Ring r = parse_ring_spec(ring_spec_text);
      Json report = markov_check_report(parse_triple_seed(r, seed_text));
      emit(report, out_path);
      return report["admissible"].get<bool>() ? 0 : 1;
    }
    if (tree->parsed()) {
      Ring r = parse_ring_spec(ring_spec_text);
      MarkovTree result = enumerate_tree(parse_triple_seed(r, seed_text),
                                         static_cast<int>(depth), dedup);
      emit(encode_tree(result), out_path);
      return 0;
    }
    if (fib->parsed()) {
      Ring r = parse_ring_spec(ring_spec_text);
      Json report = fibonacci_report(parse_triple_seed(r, seed_text), static_cast<int>(terms));
      emit(report, out_path);
      return report["sequences_agree"].get<bool>() ? 0 : 1;
    }
    if (regen->parsed()) return cmd_golden_regen(out_dir);
  } catch (const RingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
