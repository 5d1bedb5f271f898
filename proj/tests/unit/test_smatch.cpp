#include <doctest.h>

#include <random>

#include "amrex/errors.hpp"
#include "amrex/smatch.hpp"
#include "support/random_amr.hpp"

using namespace amrex;

TEST_CASE("Marnie under the reference mapping matches 6 of 8") {
  auto premise = testing::load_fixture("marnie_evidence.amr");
  auto hyp = testing::load_fixture("marnie_claim.amr");
  VariableMapping m{{{"a0", "b0"}, {"a1", "b1"}, {"a2", "b11"}, {"a3", "b12"}}};
  CHECK(matched_triples(premise, hyp, m) == 6);
  AlignmentConfig no_top;
  no_top.include_top = false;
  CHECK(matched_triples(premise, hyp, m, no_top) == 5);
  auto r = smatch_precision(premise, hyp);
  CHECK(r.matched == 6);
  CHECK(r.hyp_total == 8);
  CHECK(r.precision == doctest::Approx(0.75));
  CHECK(r.mapping == m);
}

TEST_CASE("matched_triples rejects bad mappings") {
  auto premise = testing::load_fixture("marnie_evidence.amr");
  auto hyp = testing::load_fixture("marnie_claim.amr");
  CHECK_THROWS_AS(matched_triples(premise, hyp, VariableMapping{{{"a0", "b0"}, {"a1", "b0"}}}), AlignmentError);
  CHECK_THROWS_AS(matched_triples(premise, hyp, VariableMapping{{{"a9", "b0"}}}), AlignmentError);
  CHECK_THROWS_AS(matched_triples(premise, hyp, VariableMapping{{{"a0", "b99"}}}), AlignmentError);
  CHECK(matched_triples(premise, hyp, VariableMapping{}) == 0);
}

TEST_CASE("identical graphs score 1") {
  auto g = testing::load_fixture("rabies_evidence.amr");
  auto r = smatch_precision(g, g);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);
}

TEST_CASE("precision is asymmetric: a contained subgraph scores 1 one way only") {
  auto small = parse_penman("(f/film :name (n/name :op1 \"Marnie\"))");
  auto big = parse_penman("(f/film :name (n/name :op1 \"Marnie\") :mod (t/thriller))");
  CHECK(smatch_precision(big, small).precision == 1.0);
  CHECK(smatch_precision(small, big).precision < 1.0);
}

TEST_CASE("top-triple conventions") {
  auto premise = parse_penman("(a/x :ARG0 (b/y))");
  auto hyp = parse_penman("(c/y)");
  AlignmentConfig root_only;
  auto r = align_exhaustive(premise, hyp, root_only);
  // instance(c,y) matches b; top needs c -> a, which loses the instance
  CHECK(r.matched == 1);
  AlignmentConfig concept_top;
  concept_top.top_match = TopMatch::kRootAndConcept;
  CHECK(align_exhaustive(premise, hyp, concept_top).matched == 1);
  VariableMapping root_map{{{"c", "a"}}};
  CHECK(matched_triples(premise, hyp, root_map, root_only) == 1);
  CHECK(matched_triples(premise, hyp, root_map, concept_top) == 0);
}

TEST_CASE("hill climbing is deterministic for a seed") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    auto hyp = testing::random_graph(rng, "a", {6, 4});
    auto premise = testing::random_graph(rng, "b", {9, 4});
    AlignmentConfig cfg;
    cfg.seed = 99;
    cfg.restarts = 5;
    auto r1 = align_hill_climb(premise, hyp, cfg);
    auto r2 = align_hill_climb(premise, hyp, cfg);
    CHECK(r1.mapping == r2.mapping);
    CHECK(r1.matched == r2.matched);
    CHECK(matched_triples(premise, hyp, r1.mapping, cfg) == r1.matched);
  }
}

TEST_CASE("hill climbing never beats the exhaustive optimum") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    auto hyp = testing::random_graph(rng, "a", {1 + rng() % 6, 4});
    auto premise = testing::random_graph(rng, "b", {1 + rng() % 8, 4});
    AlignmentConfig cfg;
    cfg.restarts = 8;
    cfg.seed = static_cast<std::uint64_t>(i);
    auto exact = align_exhaustive(premise, hyp, cfg);
    auto climb = align_hill_climb(premise, hyp, cfg);
    CHECK(climb.matched <= exact.matched);
    CHECK(matched_triples(premise, hyp, exact.mapping, cfg) == exact.matched);
  }
}

TEST_CASE("exhaustive search guards its size") {
  std::mt19937_64 rng(5);
  auto hyp = testing::random_graph(rng, "a", {11, 4});
  auto premise = testing::random_graph(rng, "b", {5, 4});
  CHECK_THROWS_AS(align_exhaustive(premise, hyp), AlignmentError);
}

TEST_CASE("mapping lines") {
  auto premise = testing::load_fixture("marnie_evidence.amr");
  auto hyp = testing::load_fixture("marnie_claim.amr");
  auto lines = mapping_lines(premise, hyp, VariableMapping{{{"a0", "b0"}, {"a1", "b1"}}});
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "a0(film) --> b0(film)");
  CHECK(lines[1] == "a1(romantic-03) --> b1(direct-01)");
}
