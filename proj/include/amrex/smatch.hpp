#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "amrex/amr.hpp"

namespace amrex {

// How the hypothesis top triple is matched against the premise one.
enum class TopMatch {
  kRoot,            // root maps to root (reference Smatch: TOP is a constant attribute)
  kRootAndConcept,  // root maps to root and both root concepts are equal
};

struct AlignmentConfig {
  bool include_top = true;
  TopMatch top_match = TopMatch::kRoot;
  int restarts = 4;
  std::uint64_t seed = 0;
};

// Injective partial map from hypothesis variables to premise variables,
// ordered by hypothesis declaration order.
struct VariableMapping {
  std::vector<std::pair<std::string, std::string>> pairs;

  bool operator==(const VariableMapping&) const = default;
};

struct SmatchResult {
  VariableMapping mapping;
  std::size_t matched = 0;
  std::size_t hyp_total = 0;
  std::size_t prem_total = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Number of hypothesis triples that occur in the premise after renaming
// hypothesis variables through `mapping` (multiset intersection). Throws
// AlignmentError if the mapping names an unknown variable or is not injective.
std::size_t matched_triples(const AmrGraph& premise, const AmrGraph& hypothesis,
                            const VariableMapping& mapping, const AlignmentConfig& cfg = {});

// Restarted steepest-ascent search over moves and swaps, plus joint moves of
// both ends of a relation when those stall. Restart 0 starts from a
// concept-greedy mapping, the others from seeded random injections.
SmatchResult align_hill_climb(const AmrGraph& premise, const AmrGraph& hypothesis,
                              const AlignmentConfig& cfg = {});

inline constexpr std::size_t kExhaustiveMaxHypothesisNodes = 10;
inline constexpr std::size_t kExhaustiveMaxPremiseNodes = 12;

// Branch-and-bound over every injective partial mapping; globally optimal.
// Throws AlignmentError beyond the node-count guard.
SmatchResult align_exhaustive(const AmrGraph& premise, const AmrGraph& hypothesis,
                              const AlignmentConfig& cfg = {});

// Precision with the hypothesis (claim) triple count as denominator: how much
// of the hypothesis is contained in the premise. Uses align_hill_climb.
SmatchResult smatch_precision(const AmrGraph& premise, const AmrGraph& hypothesis,
                              const AlignmentConfig& cfg = {});

// `a0(ride-01) --> b0(disease)` lines, one per mapped pair.
std::vector<std::string> mapping_lines(const AmrGraph& premise, const AmrGraph& hypothesis,
                                       const VariableMapping& mapping);

}  // namespace amrex
