#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "amrex/dataset.hpp"
#include "amrex/entailment.hpp"
#include "amrex/labels.hpp"
#include "amrex/similarity.hpp"

namespace amrex {

// Mean of n decisions kept as the exact rational sum / n, so that threshold
// comparisons at +-0.1 and +-0.5 are decided in integer arithmetic.
struct MeanDecision {
  long sum = 0;
  long count = 0;

  double value() const { return count == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(count); }
  bool operator==(const MeanDecision&) const = default;
};

// Throws ValueError for an empty list.
MeanDecision aggregate(std::span<const Decision> decisions);

// S if e >= 0.1, N if -0.1 < e < 0.1, R if e <= -0.1.
VerdictLabel th2_fever(double e);
VerdictLabel th2_fever(MeanDecision e);

// S if e >= 0.5, C if 0.1 < e < 0.5, N if -0.1 <= e <= 0.1,
// C if -0.5 < e < -0.1, R if e <= -0.5.
VerdictLabel th2_averitec(double e);
VerdictLabel th2_averitec(MeanDecision e);

VerdictLabel th2(Dataset dataset, MeanDecision e);

enum class EmptyEvidencePolicy { kError, kLabelN };

EmptyEvidencePolicy parse_empty_policy(std::string_view text);
std::string_view to_string(EmptyEvidencePolicy policy);

struct VerifyConfig {
  ScoringConfig scoring;
  EmptyEvidencePolicy empty_policy = EmptyEvidencePolicy::kError;
};

struct PairVerdict {
  std::string evidence_id;
  EntailmentScore score;
};

struct ClaimVerdict {
  std::string claim_id;
  MeanDecision e;
  VerdictLabel label{Dataset::kFever, Label::kNotEnoughInfo};
  std::vector<PairVerdict> per_evidence;
};

// Seed for one (claim, evidence) alignment, independent of scheduling.
std::uint64_t pair_seed(std::uint64_t global_seed, const std::string& claim_id,
                        const std::string& evidence_id);

// The lambda-independent scores of every evidence pair of a claim. Throws
// DataError naming the item when an AMR is missing.
std::vector<PairComponents> claim_components(const JoinedRecord& joined, Embedder& embedder,
                                             const AlignmentConfig& alignment);

// Aggregates precomputed components at one lambda.
ClaimVerdict decide_claim(const JoinedRecord& joined, std::span<const PairComponents> components,
                          double lambda, const VerifyConfig& cfg);

ClaimVerdict verify_claim(const JoinedRecord& joined, double lambda, Embedder& embedder,
                          const VerifyConfig& cfg = {});

// Verifies every claim with up to `jobs` worker threads; results are in input
// order and identical for any `jobs`.
std::vector<ClaimVerdict> verify_all(const std::vector<JoinedRecord>& records, double lambda,
                                     Embedder& embedder, const VerifyConfig& cfg, unsigned jobs);

// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the first
// failure by index.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace amrex
