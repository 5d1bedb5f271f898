#pragma once

#include <string>

#include "amrex/amr.hpp"
#include "amrex/similarity.hpp"
#include "amrex/smatch.hpp"

namespace amrex {

// Pair-level entailment threshold on the combined score.
inline constexpr double kEntailmentThreshold = 0.6;

enum class Decision : int { kNotEntailed = -1, kEntailed = 1 };

inline int to_int(Decision d) { return static_cast<int>(d); }

struct EntailmentScore {
  double lambda = 0.0;
  double smatch_p = 0.0;
  double cosine_sim = 0.0;
  double f_value = 0.0;
  Decision decision = Decision::kNotEntailed;
  VariableMapping mapping;
};

// lambda * smatch_p + (1 - lambda) * cosine_sim. Throws ValueError unless 0 <= lambda <= 1.
double combined_score(double lambda, double smatch_p, double cosine_sim);

// kEntailed iff f_value >= threshold (boundary inclusive). Throws ValueError for non-finite input.
Decision th1(double f_value, double threshold = kEntailmentThreshold);

// The lambda-independent inputs of one (premise, hypothesis) pair.
struct PairComponents {
  SmatchResult smatch;
  double cosine_sim = 0.0;
};

struct ScoringConfig {
  AlignmentConfig alignment;
  // Only changed for experiments; the verdict thresholds assume 0.6.
  double entailment_threshold = kEntailmentThreshold;
};

PairComponents pair_components(const std::string& premise_text, const AmrGraph& premise_amr,
                               const std::string& hypothesis_text, const AmrGraph& hypothesis_amr,
                               Embedder& embedder, const AlignmentConfig& alignment);

EntailmentScore score_components(const PairComponents& components, double lambda,
                                 double threshold = kEntailmentThreshold);

// Evidence is the premise, the claim is the hypothesis.
EntailmentScore nli_pair(const std::string& premise_text, const AmrGraph& premise_amr,
                         const std::string& hypothesis_text, const AmrGraph& hypothesis_amr,
                         double lambda, Embedder& embedder, const ScoringConfig& cfg = {});

}  // namespace amrex
