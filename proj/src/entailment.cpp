#include "amrex/entailment.hpp"

#include <cmath>

#include "amrex/errors.hpp"

namespace amrex {

double combined_score(double lambda, double smatch_p, double cosine_sim) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ValueError("lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  return lambda * smatch_p + (1.0 - lambda) * cosine_sim;
}

Decision th1(double f_value, double threshold) {
  if (!std::isfinite(f_value)) throw ValueError("entailment score is not finite");
  return f_value >= threshold ? Decision::kEntailed : Decision::kNotEntailed;
}

PairComponents pair_components(const std::string& premise_text, const AmrGraph& premise_amr,
                               const std::string& hypothesis_text, const AmrGraph& hypothesis_amr,
                               Embedder& embedder, const AlignmentConfig& alignment) {
  PairComponents out;
  out.cosine_sim = embedder.similarity(premise_text, hypothesis_text);
  out.smatch = smatch_precision(premise_amr, hypothesis_amr, alignment);
  return out;
}

EntailmentScore score_components(const PairComponents& components, double lambda,
                                 double threshold) {
  EntailmentScore score;
  score.lambda = lambda;
  score.smatch_p = components.smatch.precision;
  score.cosine_sim = components.cosine_sim;
  score.f_value = combined_score(lambda, score.smatch_p, score.cosine_sim);
  score.decision = th1(score.f_value, threshold);
  score.mapping = components.smatch.mapping;
  return score;
}

EntailmentScore nli_pair(const std::string& premise_text, const AmrGraph& premise_amr,
                         const std::string& hypothesis_text, const AmrGraph& hypothesis_amr,
                         double lambda, Embedder& embedder, const ScoringConfig& cfg) {
  combined_score(lambda, 0.0, 0.0);  // validate lambda before any expensive work
  auto components = pair_components(premise_text, premise_amr, hypothesis_text, hypothesis_amr,
                                    embedder, cfg.alignment);
  return score_components(components, lambda, cfg.entailment_threshold);
}

}  // namespace amrex
