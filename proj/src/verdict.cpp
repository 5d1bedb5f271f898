#include "amrex/verdict.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "amrex/errors.hpp"

namespace amrex {

MeanDecision aggregate(std::span<const Decision> decisions) {
  if (decisions.empty()) throw ValueError("cannot aggregate an empty decision list");
  MeanDecision e;
  for (Decision d : decisions) e.sum += to_int(d);
  e.count = static_cast<long>(decisions.size());
  return e;
}

VerdictLabel th2_fever(double e) {
  if (e >= 0.1) return {Dataset::kFever, Label::kSupports};
  if (e <= -0.1) return {Dataset::kFever, Label::kRefutes};
  return {Dataset::kFever, Label::kNotEnoughInfo};
}

VerdictLabel th2_fever(MeanDecision e) {
  if (e.count <= 0) throw ValueError("mean of zero decisions");
  // e >= 1/10  <=>  10 * sum >= count
  if (10 * e.sum >= e.count) return {Dataset::kFever, Label::kSupports};
  if (10 * e.sum <= -e.count) return {Dataset::kFever, Label::kRefutes};
  return {Dataset::kFever, Label::kNotEnoughInfo};
}

VerdictLabel th2_averitec(double e) {
  if (e >= 0.5) return {Dataset::kAveritec, Label::kSupports};
  if (e > 0.1) return {Dataset::kAveritec, Label::kConflicting};
  if (e >= -0.1) return {Dataset::kAveritec, Label::kNotEnoughInfo};
  if (e > -0.5) return {Dataset::kAveritec, Label::kConflicting};
  return {Dataset::kAveritec, Label::kRefutes};
}

VerdictLabel th2_averitec(MeanDecision e) {
  if (e.count <= 0) throw ValueError("mean of zero decisions");
  const long s = e.sum, n = e.count;
  if (2 * s >= n) return {Dataset::kAveritec, Label::kSupports};
  if (10 * s > n) return {Dataset::kAveritec, Label::kConflicting};
  if (10 * s >= -n) return {Dataset::kAveritec, Label::kNotEnoughInfo};
  if (2 * s > -n) return {Dataset::kAveritec, Label::kConflicting};
  return {Dataset::kAveritec, Label::kRefutes};
}

VerdictLabel th2(Dataset dataset, MeanDecision e) {
  return dataset == Dataset::kFever ? th2_fever(e) : th2_averitec(e);
}

EmptyEvidencePolicy parse_empty_policy(std::string_view text) {
  if (text == "error") return EmptyEvidencePolicy::kError;
  if (text == "label-N") return EmptyEvidencePolicy::kLabelN;
  throw ValueError("unknown empty-evidence policy '" + std::string(text) + "'");
}

std::string_view to_string(EmptyEvidencePolicy policy) {
  return policy == EmptyEvidencePolicy::kError ? "error" : "label-N";
}

std::uint64_t pair_seed(std::uint64_t global_seed, const std::string& claim_id,
                        const std::string& evidence_id) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  mix(claim_id);
  mix(evidence_id);
  std::uint64_t x = h ^ (global_seed + 0x9e3779b97f4a7c15ULL);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<PairComponents> claim_components(const JoinedRecord& joined, Embedder& embedder,
                                             const AlignmentConfig& alignment) {
  const auto& record = joined.record;
  if (!joined.claim_amr) throw DataError("missing AMR for claim '" + record.claim_id + "'");
  std::vector<PairComponents> out;
  out.reserve(record.evidence.size());
  for (std::size_t i = 0; i < record.evidence.size(); ++i) {
    const auto& item = record.evidence[i];
    if (i >= joined.evidence_amrs.size() || !joined.evidence_amrs[i]) {
      throw DataError("missing AMR for evidence '" + item.evidence_id + "' of claim '" +
                      record.claim_id + "'");
    }
    AlignmentConfig pair_cfg = alignment;
    pair_cfg.seed = pair_seed(alignment.seed, record.claim_id, item.evidence_id);
    out.push_back(pair_components(item.text, *joined.evidence_amrs[i], record.claim_text,
                                  *joined.claim_amr, embedder, pair_cfg));
  }
  return out;
}

ClaimVerdict decide_claim(const JoinedRecord& joined, std::span<const PairComponents> components,
                          double lambda, const VerifyConfig& cfg) {
  const auto& record = joined.record;
  ClaimVerdict verdict;
  verdict.claim_id = record.claim_id;
  if (record.evidence.empty()) {
    if (cfg.empty_policy == EmptyEvidencePolicy::kError) {
      throw DataError("claim '" + record.claim_id + "' has no usable evidence");
    }
    verdict.label = VerdictLabel(record.dataset, Label::kNotEnoughInfo);
    return verdict;
  }
  std::vector<Decision> decisions;
  for (std::size_t i = 0; i < components.size(); ++i) {
    auto score = score_components(components[i], lambda, cfg.scoring.entailment_threshold);
    decisions.push_back(score.decision);
    verdict.per_evidence.push_back({record.evidence[i].evidence_id, std::move(score)});
  }
  verdict.e = aggregate(decisions);
  verdict.label = th2(record.dataset, verdict.e);
  return verdict;
}

ClaimVerdict verify_claim(const JoinedRecord& joined, double lambda, Embedder& embedder,
                          const VerifyConfig& cfg) {
  combined_score(lambda, 0.0, 0.0);
  if (joined.record.evidence.empty()) return decide_claim(joined, {}, lambda, cfg);
  auto components = claim_components(joined, embedder, cfg.scoring.alignment);
  return decide_claim(joined, components, lambda, cfg);
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const auto workers = std::min<std::size_t>(jobs, n);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  pool.clear();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

std::vector<ClaimVerdict> verify_all(const std::vector<JoinedRecord>& records, double lambda,
                                     Embedder& embedder, const VerifyConfig& cfg, unsigned jobs) {
  combined_score(lambda, 0.0, 0.0);
  std::vector<std::string> texts;
  for (const auto& r : records) {
    texts.push_back(r.record.claim_text);
    for (const auto& e : r.record.evidence) texts.push_back(e.text);
  }
  embedder.prefetch(texts);
  std::vector<ClaimVerdict> out(records.size());
  parallel_for(records.size(), jobs,
               [&](std::size_t i) { out[i] = verify_claim(records[i], lambda, embedder, cfg); });
  return out;
}

}  // namespace amrex
