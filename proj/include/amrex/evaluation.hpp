#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amrex/dataset.hpp"
#include "amrex/labels.hpp"
#include "amrex/verdict.hpp"

namespace amrex {

struct EvaluationReport {
  Dataset dataset = Dataset::kFever;
  std::optional<double> lambda;
  double accuracy = 0.0;
  std::map<Label, double> per_label_f1;
  double macro_f1 = 0.0;
  // confusion[gold][pred], both indexed in labels_of(dataset) order.
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t n_claims = 0;
};

// Per-label F1 = 2PR / (P + R), 0 when P + R = 0; macro F1 averages over the
// dataset's whole label set. Throws ValueError on length or dataset mismatch.
EvaluationReport score_predictions(std::span<const VerdictLabel> gold,
                                   std::span<const VerdictLabel> pred,
                                   std::optional<double> lambda = std::nullopt);

struct SweepPoint {
  double lambda = 0.0;
  EvaluationReport report;
  std::vector<ClaimVerdict> verdicts;
};

// Alignment and embeddings are computed once per pair; only the combination,
// thresholds and metrics are re-evaluated for each lambda.
std::vector<SweepPoint> lambda_sweep(const std::vector<JoinedRecord>& records,
                                     std::span<const double> lambdas, Embedder& embedder,
                                     const VerifyConfig& cfg, unsigned jobs = 1);

// "start:stop:step" (inclusive stop), e.g. "0:1:0.1" -> 11 values; a plain
// number or comma-separated list is also accepted. Values are rounded to 12
// decimals so that 0.3 is the literal 0.3.
std::vector<double> parse_sweep(const std::string& text);

std::string report_json(const EvaluationReport& report);

// Rows are models (one per lambda), columns per-label F1, macro F1, accuracy.
std::string markdown_table(std::span<const EvaluationReport> reports);

}  // namespace amrex
