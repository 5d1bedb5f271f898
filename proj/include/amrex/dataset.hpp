#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amrex/amr.hpp"
#include "amrex/labels.hpp"

namespace amrex {

enum class EvidenceKind { kSentence, kExtractive, kAbstractive, kBoolean };

std::string_view to_string(EvidenceKind kind);

struct EvidenceItem {
  std::string evidence_id;
  std::string text;
  EvidenceKind kind = EvidenceKind::kSentence;
  std::optional<std::string> question;
};

struct ClaimRecord {
  std::string claim_id;
  std::string claim_text;
  Dataset dataset = Dataset::kFever;
  VerdictLabel gold_label{Dataset::kFever, Label::kNotEnoughInfo};
  std::vector<EvidenceItem> evidence;
};

enum class QuestionMode { kAnswerOnly, kQuestionPlusAnswer };

QuestionMode parse_question_mode(std::string_view text);
std::string_view to_string(QuestionMode mode);

// Normalised claims files: one JSON object per line,
//   {"claim_id", "claim", "label", "evidence": [{"id", "text", "kind", "question"?}]}.
// FEVER: every claim must carry evidence (NEI included); kind defaults to "sentence".
std::vector<ClaimRecord> read_fever(std::istream& in, const std::string& origin = "<stream>");
std::vector<ClaimRecord> load_fever(const std::string& path);

// AVeriTeC: boolean answers are dropped; the others become evidence whose text
// is the answer, or "question answer" under kQuestionPlusAnswer. A claim left
// with no evidence is kept (the verdict stage applies the empty-evidence policy).
std::vector<ClaimRecord> read_averitec(std::istream& in, QuestionMode mode,
                                       const std::string& origin = "<stream>");
std::vector<ClaimRecord> load_averitec(const std::string& path, QuestionMode mode);

std::vector<ClaimRecord> load_claims(Dataset dataset, const std::string& path,
                                     QuestionMode mode = QuestionMode::kAnswerOnly);

// Writes records back in the normalised schema (label as a single-letter code).
void write_claims(std::ostream& out, const std::vector<ClaimRecord>& records);

// Converters from upstream release layouts to normalised JSONL lines.
// AVeriTeC: a JSON array of {"claim", "label", "questions": [{"question",
// "answers": [{"answer", "answer_type"}]}]}; claim ids are array positions.
std::vector<ClaimRecord> convert_averitec_release(std::istream& in, QuestionMode mode);
// FEVER (NEI-evidence variant): JSONL of {"id", "claim", "label", "evidence":
// [string | {"id"?, "text"}]}.
std::vector<ClaimRecord> convert_fever_release(std::istream& in);

std::map<Label, std::size_t> label_counts(const std::vector<ClaimRecord>& records);

// Reference label distributions (S, R, N[, C]) of the full evaluation splits.
std::vector<std::size_t> reference_label_counts(Dataset dataset);

// Id -> Penman text, from `{"id", "penman"}` lines.
using AmrBundle = std::unordered_map<std::string, std::string>;
AmrBundle read_amr_bundle(std::istream& in, const std::string& origin = "<stream>");
AmrBundle load_amr_bundle(const std::string& path);

struct JoinedRecord {
  ClaimRecord record;
  std::optional<AmrGraph> claim_amr;
  std::vector<std::optional<AmrGraph>> evidence_amrs;  // parallel to record.evidence
};

// Pairs every text with its parsed graph. Strict mode fails listing all
// missing ids; unparseable Penman always fails with the id and offset.
std::vector<JoinedRecord> join_amrs(const std::vector<ClaimRecord>& records,
                                    const AmrBundle& bundle, bool strict = true);

}  // namespace amrex
