#include "amrex/dataset.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "amrex/errors.hpp"

namespace amrex {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

EvidenceKind parse_kind(std::string_view text, const std::string& where) {
  std::string key;
  for (char c : text) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (key == "sentence") return EvidenceKind::kSentence;
  if (key == "extractive") return EvidenceKind::kExtractive;
  if (key == "abstractive") return EvidenceKind::kAbstractive;
  if (key == "boolean") return EvidenceKind::kBoolean;
  throw DataError(where + ": unknown evidence kind '" + std::string(text) + "'");
}

std::string string_field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw DataError(where + ": missing string field \"" + key + "\"");
  }
  return it->get<std::string>();
}

// Calls `fn(record, where)` for each non-blank JSON line.
template <typename Fn>
void for_each_json_line(std::istream& in, const std::string& origin, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = origin + ":" + std::to_string(line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!record.is_object()) throw DataError(where + ": expected a JSON object");
    fn(record, where);
  }
}

ClaimRecord read_record(const json& j, Dataset dataset, const std::string& where) {
  ClaimRecord record;
  record.dataset = dataset;
  record.claim_id = string_field(j, "claim_id", where);
  record.claim_text = string_field(j, "claim", where);
  record.gold_label = parse_label(dataset, string_field(j, "label", where));
  auto ev = j.find("evidence");
  if (ev != j.end() && !ev->is_array()) throw DataError(where + ": \"evidence\" is not an array");
  std::unordered_set<std::string> ids;
  if (ev != j.end()) {
    for (const auto& item : *ev) {
      EvidenceItem e;
      e.evidence_id = string_field(item, "id", where);
      e.text = string_field(item, "text", where);
      if (auto k = item.find("kind"); k != item.end()) {
        e.kind = parse_kind(k->get<std::string>(), where);
      } else if (dataset == Dataset::kAveritec) {
        throw DataError(where + ": AVeriTeC evidence '" + e.evidence_id + "' has no answer kind");
      }
      if (auto q = item.find("question"); q != item.end() && q->is_string()) {
        e.question = q->get<std::string>();
      }
      if (!ids.insert(e.evidence_id).second) {
        throw DataError(where + ": duplicate evidence id '" + e.evidence_id + "' in claim '" +
                        record.claim_id + "'");
      }
      record.evidence.push_back(std::move(e));
    }
  }
  return record;
}

void check_fever(const ClaimRecord& record, const std::string& where) {
  if (record.evidence.empty()) {
    throw DataError(where + ": FEVER claim '" + record.claim_id +
                    "' has no evidence (NEI claims need the NEI-evidence release)");
  }
  for (const auto& e : record.evidence) {
    if (e.kind != EvidenceKind::kSentence || e.question) {
      throw DataError(where + ": FEVER evidence '" + e.evidence_id + "' must be a plain sentence");
    }
  }
}

// The AMR bundle is keyed by claim id, so it has to be unique.
void check_unique(std::set<std::string>& seen, const ClaimRecord& record, const std::string& where) {
  if (!seen.insert(record.claim_id).second) {
    throw DataError(where + ": duplicate claim id '" + record.claim_id + "'");
  }
}

// Drops boolean answers and applies the question mode.
void shape_averitec(ClaimRecord& record, QuestionMode mode, const std::string& where) {
  std::vector<EvidenceItem> kept;
  for (auto& e : record.evidence) {
    if (e.kind == EvidenceKind::kBoolean) continue;
    if (e.kind == EvidenceKind::kSentence) {
      throw DataError(where + ": AVeriTeC evidence '" + e.evidence_id +
                      "' needs an answer kind (extractive, abstractive or boolean)");
    }
    if (mode == QuestionMode::kQuestionPlusAnswer && e.question && !e.question->empty()) {
      e.text = *e.question + " " + e.text;
    }
    kept.push_back(std::move(e));
  }
  record.evidence = std::move(kept);
}

}  // namespace

std::string_view to_string(EvidenceKind kind) {
  switch (kind) {
    case EvidenceKind::kSentence: return "sentence";
    case EvidenceKind::kExtractive: return "extractive";
    case EvidenceKind::kAbstractive: return "abstractive";
    case EvidenceKind::kBoolean: return "boolean";
  }
  return "?";
}

QuestionMode parse_question_mode(std::string_view text) {
  if (text == "answer-only") return QuestionMode::kAnswerOnly;
  if (text == "question-plus-answer") return QuestionMode::kQuestionPlusAnswer;
  throw ValueError("unknown question mode '" + std::string(text) + "'");
}

std::string_view to_string(QuestionMode mode) {
  return mode == QuestionMode::kAnswerOnly ? "answer-only" : "question-plus-answer";
}

std::vector<ClaimRecord> read_fever(std::istream& in, const std::string& origin) {
  std::vector<ClaimRecord> out;
  std::set<std::string> seen;
  for_each_json_line(in, origin, [&](const json& j, const std::string& where) {
    auto record = read_record(j, Dataset::kFever, where);
    check_fever(record, where);
    check_unique(seen, record, where);
    out.push_back(std::move(record));
  });
  return out;
}

std::vector<ClaimRecord> load_fever(const std::string& path) {
  auto in = open_input(path);
  return read_fever(in, path);
}

std::vector<ClaimRecord> read_averitec(std::istream& in, QuestionMode mode,
                                       const std::string& origin) {
  std::vector<ClaimRecord> out;
  std::set<std::string> seen;
  for_each_json_line(in, origin, [&](const json& j, const std::string& where) {
    auto record = read_record(j, Dataset::kAveritec, where);
    check_unique(seen, record, where);
    shape_averitec(record, mode, where);
    out.push_back(std::move(record));
  });
  return out;
}

std::vector<ClaimRecord> load_averitec(const std::string& path, QuestionMode mode) {
  auto in = open_input(path);
  return read_averitec(in, mode, path);
}

std::vector<ClaimRecord> load_claims(Dataset dataset, const std::string& path, QuestionMode mode) {
  return dataset == Dataset::kFever ? load_fever(path) : load_averitec(path, mode);
}

void write_claims(std::ostream& out, const std::vector<ClaimRecord>& records) {
  for (const auto& r : records) {
    json j;
    j["claim_id"] = r.claim_id;
    j["claim"] = r.claim_text;
    j["label"] = short_name(r.gold_label.label());
    j["evidence"] = json::array();
    for (const auto& e : r.evidence) {
      json item{{"id", e.evidence_id}, {"text", e.text}, {"kind", to_string(e.kind)}};
      if (e.question) item["question"] = *e.question;
      j["evidence"].push_back(std::move(item));
    }
    out << j.dump() << '\n';
  }
}

std::vector<ClaimRecord> convert_averitec_release(std::istream& in, QuestionMode mode) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(std::string("AVeriTeC release: ") + e.what());
  }
  if (!doc.is_array()) throw DataError("AVeriTeC release: expected a JSON array of claims");
  std::vector<ClaimRecord> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& c = doc[i];
    std::string where = "claim " + std::to_string(i);
    ClaimRecord record;
    record.dataset = Dataset::kAveritec;
    record.claim_id = std::to_string(i);
    record.claim_text = string_field(c, "claim", where);
    record.gold_label = parse_label(Dataset::kAveritec, string_field(c, "label", where));
    if (auto qs = c.find("questions"); qs != c.end() && qs->is_array()) {
      for (std::size_t q = 0; q < qs->size(); ++q) {
        const auto& qa = (*qs)[q];
        std::string question = qa.value("question", "");
        auto answers = qa.find("answers");
        if (answers == qa.end() || !answers->is_array()) continue;
        for (std::size_t a = 0; a < answers->size(); ++a) {
          const auto& ans = (*answers)[a];
          EvidenceItem e;
          e.evidence_id = "q" + std::to_string(q) + "a" + std::to_string(a);
          e.text = string_field(ans, "answer", where);
          e.kind = parse_kind(string_field(ans, "answer_type", where), where);
          if (e.kind == EvidenceKind::kSentence) {
            throw DataError(where + ": unknown answer type 'sentence'");
          }
          e.question = question;
          record.evidence.push_back(std::move(e));
        }
      }
    }
    shape_averitec(record, mode, where);
    out.push_back(std::move(record));
  }
  return out;
}

std::vector<ClaimRecord> convert_fever_release(std::istream& in) {
  std::vector<ClaimRecord> out;
  for_each_json_line(in, "<fever release>", [&](const json& j, const std::string& where) {
    ClaimRecord record;
    record.dataset = Dataset::kFever;
    auto id = j.find("id");
    if (id == j.end()) throw DataError(where + ": missing \"id\"");
    record.claim_id = id->is_string() ? id->get<std::string>() : id->dump();
    record.claim_text = string_field(j, "claim", where);
    record.gold_label = parse_label(Dataset::kFever, string_field(j, "label", where));
    if (auto ev = j.find("evidence"); ev != j.end() && ev->is_array()) {
      for (std::size_t k = 0; k < ev->size(); ++k) {
        const auto& item = (*ev)[k];
        EvidenceItem e;
        e.evidence_id = "e" + std::to_string(k);
        if (item.is_string()) {
          e.text = item.get<std::string>();
        } else if (item.is_object()) {
          e.text = string_field(item, "text", where);
          if (auto eid = item.find("id"); eid != item.end()) {
            e.evidence_id = eid->is_string() ? eid->get<std::string>() : eid->dump();
          }
        } else {
          throw DataError(where + ": evidence entries must be strings or objects with \"text\"");
        }
        record.evidence.push_back(std::move(e));
      }
    }
    check_fever(record, where);
    out.push_back(std::move(record));
  });
  return out;
}

std::map<Label, std::size_t> label_counts(const std::vector<ClaimRecord>& records) {
  std::map<Label, std::size_t> counts;
  for (const auto& r : records) ++counts[r.gold_label.label()];
  return counts;
}

std::vector<std::size_t> reference_label_counts(Dataset dataset) {
  if (dataset == Dataset::kFever) return {3281, 3270, 3284};
  return {649, 1166, 115, 226};
}

AmrBundle read_amr_bundle(std::istream& in, const std::string& origin) {
  AmrBundle bundle;
  for_each_json_line(in, origin, [&](const json& j, const std::string& where) {
    auto id = string_field(j, "id", where);
    auto penman = string_field(j, "penman", where);
    if (!bundle.emplace(id, std::move(penman)).second) {
      throw DataError(where + ": duplicate AMR id '" + id + "'");
    }
  });
  return bundle;
}

AmrBundle load_amr_bundle(const std::string& path) {
  auto in = open_input(path);
  return read_amr_bundle(in, path);
}

std::vector<JoinedRecord> join_amrs(const std::vector<ClaimRecord>& records,
                                    const AmrBundle& bundle, bool strict) {
  std::vector<std::string> missing;
  auto lookup = [&](const std::string& id) -> std::optional<AmrGraph> {
    auto it = bundle.find(id);
    if (it == bundle.end()) return std::nullopt;
    try {
      return parse_penman(it->second);
    } catch (const ParseError& e) {
      throw DataError("AMR '" + id + "': " + e.what());
    } catch (const GraphError& e) {
      throw DataError("AMR '" + id + "': " + e.what());
    }
  };

  std::vector<JoinedRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    JoinedRecord joined{r, lookup(r.claim_id), {}};
    if (!joined.claim_amr) missing.push_back(r.claim_id);
    for (const auto& e : r.evidence) {
      // Evidence ids are only unique within a claim; prefer the qualified key.
      std::string qualified = r.claim_id + "/" + e.evidence_id;
      auto graph = bundle.count(qualified) ? lookup(qualified) : lookup(e.evidence_id);
      if (!graph) missing.push_back(qualified);
      joined.evidence_amrs.push_back(std::move(graph));
    }
    out.push_back(std::move(joined));
  }
  if (strict && !missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw DataError("AMR bundle is missing " + std::to_string(missing.size()) + " id(s): " + list);
  }
  return out;
}

}  // namespace amrex
