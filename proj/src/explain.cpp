#include "amrex/explain.hpp"

#include <cstdio>
#include <map>
#include <regex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "amrex/errors.hpp"
#include "http_util.hpp"

namespace amrex {

const char* const kDefaultPromptTemplate =
    R"(You are given a claim, a piece of evidence, and an alignment between the
Abstract Meaning Representation (AMR) graphs of the two sentences. Each
alignment line maps a claim node to an evidence node as
claim_var(concept) --> evidence_var(concept).

Claim: {claim}
Evidence: {evidence}

Claim AMR:
{claim_amr}

Evidence AMR:
{evidence_amr}

Node alignment:
{mapping}

Structural containment (Smatch precision): {smatch_p}
Textual similarity (cosine): {cosine}
Combined score with weight {lambda}: {f_value} (entailment decision: {decision})
Predicted veracity: {label}

Write your answer in three parts.
Key Mappings: go through the alignment lines one by one and say whether each
pair of concepts agrees in meaning or signals a mismatch.
Explanation: summarise which parts of the claim are and are not supported by
the evidence, using only the alignment above.
Classification: state whether the evidence SUPPORTS or REFUTES the claim, or
gives NOT ENOUGH INFO, and justify it in one or two sentences.
)";

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string label_name(const std::optional<VerdictLabel>& label) {
  if (!label) return "unknown";
  switch (label->label()) {
    case Label::kSupports: return "SUPPORTS";
    case Label::kRefutes: return "REFUTES";
    case Label::kNotEnoughInfo: return "NOT ENOUGH INFO";
    case Label::kConflicting: return "CONFLICTING EVIDENCE/CHERRYPICKING";
  }
  return "unknown";
}

}  // namespace

ExplanationBundle make_bundle(const std::string& claim_text, const AmrGraph& claim_amr,
                              const std::string& evidence_text, const AmrGraph& evidence_amr,
                              const EntailmentScore& score, std::optional<VerdictLabel> label) {
  ExplanationBundle bundle;
  bundle.claim_text = claim_text;
  bundle.evidence_text = evidence_text;
  bundle.claim_penman = serialize_penman(claim_amr);
  bundle.evidence_penman = serialize_penman(evidence_amr);
  bundle.score = score;
  bundle.label = label;

  std::map<std::string, std::string> image;
  for (const auto& [hyp, prem] : score.mapping.pairs) {
    if (!claim_amr.has_variable(hyp) || !evidence_amr.has_variable(prem)) {
      throw AlignmentError("mapping pair " + hyp + " -> " + prem + " does not fit the graphs");
    }
    image[hyp] = prem;
  }
  for (const auto& node : claim_amr.nodes()) {
    auto it = image.find(node.variable);
    if (it == image.end()) {
      bundle.unmapped.push_back(node.variable + "(" + node.concept_name + ")");
    } else {
      bundle.mapping.push_back(
          {node.variable, node.concept_name, it->second, evidence_amr.concept_of(it->second)});
    }
  }
  return bundle;
}

std::string render_mapping(const ExplanationBundle& bundle) {
  std::string out;
  for (const auto& line : bundle.mapping) {
    out += line.hyp_var + "(" + line.hyp_concept + ") --> " + line.prem_var + "(" +
           line.prem_concept + ")\n";
  }
  if (!bundle.unmapped.empty()) {
    out += "unmapped:\n";
    for (const auto& v : bundle.unmapped) out += "  " + v + "\n";
  }
  return out;
}

std::string render_markdown(const ExplanationBundle& bundle) {
  std::ostringstream out;
  out << "**Claim:** " << bundle.claim_text << "\n\n";
  out << "**Evidence:** " << bundle.evidence_text << "\n\n";
  out << "```\n" << bundle.claim_penman << "\n```\n\n";
  out << "```\n" << bundle.evidence_penman << "\n```\n\n";
  out << "**Node mapping**\n\n```\n" << render_mapping(bundle) << "```\n\n";
  out << "| smatch_p | cosine | lambda | f | decision | label |\n";
  out << "|---|---|---|---|---|---|\n";
  out << "| " << num(bundle.score.smatch_p) << " | " << num(bundle.score.cosine_sim) << " | "
      << num(bundle.score.lambda) << " | " << num(bundle.score.f_value) << " | "
      << to_int(bundle.score.decision) << " | " << label_name(bundle.label) << " |\n";
  return out.str();
}

std::string build_prompt(const ExplanationBundle& bundle, const std::string& prompt_template) {
  std::string mapping = render_mapping(bundle);
  if (!mapping.empty() && mapping.back() == '\n') mapping.pop_back();
  const std::map<std::string, std::string> values = {
      {"claim", bundle.claim_text},
      {"evidence", bundle.evidence_text},
      {"claim_amr", bundle.claim_penman},
      {"evidence_amr", bundle.evidence_penman},
      {"mapping", mapping},
      {"smatch_p", num(bundle.score.smatch_p)},
      {"cosine", num(bundle.score.cosine_sim)},
      {"lambda", num(bundle.score.lambda)},
      {"f_value", num(bundle.score.f_value)},
      {"decision", bundle.score.decision == Decision::kEntailed ? "+1" : "-1"},
      {"label", label_name(bundle.label)},
  };
  static const std::regex placeholder(R"(\{([A-Za-z_][A-Za-z0-9_]*)\})");
  std::string out;
  auto begin = std::sregex_iterator(prompt_template.begin(), prompt_template.end(), placeholder);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    auto value = values.find(m[1].str());
    if (value == values.end()) {
      throw ValueError("unknown placeholder {" + m[1].str() + "} in prompt template");
    }
    out.append(prompt_template, last, static_cast<std::size_t>(m.position(0)) - last);
    out += value->second;
    last = static_cast<std::size_t>(m.position(0) + m.length(0));
  }
  out.append(prompt_template, last);
  return out;
}

GenerationClient::GenerationClient(GenerationServiceConfig cfg)
    : cfg_(std::move(cfg)), slots_(std::max(1, cfg_.max_concurrent)) {
  detail::split_url(cfg_.url);
}

std::string GenerationClient::generate(const std::string& prompt) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{slots_};

  auto url = detail::split_url(cfg_.url);
  httplib::Client client(url.origin);
  auto secs = static_cast<time_t>(cfg_.timeout_seconds);
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  nlohmann::json body = {{"prompt", prompt}};
  auto res = client.Post(url.prefix + "/generate", body.dump(), "application/json");
  if (!res) {
    throw TransportError("generation service " + cfg_.url + " unreachable: " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("generation service " + cfg_.url + " returned HTTP " +
                         std::to_string(res->status));
  }
  std::string text;
  try {
    text = nlohmann::json::parse(res->body).at("text").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed generation response: ") + e.what());
  }
  if (text.empty()) throw TransportError("generation service returned an empty completion");
  return text;
}

std::string generate_explanation(const std::string& prompt, const GenerationServiceConfig& cfg) {
  return GenerationClient(cfg).generate(prompt);
}

}  // namespace amrex
