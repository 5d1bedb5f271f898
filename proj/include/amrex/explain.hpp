#pragma once

#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "amrex/amr.hpp"
#include "amrex/entailment.hpp"
#include "amrex/labels.hpp"

namespace amrex {

struct MappingLine {
  std::string hyp_var;
  std::string hyp_concept;
  std::string prem_var;
  std::string prem_concept;
};

// Immutable snapshot of everything needed to justify one (claim, evidence) decision.
struct ExplanationBundle {
  std::string claim_text;
  std::string evidence_text;
  std::string claim_penman;
  std::string evidence_penman;
  std::vector<MappingLine> mapping;      // hypothesis declaration order
  std::vector<std::string> unmapped;     // hypothesis variables with no image, as `v(concept)`
  EntailmentScore score;
  std::optional<VerdictLabel> label;
};

// Throws AlignmentError if the mapping does not fit the two graphs.
ExplanationBundle make_bundle(const std::string& claim_text, const AmrGraph& claim_amr,
                              const std::string& evidence_text, const AmrGraph& evidence_amr,
                              const EntailmentScore& score,
                              std::optional<VerdictLabel> label = std::nullopt);

// `<hv>(<hconcept>) --> <pv>(<pconcept>)` per mapped pair, then an
// `unmapped:` section when some hypothesis variables have no image.
std::string render_mapping(const ExplanationBundle& bundle);

std::string render_markdown(const ExplanationBundle& bundle);

// Placeholders: {claim} {evidence} {claim_amr} {evidence_amr} {mapping}
// {smatch_p} {cosine} {lambda} {f_value} {decision} {label}.
// Throws ValueError naming an unknown placeholder.
std::string build_prompt(const ExplanationBundle& bundle, const std::string& prompt_template);

extern const char* const kDefaultPromptTemplate;

struct GenerationServiceConfig {
  std::string url;
  double timeout_seconds = 60.0;
  int max_concurrent = 4;
};

// `POST /generate {"prompt": ...}` -> `{"text": ...}`, with at most
// `max_concurrent` requests in flight.
class GenerationClient {
 public:
  explicit GenerationClient(GenerationServiceConfig cfg);

  // Throws TransportError when unreachable, on non-200, or on an empty completion.
  std::string generate(const std::string& prompt);

 private:
  GenerationServiceConfig cfg_;
  std::counting_semaphore<> slots_;
};

std::string generate_explanation(const std::string& prompt, const GenerationServiceConfig& cfg);

}  // namespace amrex
