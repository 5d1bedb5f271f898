#pragma once

// Seeded generators for test graphs and small synthetic corpora.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "amrex/amr.hpp"
#include "amrex/errors.hpp"

namespace amrex::testing {

inline const std::vector<std::string>& concept_pool() {
  static const std::vector<std::string> pool = {"film",   "person", "name",    "direct-01", "city",
                                                "ride-01", "disease", "and",   "country",   "date-entity",
                                                "have-org-role-91", "know-01", "park"};
  return pool;
}

inline const std::vector<std::string>& role_pool() {
  static const std::vector<std::string> pool = {"ARG0", "ARG1", "ARG2", "name", "op1", "mod", "location"};
  return pool;
}

inline const std::vector<std::string>& constant_pool() {
  static const std::vector<std::string> pool = {"\"Marnie\"", "\"Rabies\"", "-", "2014", "6", "Parks"};
  return pool;
}

struct GraphShape {
  std::size_t nodes = 5;
  std::size_t concepts = 6;      // how much of the concept pool to draw from
  double reentrancy = 0.15;      // chance per node of an extra edge
  double attribute = 0.35;       // chance per node of a constant
  double inverse_role = 0.1;     // chance a tree edge is written as ROLE-of
};

// A connected, acyclic graph: a random tree over `shape.nodes` variables
// named prefix0..prefixN-1, plus forward re-entrant edges and constants.
inline AmrGraph random_graph(std::mt19937_64& rng, const std::string& prefix, GraphShape shape) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };
  const std::size_t pool = std::min(shape.concepts, concept_pool().size());
  for (int attempt = 0;; ++attempt) {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<Attribute> attrs;
    for (std::size_t i = 0; i < shape.nodes; ++i) {
      nodes.push_back({prefix + std::to_string(i), concept_pool()[pick(pool)]});
    }
    bool any_inverse = false;
    for (std::size_t i = 1; i < shape.nodes; ++i) {
      std::string role = role_pool()[pick(role_pool().size())];
      if (chance(shape.inverse_role)) {
        role += "-of";
        any_inverse = true;
      }
      edges.push_back({nodes[pick(i)].variable, role, nodes[i].variable});
    }
    for (std::size_t i = 0; i + 2 < shape.nodes; ++i) {
      if (!chance(shape.reentrancy) || any_inverse) continue;
      std::size_t target = i + 2 + pick(shape.nodes - i - 2);
      edges.push_back({nodes[i].variable, role_pool()[pick(role_pool().size())], nodes[target].variable});
    }
    for (std::size_t i = 0; i < shape.nodes; ++i) {
      if (chance(shape.attribute)) {
        attrs.push_back({nodes[i].variable, role_pool()[pick(role_pool().size())],
                         constant_pool()[pick(constant_pool().size())]});
      }
    }
    try {
      return AmrGraph(nodes.front().variable, nodes, edges, attrs);
    } catch (const GraphError&) {
      if (attempt > 100) throw;
    }
  }
}

// A premise built around a renamed copy of `hyp` with extra nodes, so that a
// good alignment exists but is not trivially the identity.
inline AmrGraph embed_in_premise(std::mt19937_64& rng, const AmrGraph& hyp, const std::string& prefix,
                                 std::size_t extra_nodes, double noise) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };
  const std::size_t n = hyp.nodes().size() + extra_nodes;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin() + 1, perm.end(), rng);
  std::vector<Node> nodes(n);
  std::unordered_map<std::string, std::string> rename;
  for (std::size_t i = 0; i < hyp.nodes().size(); ++i) {
    std::string concept_name = hyp.nodes()[i].concept_name;
    if (chance(noise)) concept_name = concept_pool()[pick(concept_pool().size())];
    std::string var = prefix + std::to_string(perm[i]);
    rename[hyp.nodes()[i].variable] = var;
    nodes[perm[i]] = {var, concept_name};
  }
  std::vector<Edge> edges;
  std::vector<Attribute> attrs;
  for (const auto& e : hyp.edges()) {
    std::string role = chance(noise) ? role_pool()[pick(role_pool().size())] : e.role;
    if (e.role.ends_with("-of") && !role.ends_with("-of")) role += "-of";
    edges.push_back({rename.at(e.source), role, rename.at(e.target)});
  }
  for (const auto& a : hyp.attributes()) {
    if (!chance(noise)) attrs.push_back({rename.at(a.source), a.role, a.value});
  }
  std::vector<std::string> placed;
  for (const auto& node : nodes) {
    if (!node.variable.empty()) placed.push_back(node.variable);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!nodes[perm[i]].variable.empty()) continue;
    std::string var = prefix + std::to_string(perm[i]);
    nodes[perm[i]] = {var, concept_pool()[pick(concept_pool().size())]};
    edges.push_back({placed[pick(placed.size())], role_pool()[pick(role_pool().size())], var});
    placed.push_back(var);
  }
  // Root of the copy is the premise root; move it to the front.
  std::string root = rename.at(hyp.root());
  std::stable_partition(nodes.begin(), nodes.end(), [&](const Node& x) { return x.variable == root; });
  return AmrGraph(root, nodes, edges, attrs);
}

inline std::string random_sentence(std::mt19937_64& rng, std::size_t words) {
  static const std::vector<std::string> vocab = {
      "the", "film", "was", "directed", "by", "a", "ride", "park", "disease", "named",
      "Marnie", "Rabies", "in", "city", "country", "released", "known", "for", "its", "story"};
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += vocab[rng() % vocab.size()];
  }
  return out;
}

struct Corpus {
  std::string claims_jsonl;
  std::string amrs_jsonl;
  std::size_t n_claims = 0;
};

// Claims with 1-4 evidence items each. About half the evidence graphs contain
// the claim graph, so every label shows up.
inline Corpus synthetic_corpus(std::uint64_t seed, std::size_t n_claims, const std::string& dataset) {
  std::mt19937_64 rng(seed);
  const bool averitec = dataset == "averitec";
  const std::vector<std::string> labels =
      averitec ? std::vector<std::string>{"S", "R", "N", "C"} : std::vector<std::string>{"S", "R", "N"};
  Corpus corpus;
  corpus.n_claims = n_claims;
  std::ostringstream claims, amrs;
  for (std::size_t c = 0; c < n_claims; ++c) {
    std::string claim_id = "c" + std::to_string(c);
    GraphShape shape;
    shape.nodes = 2 + rng() % 5;
    AmrGraph claim_graph = random_graph(rng, "a", shape);
    std::string claim_text = random_sentence(rng, 4 + rng() % 5);
    nlohmann::json record = {{"claim_id", claim_id}, {"claim", claim_text}, {"label", labels[rng() % labels.size()]}};
    nlohmann::json evidence = nlohmann::json::array();
    amrs << nlohmann::json{{"id", claim_id}, {"penman", serialize_penman(claim_graph, PenmanStyle::kCompact)}}.dump()
         << "\n";
    const std::size_t n_ev = 1 + rng() % 4;
    for (std::size_t k = 0; k < n_ev; ++k) {
      std::string ev_id = "e" + std::to_string(k);
      std::string text = (rng() % 2 ? claim_text + " " : std::string()) + random_sentence(rng, 3 + rng() % 6);
      AmrGraph ev_graph = rng() % 2 ? embed_in_premise(rng, claim_graph, "b", rng() % 4, 0.2)
                                    : random_graph(rng, "b", GraphShape{3 + rng() % 6});
      nlohmann::json item = {{"id", ev_id}, {"text", text}};
      if (averitec) item["kind"] = rng() % 2 ? "extractive" : "abstractive";
      evidence.push_back(item);
      amrs << nlohmann::json{{"id", claim_id + "/" + ev_id},
                             {"penman", serialize_penman(ev_graph, PenmanStyle::kCompact)}}
                  .dump()
           << "\n";
    }
    record["evidence"] = evidence;
    claims << record.dump() << "\n";
  }
  corpus.claims_jsonl = claims.str();
  corpus.amrs_jsonl = amrs.str();
  return corpus;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string fixture_path(const std::string& name) {
  return std::string(AMREX_FIXTURE_DIR) + "/" + name;
}

inline AmrGraph load_fixture(const std::string& name) { return parse_penman(read_file(fixture_path(name))); }

// The text after `# ::snt ` on the first line of a fixture.
inline std::string fixture_sentence(const std::string& name) {
  std::string text = read_file(fixture_path(name));
  auto start = text.find("# ::snt ");
  if (start == std::string::npos) return {};
  start += 8;
  return text.substr(start, text.find('\n', start) - start);
}

}  // namespace amrex::testing
