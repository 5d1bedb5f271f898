#include "amrex/amr.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "amrex/errors.hpp"

namespace amrex {

namespace {

// Roles that end in "-of" without being inversions.
constexpr std::array<std::string_view, 3> kNonInvertedOfRoles = {"consist-of", "prep-out-of",
                                                                 "prep-on-behalf-of"};

bool is_inverted_role(std::string_view role) {
  if (role.size() <= 3 || !role.ends_with("-of")) return false;
  return std::find(kNonInvertedOfRoles.begin(), kNonInvertedOfRoles.end(), role) ==
         kNonInvertedOfRoles.end();
}

}  // namespace

AmrGraph::AmrGraph(std::string root, std::vector<Node> nodes, std::vector<Edge> edges,
                   std::vector<Attribute> attributes)
    : root_(std::move(root)),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      attributes_(std::move(attributes)) {
  build_index();
  children_.assign(nodes_.size(), {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (auto src = index_of(edges_[i].source)) children_[*src].push_back({false, i});
  }
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (auto src = index_of(attributes_[i].source)) children_[*src].push_back({true, i});
  }
  validate();
}

AmrGraph::AmrGraph(Unchecked, std::string root, std::vector<Node> nodes,
                   std::vector<Edge> edges, std::vector<Attribute> attributes,
                   std::vector<std::vector<ChildRef>> children)
    : root_(std::move(root)),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      attributes_(std::move(attributes)),
      children_(std::move(children)) {
  build_index();
  validate();
}

void AmrGraph::build_index() {
  index_.clear();
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i].variable, i).second) {
      throw GraphError("duplicate variable '" + nodes_[i].variable + "'");
    }
  }
}

std::optional<std::size_t> AmrGraph::index_of(std::string_view variable) const {
  auto it = index_.find(std::string(variable));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& AmrGraph::concept_of(std::string_view variable) const {
  auto idx = index_of(variable);
  if (!idx) throw GraphError("unknown variable '" + std::string(variable) + "'");
  return nodes_[*idx].concept_name;
}

void AmrGraph::validate() const {
  if (!index_of(root_)) throw GraphError("root '" + root_ + "' is not a node");
  for (const auto& node : nodes_) {
    if (node.variable.empty()) throw GraphError("empty variable id");
    if (node.concept_name.empty()) {
      throw GraphError("empty concept for variable '" + node.variable + "'");
    }
  }

  const std::size_t n = nodes_.size();
  // Adjacency as written (for reachability) and in canonical direction (for cycles).
  std::vector<std::vector<std::size_t>> written(n), canonical(n);
  for (const auto& edge : edges_) {
    auto src = index_of(edge.source);
    auto dst = index_of(edge.target);
    if (!src) throw GraphError("edge source '" + edge.source + "' is not a node");
    if (!dst) throw GraphError("edge target '" + edge.target + "' is not a node");
    if (edge.role.empty()) throw GraphError("empty role on edge from '" + edge.source + "'");
    written[*src].push_back(*dst);
    if (is_inverted_role(edge.role)) {
      canonical[*dst].push_back(*src);
    } else {
      canonical[*src].push_back(*dst);
    }
  }
  for (const auto& attr : attributes_) {
    if (!index_of(attr.source)) {
      throw GraphError("attribute source '" + attr.source + "' is not a node");
    }
    if (attr.role.empty()) throw GraphError("empty role on attribute of '" + attr.source + "'");
    if (attr.value.empty()) throw GraphError("empty constant on attribute of '" + attr.source + "'");
    if (index_of(attr.value)) {
      throw GraphError("constant '" + attr.value + "' shadows a variable of the same name");
    }
  }

  // Iterative three-colour DFS for cycle detection.
  std::vector<int> colour(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (colour[start] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
    colour[start] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < canonical[node].size()) {
        std::size_t child = canonical[node][next++];
        if (colour[child] == 1) {
          throw GraphError("cycle through variable '" + nodes_[child].variable + "'");
        }
        if (colour[child] == 0) {
          colour[child] = 1;
          stack.emplace_back(child, 0);
        }
      } else {
        colour[node] = 2;
        stack.pop_back();
      }
    }
  }

  std::vector<bool> seen(n, false);
  std::vector<std::size_t> todo{*index_of(root_)};
  seen[todo.front()] = true;
  while (!todo.empty()) {
    std::size_t node = todo.back();
    todo.pop_back();
    for (std::size_t child : written[node]) {
      if (!seen[child]) {
        seen[child] = true;
        todo.push_back(child);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) {
      throw GraphError("variable '" + nodes_[i].variable + "' is not reachable from the root");
    }
  }
}

std::string_view to_string(TripleKind kind) {
  switch (kind) {
    case TripleKind::kTop: return "top";
    case TripleKind::kInstance: return "instance";
    case TripleKind::kRelation: return "relation";
    case TripleKind::kAttribute: return "attribute";
  }
  return "?";
}

std::string to_string(const Triple& triple) {
  std::string out(to_string(triple.kind));
  out += '(';
  out += triple.arg1;
  if (!triple.role.empty()) {
    out += ", :";
    out += triple.role;
  }
  out += ", ";
  out += triple.arg2;
  out += ')';
  return out;
}

std::vector<Triple> extract_triples(const AmrGraph& graph, bool include_top) {
  std::vector<Triple> triples;
  triples.reserve(graph.nodes().size() + graph.edges().size() + graph.attributes().size() + 1);
  if (include_top) {
    triples.push_back({TripleKind::kTop, graph.root(), "", graph.concept_of(graph.root())});
  }
  for (const auto& node : graph.nodes()) {
    triples.push_back({TripleKind::kInstance, node.variable, "", node.concept_name});
  }
  for (const auto& edge : graph.edges()) {
    triples.push_back({TripleKind::kRelation, edge.source, edge.role, edge.target});
  }
  for (const auto& attr : graph.attributes()) {
    triples.push_back({TripleKind::kAttribute, attr.source, attr.role, attr.value});
  }
  return triples;
}

}  // namespace amrex
