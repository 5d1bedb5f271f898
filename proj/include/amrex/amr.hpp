#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace amrex {

struct Node {
  std::string variable;
  std::string concept_name;
};

// Variable-to-variable role edge, stored exactly as written (`ARG0-of` stays inverted).
struct Edge {
  std::string source;
  std::string role;
  std::string target;
};

// Variable-to-constant role. The constant is verbatim text (`21`, `"Rabies"`, `-`).
struct Attribute {
  std::string source;
  std::string role;
  std::string value;
};

// A rooted, directed, acyclic semantic graph. Roles are stored without the
// leading ':'. Construction validates every structural invariant and throws
// GraphError on violation, so an AmrGraph value is always well formed.
class AmrGraph {
 public:
  // Position of a child among a node's outgoing roles, in declaration order.
  struct ChildRef {
    bool is_attribute;
    std::size_t index;
  };

  AmrGraph(std::string root, std::vector<Node> nodes, std::vector<Edge> edges,
           std::vector<Attribute> attributes);

  const std::string& root() const { return root_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Attribute> attributes() const { return attributes_; }

  std::optional<std::size_t> index_of(std::string_view variable) const;
  bool has_variable(std::string_view variable) const { return index_of(variable).has_value(); }
  // Throws GraphError for an unknown variable.
  const std::string& concept_of(std::string_view variable) const;

  // Outgoing edges and attributes of a node interleaved in declaration order.
  const std::vector<ChildRef>& children_of(std::size_t node_index) const {
    return children_[node_index];
  }

 private:
  friend class PenmanReader;
  struct Unchecked {};
  AmrGraph(Unchecked, std::string root, std::vector<Node> nodes, std::vector<Edge> edges,
           std::vector<Attribute> attributes, std::vector<std::vector<ChildRef>> children);

  void build_index();
  void validate() const;

  std::string root_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<Attribute> attributes_;
  std::vector<std::vector<ChildRef>> children_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class TripleKind { kTop, kInstance, kRelation, kAttribute };

// The comparable unit of a graph. For instance and top triples `role` is empty
// and `arg2` is the concept; for relations `arg2` is a variable; for
// attributes it is the constant.
struct Triple {
  TripleKind kind;
  std::string arg1;
  std::string role;
  std::string arg2;

  auto operator<=>(const Triple&) const = default;
};

std::string_view to_string(TripleKind kind);
std::string to_string(const Triple& triple);

// Parses one graph in Penman notation. A bare token after a role is a
// re-entrant reference when that variable was declared earlier in the text,
// and a constant otherwise. `#` starts a comment that runs to end of line.
AmrGraph parse_penman(std::string_view text);

enum class PenmanStyle { kIndented, kCompact };

// Children are written in declaration order; a node reached a second time is
// written as a bare variable.
std::string serialize_penman(const AmrGraph& graph, PenmanStyle style = PenmanStyle::kIndented);

// One instance triple per node, one relation triple per edge, one attribute
// triple per attribute, plus top(root, root-concept) when `include_top`.
std::vector<Triple> extract_triples(const AmrGraph& graph, bool include_top = true);

}  // namespace amrex
