#include <cctype>
#include <string>
#include <unordered_set>

#include "amrex/amr.hpp"
#include "amrex/errors.hpp"

namespace amrex {

class PenmanReader {
 public:
  explicit PenmanReader(std::string_view text) : text_(text) {}

  AmrGraph read() {
    skip_space();
    if (at_end()) throw ParseError("empty input", pos_);
    if (peek() != '(') throw ParseError("expected '('", pos_);
    std::size_t root = read_node();
    skip_space();
    if (!at_end()) {
      if (peek() == ')') throw ParseError("unbalanced parenthesis", pos_);
      throw ParseError("unexpected trailing input", pos_);
    }
    std::string root_var = nodes_[root].variable;
    return AmrGraph(AmrGraph::Unchecked{}, std::move(root_var), std::move(nodes_),
                    std::move(edges_), std::move(attributes_), std::move(children_));
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  static bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

  void skip_space() {
    while (!at_end()) {
      if (is_space(peek())) {
        ++pos_;
      } else if (peek() == '#') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void unbalanced() const { throw ParseError("unbalanced parenthesis", text_.size()); }

  // Reads up to whitespace or a parenthesis; also stops at '/' when `stop_at_slash`.
  std::string read_token(bool stop_at_slash) {
    std::size_t start = pos_;
    while (!at_end()) {
      char c = peek();
      if (is_space(c) || c == '(' || c == ')' || (stop_at_slash && c == '/')) break;
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  // Returns the literal including its quotes.
  std::string read_quoted() {
    std::size_t start = pos_++;
    while (!at_end() && peek() != '"') {
      if (peek() == '\\' && pos_ + 1 < text_.size()) ++pos_;
      ++pos_;
    }
    if (at_end()) throw ParseError("unterminated string", start);
    ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::size_t read_node() {
    ++pos_;  // '('
    skip_space();
    if (at_end()) unbalanced();
    std::size_t var_offset = pos_;
    std::string variable = read_token(true);
    if (variable.empty()) throw ParseError("missing variable", var_offset);
    if (declared_.count(variable)) {
      throw ParseError("duplicate variable '" + variable + "'", var_offset);
    }
    skip_space();
    if (at_end()) unbalanced();
    std::string concept_name;
    std::size_t concept_offset = pos_;
    if (peek() == '/') {
      ++pos_;
      skip_space();
      if (at_end()) unbalanced();
      concept_offset = pos_;
      concept_name = peek() == '"' ? read_quoted() : read_token(false);
    }
    if (concept_name.empty()) throw ParseError("empty concept", concept_offset);

    std::size_t index = nodes_.size();
    nodes_.push_back({variable, std::move(concept_name)});
    children_.emplace_back();
    declared_.insert(variable);

    for (;;) {
      skip_space();
      if (at_end()) unbalanced();
      char c = peek();
      if (c == ')') {
        ++pos_;
        return index;
      }
      if (c != ':') throw ParseError("expected role or ')'", pos_);
      std::size_t role_offset = pos_;
      ++pos_;
      std::string role = read_token(false);
      if (role.empty()) throw ParseError("empty role", role_offset);
      skip_space();
      if (at_end()) unbalanced();
      c = peek();
      if (c == '(') {
        std::size_t child = read_node();
        children_[index].push_back({false, edges_.size()});
        edges_.push_back({variable, std::move(role), nodes_[child].variable});
      } else if (c == ')') {
        throw ParseError("missing value for role ':" + role + "'", pos_);
      } else {
        std::string value = c == '"' ? read_quoted() : read_token(false);
        if (declared_.count(value)) {
          children_[index].push_back({false, edges_.size()});
          edges_.push_back({variable, std::move(role), std::move(value)});
        } else {
          children_[index].push_back({true, attributes_.size()});
          attributes_.push_back({variable, std::move(role), std::move(value)});
        }
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<Attribute> attributes_;
  std::vector<std::vector<AmrGraph::ChildRef>> children_;
  std::unordered_set<std::string> declared_;
};

AmrGraph parse_penman(std::string_view text) { return PenmanReader(text).read(); }

namespace {

class PenmanWriter {
 public:
  PenmanWriter(const AmrGraph& graph, PenmanStyle style)
      : graph_(graph), style_(style), written_(graph.nodes().size(), false) {}

  std::string write() {
    write_node(*graph_.index_of(graph_.root()), 0);
    return std::move(out_);
  }

 private:
  void separator(int depth) {
    if (style_ == PenmanStyle::kCompact) {
      out_ += ' ';
    } else {
      out_ += '\n';
      out_.append(static_cast<std::size_t>(depth) * 3, ' ');
    }
  }

  void write_node(std::size_t index, int depth) {
    const Node& node = graph_.nodes()[index];
    written_[index] = true;
    out_ += '(';
    out_ += node.variable;
    out_ += '/';
    out_ += node.concept_name;
    for (const auto& child : graph_.children_of(index)) {
      separator(depth + 1);
      out_ += ':';
      if (child.is_attribute) {
        const Attribute& attr = graph_.attributes()[child.index];
        out_ += attr.role;
        out_ += ' ';
        out_ += attr.value;
        continue;
      }
      const Edge& edge = graph_.edges()[child.index];
      out_ += edge.role;
      out_ += ' ';
      std::size_t target = *graph_.index_of(edge.target);
      if (written_[target]) {
        out_ += edge.target;
      } else {
        write_node(target, depth + 1);
      }
    }
    out_ += ')';
  }

  const AmrGraph& graph_;
  PenmanStyle style_;
  std::vector<bool> written_;
  std::string out_;
};

}  // namespace

std::string serialize_penman(const AmrGraph& graph, PenmanStyle style) {
  return PenmanWriter(graph, style).write();
}

}  // namespace amrex
