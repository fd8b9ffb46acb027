#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace blockpat::dot {

/// Double-quoted DOT identifier with quotes, backslashes and newlines escaped.
std::string quote(std::string_view text);

/// Minimal line-oriented digraph writer. Statements are emitted in insertion
/// order so output is stable.
class Graph {
 public:
  explicit Graph(std::string name) : name_(std::move(name)) {}

  void attribute(std::string_view key, std::string_view value);
  void node_defaults(std::string_view attrs);
  void edge_defaults(std::string_view attrs);
  void node(std::string_view id, std::string_view attrs = {});
  void edge(std::string_view from, std::string_view to, std::string_view attrs = {});
  void raw(std::string_view statement);
  void subgraph(const Graph& cluster);

  std::string str() const;

 private:
  std::string body(const std::string& indent) const;

  std::string name_;
  std::vector<std::string> lines_;
  std::vector<Graph> clusters_;
};

}  // namespace blockpat::dot
