#include "blockpat/dot.hpp"

namespace blockpat::dot {

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void Graph::attribute(std::string_view key, std::string_view value) {
  lines_.push_back(std::string(key) + "=" + quote(value));
}

void Graph::node_defaults(std::string_view attrs) {
  lines_.push_back("node [" + std::string(attrs) + "]");
}

void Graph::edge_defaults(std::string_view attrs) {
  lines_.push_back("edge [" + std::string(attrs) + "]");
}

void Graph::node(std::string_view id, std::string_view attrs) {
  std::string line(id);
  if (!attrs.empty()) line += " [" + std::string(attrs) + "]";
  lines_.push_back(std::move(line));
}

void Graph::edge(std::string_view from, std::string_view to, std::string_view attrs) {
  std::string line = std::string(from) + " -> " + std::string(to);
  if (!attrs.empty()) line += " [" + std::string(attrs) + "]";
  lines_.push_back(std::move(line));
}

void Graph::raw(std::string_view statement) { lines_.emplace_back(statement); }

void Graph::subgraph(const Graph& cluster) { clusters_.push_back(cluster); }

std::string Graph::body(const std::string& indent) const {
  std::string out;
  for (const auto& line : lines_) out += indent + line + ";\n";
  for (const auto& c : clusters_) {
    out += indent + "subgraph " + quote(c.name_) + " {\n";
    out += c.body(indent + "  ");
    out += indent + "}\n";
  }
  return out;
}

std::string Graph::str() const { return "digraph " + quote(name_) + " {\n" + body("  ") + "}\n"; }

}  // namespace blockpat::dot
