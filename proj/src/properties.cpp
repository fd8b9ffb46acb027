#include "blockpat/properties.hpp"

#include <map>

#include "blockpat/dot.hpp"

namespace blockpat {

std::vector<Location> ReachabilityRelation::reachable_from(Location from) const {
  std::vector<Location> out;
  for (Location to = 0; to < size_; ++to) {
    if (reaches(from, to)) out.push_back(to);
  }
  return out;
}

std::size_t ReachabilityRelation::pair_count() const {
  std::size_t n = 0;
  for (bool b : bits_) n += b ? 1 : 0;
  return n;
}

ReachabilityRelation reachability(const ScriptModel& model) {
  const std::size_t n = model.location_count;
  std::vector<std::vector<Location>> succ(n);
  for (const auto& t : model.transitions) succ[t.from].push_back(t.to);

  ReachabilityRelation rel(n);
  std::vector<Location> stack;
  for (Location start = 0; start < n; ++start) {
    rel.set(start, start);
    stack.assign(1, start);
    while (!stack.empty()) {
      Location cur = stack.back();
      stack.pop_back();
      for (Location nxt : succ[cur]) {
        if (!rel.reaches(start, nxt)) {
          rel.set(start, nxt);
          stack.push_back(nxt);
        }
      }
    }
  }
  return rel;
}

PropertySet props(const ScriptModel& model) {
  const std::size_t n = model.location_count;
  std::vector<std::set<BlockLabel>> arriving(n);
  std::vector<std::set<BlockLabel>> leaving(n);
  for (const auto& t : model.transitions) {
    if (!t.label) continue;
    arriving[t.to].insert(*t.label);
    leaving[t.from].insert(*t.label);
  }

  // Labels that can still execute from each location.
  auto reach = reachability(model);
  std::vector<std::set<BlockLabel>> later(n);
  for (Location l = 0; l < n; ++l) {
    if (arriving[l].empty()) continue;
    for (Location r : reach.reachable_from(l)) later[l].insert(leaving[r].begin(), leaving[r].end());
  }

  PropertySet out;
  out.source = model.source;
  for (Location l = 0; l < n; ++l) {
    for (const auto& first : arriving[l]) {
      for (const auto& second : later[l]) out.properties.insert({first, second});
    }
  }
  return out;
}

std::string format_property(const TemporalProperty& property) {
  return property.first.display() + " \xE2\x89\xBA " + property.second.display();
}

std::string dump_properties(const std::set<TemporalProperty>& properties) {
  std::string out;
  for (const auto& p : properties) out += format_property(p) + "\n";
  return out;
}

dot::Graph property_graph(const std::set<TemporalProperty>& present,
                          const std::set<TemporalProperty>& missing, const std::string& graph_name,
                          const std::string& id_prefix) {
  // Block -> whether it appears in at least one present property.
  std::map<BlockLabel, bool> blocks;
  for (const auto& p : present) blocks[p.first] = blocks[p.second] = true;
  for (const auto& p : missing) {
    blocks.try_emplace(p.first, false);
    blocks.try_emplace(p.second, false);
  }
  std::map<BlockLabel, std::string> ids;
  for (const auto& [label, _] : blocks) ids[label] = id_prefix + std::to_string(ids.size());

  dot::Graph g(graph_name);
  g.node_defaults("shape=box, style=rounded");
  for (const auto& [label, supported] : blocks) {
    std::string attrs = "label=" + dot::quote(label.display());
    if (!supported) attrs += ", color=red, fontcolor=red, style=\"rounded,dotted\"";
    g.node(ids[label], attrs);
  }
  for (const auto& p : present) g.edge(ids[p.first], ids[p.second]);
  for (const auto& p : missing) g.edge(ids[p.first], ids[p.second], "color=red, style=dotted");
  return g;
}

std::string properties_to_dot(const std::set<TemporalProperty>& present,
                              const std::set<TemporalProperty>& missing,
                              const std::string& graph_name) {
  return property_graph(present, missing, graph_name).str();
}

}  // namespace blockpat
