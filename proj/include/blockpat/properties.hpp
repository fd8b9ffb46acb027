#pragma once

#include <compare>
#include <set>
#include <string>
#include <vector>

#include "blockpat/dot.hpp"
#include "blockpat/model.hpp"

namespace blockpat {

/// `first` ≺ `second`: `second` can execute after `first`, possibly with other
/// blocks in between.
struct TemporalProperty {
  BlockLabel first;
  BlockLabel second;

  auto operator<=>(const TemporalProperty&) const = default;
};

struct PropertySet {
  ScriptSource source;
  std::set<TemporalProperty> properties;
};

/// Reflexive-transitive reachability between the locations of a model,
/// ignoring labels.
class ReachabilityRelation {
 public:
  explicit ReachabilityRelation(std::size_t locations)
      : size_(locations), bits_(locations * locations, false) {}

  std::size_t size() const { return size_; }
  bool reaches(Location from, Location to) const { return bits_[from * size_ + to]; }
  void set(Location from, Location to) { bits_[from * size_ + to] = true; }

  std::vector<Location> reachable_from(Location from) const;
  std::size_t pair_count() const;

 private:
  std::size_t size_;
  std::vector<bool> bits_;
};

ReachabilityRelation reachability(const ScriptModel& model);

/// All (b1, b2) such that some b1-transition ends at a location from which a
/// b2-transition's source is reachable. Expects an epsilon-free model.
PropertySet props(const ScriptModel& model);

/// "when green flag ≺ forever"
std::string format_property(const TemporalProperty& property);

/// One property per line in the notation of format_property.
std::string dump_properties(const std::set<TemporalProperty>& properties);

/// Property digraph over block names, node ids prefixed with `id_prefix` so
/// several graphs can share one DOT file as clusters. Properties in `missing`
/// are drawn red and dotted, as are blocks that occur only in missing
/// properties.
dot::Graph property_graph(const std::set<TemporalProperty>& present,
                          const std::set<TemporalProperty>& missing, const std::string& graph_name,
                          const std::string& id_prefix = "b");

/// Property digraph over block names. Properties in `missing` are drawn red
/// and dotted, as are blocks that occur only in missing properties.
std::string properties_to_dot(const std::set<TemporalProperty>& present,
                              const std::set<TemporalProperty>& missing = {},
                              const std::string& graph_name = "properties");

}  // namespace blockpat
