#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "blockpat/ingest.hpp"

namespace blockpat {

/// Identity of a command block with its inputs abstracted away: the opcode,
/// or "procedures_call:<prototype>" / "procedures_definition:<prototype>" for
/// custom blocks.
struct BlockLabel {
  std::string id;

  /// Readable name for reports ("move steps").
  std::string display() const;

  auto operator<=>(const BlockLabel&) const = default;
};

BlockLabel label_of(const RawBlock& block);

using Location = std::uint32_t;

/// A control transition; an empty label is an epsilon move.
struct Transition {
  Location from = 0;
  std::optional<BlockLabel> label;
  Location to = 0;

  bool is_epsilon() const { return !label.has_value(); }
  auto operator<=>(const Transition&) const = default;
};

/// Control model of one script. Locations are the integers
/// [0, location_count).
struct ScriptModel {
  std::size_t location_count = 1;
  Location entry = 0;
  std::set<Location> exits;
  std::vector<Transition> transitions;
  ScriptSource source;

  Location add_location() { return static_cast<Location>(location_count++); }
  void add(Location from, std::optional<BlockLabel> label, Location to) {
    transitions.push_back({from, std::move(label), to});
  }

  std::set<BlockLabel> labels() const;
  bool has_epsilon() const;
  /// Number of transitions carrying a block label.
  std::size_t labeled_transition_count() const;
};

/// Builds the model of one script straight from its block tree. The result
/// still contains the epsilon moves used for joins and loop back-edges.
ScriptModel build_script_model(const ScriptSource& script, const RawProject& project);

/// Epsilon-free model with the same block-labeled paths from the entry.
/// Unreachable locations are pruned and the rest renumbered breadth-first.
ScriptModel eliminate_epsilon(const ScriptModel& model);

/// Turns transitions whose label satisfies `drop` into epsilon moves and
/// eliminates them.
ScriptModel abstract_labels(const ScriptModel& model,
                            const std::function<bool(const BlockLabel&)>& drop);

/// build_script_model followed by eliminate_epsilon.
ScriptModel extract_script_model(const ScriptSource& script, const RawProject& project);

/// Graphviz rendering: circles for locations, double circles for exits, an
/// arrow into the entry, and block names on the edges.
std::string to_dot(const ScriptModel& model, const std::string& graph_name = "script");

}  // namespace blockpat
