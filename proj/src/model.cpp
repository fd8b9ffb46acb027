#include "blockpat/model.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "blockpat/dot.hpp"

namespace blockpat {
namespace {

class ModelBuilder {
 public:
  ModelBuilder(const Actor& actor, ScriptModel& model) : actor_(actor), model_(model) {}

  // Appends the stack starting at `start` from `cursor`. Returns the location
  // where control falls through, or nothing if the stack never completes.
  std::optional<Location> stack(const std::optional<BlockId>& start, Location cursor) {
    const RawBlock* block = start ? actor_.find(*start) : nullptr;
    while (block) {
      auto next = block_step(*block, cursor);
      if (!next) return std::nullopt;
      cursor = *next;
      block = block->next ? actor_.find(*block->next) : nullptr;
    }
    return cursor;
  }

 private:
  std::optional<BlockId> body(const RawBlock& block, std::size_t slot) const {
    return slot < block.substacks.size() ? block.substacks[slot] : std::nullopt;
  }

  std::optional<Location> block_step(const RawBlock& block, Location cur) {
    BlockLabel label = label_of(block);
    switch (classify_opcode(block.opcode)) {
      case BlockKind::Reporter:
        return cur;

      case BlockKind::Hat:
      case BlockKind::Command:
      case BlockKind::Unknown: {
        Location fresh = model_.add_location();
        model_.add(cur, label, fresh);
        return fresh;
      }

      case BlockKind::Cap: {
        Location fresh = model_.add_location();
        model_.add(cur, label, fresh);
        // "stop other scripts in sprite" is the one cap variant that may
        // carry a next block; it behaves like a command then.
        if (block.next) return fresh;
        model_.exits.insert(fresh);
        return std::nullopt;
      }

      case BlockKind::ControlForever: {
        Location head = model_.add_location();
        model_.add(cur, label, head);
        auto end = stack(body(block, 0), head);
        if (end && *end != head) model_.add(*end, std::nullopt, head);
        return std::nullopt;
      }

      case BlockKind::ControlIfThen: {
        Location then_entry = model_.add_location();
        Location after = model_.add_location();
        model_.add(cur, label, then_entry);
        model_.add(cur, label, after);
        auto end = stack(body(block, 0), then_entry);
        if (end) model_.add(*end, std::nullopt, after);
        return after;
      }

      case BlockKind::ControlIfElse: {
        Location then_entry = model_.add_location();
        Location else_entry = model_.add_location();
        model_.add(cur, label, then_entry);
        model_.add(cur, label, else_entry);
        auto then_end = stack(body(block, 0), then_entry);
        auto else_end = stack(body(block, 1), else_entry);
        Location join = model_.add_location();
        if (then_end) model_.add(*then_end, std::nullopt, join);
        if (else_end) model_.add(*else_end, std::nullopt, join);
        return join;
      }

      case BlockKind::ControlLoopBounded:
      case BlockKind::ControlLoopUntil: {
        Location body_entry = model_.add_location();
        Location after = model_.add_location();
        model_.add(cur, label, body_entry);
        model_.add(cur, label, after);
        auto end = stack(body(block, 0), body_entry);
        if (end) model_.add(*end, std::nullopt, cur);
        return after;
      }
    }
    return cur;
  }

  const Actor& actor_;
  ScriptModel& model_;
};

// A non-entry, non-exit location whose only way out is a single epsilon move
// is merged into that move's target. This keeps the join and back-edge
// locations introduced during construction from surviving elimination.
void contract_epsilon_relays(ScriptModel& m) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<std::size_t>> outgoing(m.location_count);
    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
      outgoing[m.transitions[i].from].push_back(i);
    }
    for (Location a = 0; a < m.location_count; ++a) {
      if (a == m.entry || m.exits.count(a) || outgoing[a].size() != 1) continue;
      const Transition& only = m.transitions[outgoing[a].front()];
      if (!only.is_epsilon() || only.to == a) continue;
      Location target = only.to;
      m.transitions.erase(m.transitions.begin() + static_cast<std::ptrdiff_t>(outgoing[a].front()));
      for (auto& t : m.transitions) {
        if (t.to == a) t.to = target;
      }
      changed = true;
      break;
    }
  }
}

std::vector<std::vector<Location>> epsilon_closures(const ScriptModel& m) {
  std::vector<std::vector<Location>> eps(m.location_count);
  for (const auto& t : m.transitions) {
    if (t.is_epsilon()) eps[t.from].push_back(t.to);
  }
  std::vector<std::vector<Location>> closures(m.location_count);
  for (Location l = 0; l < m.location_count; ++l) {
    std::vector<bool> seen(m.location_count, false);
    std::vector<Location> stack{l};
    seen[l] = true;
    while (!stack.empty()) {
      Location cur = stack.back();
      stack.pop_back();
      closures[l].push_back(cur);
      for (Location nxt : eps[cur]) {
        if (!seen[nxt]) {
          seen[nxt] = true;
          stack.push_back(nxt);
        }
      }
    }
  }
  return closures;
}

// Drops locations unreachable from the entry and renumbers the rest in
// breadth-first order, visiting targets by (label, old id).
ScriptModel prune_and_renumber(const ScriptModel& m) {
  std::set<Transition> unique(m.transitions.begin(), m.transitions.end());
  std::vector<std::vector<const Transition*>> outgoing(m.location_count);
  for (const auto& t : unique) outgoing[t.from].push_back(&t);
  for (auto& out : outgoing) {
    std::stable_sort(out.begin(), out.end(), [](const Transition* a, const Transition* b) {
      if (a->label != b->label) return a->label < b->label;
      return a->to < b->to;
    });
  }

  constexpr Location kUnseen = static_cast<Location>(-1);
  std::vector<Location> renamed(m.location_count, kUnseen);
  std::deque<Location> queue{m.entry};
  renamed[m.entry] = 0;
  Location next_id = 1;
  while (!queue.empty()) {
    Location cur = queue.front();
    queue.pop_front();
    for (const auto* t : outgoing[cur]) {
      if (renamed[t->to] == kUnseen) {
        renamed[t->to] = next_id++;
        queue.push_back(t->to);
      }
    }
  }

  ScriptModel out;
  out.source = m.source;
  out.location_count = next_id;
  out.entry = 0;
  for (Location l : m.exits) {
    if (renamed[l] != kUnseen) out.exits.insert(renamed[l]);
  }
  for (const auto& t : unique) {
    if (renamed[t.from] == kUnseen) continue;
    out.transitions.push_back({renamed[t.from], t.label, renamed[t.to]});
  }
  std::sort(out.transitions.begin(), out.transitions.end());
  return out;
}

}  // namespace

std::string BlockLabel::display() const {
  auto colon = id.find(':');
  if (colon == std::string::npos) return opcode_alias(id);
  return opcode_alias(id.substr(0, colon)) + " " + id.substr(colon + 1);
}

BlockLabel label_of(const RawBlock& block) {
  if ((block.opcode == "procedures_call" || block.opcode == "procedures_definition") &&
      block.procedure) {
    return {block.opcode + ":" + *block.procedure};
  }
  return {block.opcode};
}

std::set<BlockLabel> ScriptModel::labels() const {
  std::set<BlockLabel> out;
  for (const auto& t : transitions) {
    if (t.label) out.insert(*t.label);
  }
  return out;
}

bool ScriptModel::has_epsilon() const {
  return std::any_of(transitions.begin(), transitions.end(),
                     [](const Transition& t) { return t.is_epsilon(); });
}

std::size_t ScriptModel::labeled_transition_count() const {
  return static_cast<std::size_t>(std::count_if(
      transitions.begin(), transitions.end(), [](const Transition& t) { return !t.is_epsilon(); }));
}

ScriptModel build_script_model(const ScriptSource& script, const RawProject& project) {
  ScriptModel model;
  model.source = script;
  model.entry = 0;
  model.location_count = 1;
  const Actor* actor = project.find_actor(script.actor_name);
  if (!actor) return model;
  ModelBuilder builder(*actor, model);
  if (auto end = builder.stack(script.root_block, model.entry)) model.exits.insert(*end);
  return model;
}

ScriptModel eliminate_epsilon(const ScriptModel& model) {
  ScriptModel m = model;
  contract_epsilon_relays(m);

  if (m.has_epsilon()) {
    auto closures = epsilon_closures(m);
    std::vector<std::vector<const Transition*>> labeled(m.location_count);
    for (const auto& t : m.transitions) {
      if (!t.is_epsilon()) labeled[t.from].push_back(&t);
    }
    ScriptModel flat;
    flat.source = m.source;
    flat.location_count = m.location_count;
    flat.entry = m.entry;
    for (Location l = 0; l < m.location_count; ++l) {
      for (Location reach : closures[l]) {
        if (m.exits.count(reach)) flat.exits.insert(l);
        for (const auto* t : labeled[reach]) flat.add(l, t->label, t->to);
      }
    }
    m = std::move(flat);
  }
  return prune_and_renumber(m);
}

ScriptModel abstract_labels(const ScriptModel& model,
                            const std::function<bool(const BlockLabel&)>& drop) {
  ScriptModel m = model;
  for (auto& t : m.transitions) {
    if (t.label && drop(*t.label)) t.label.reset();
  }
  return eliminate_epsilon(m);
}

ScriptModel extract_script_model(const ScriptSource& script, const RawProject& project) {
  return eliminate_epsilon(build_script_model(script, project));
}

std::string to_dot(const ScriptModel& model, const std::string& graph_name) {
  dot::Graph g(graph_name);
  g.attribute("rankdir", "TB");
  g.node_defaults("shape=circle");
  g.raw("__start [shape=point, style=invis]");
  for (Location l = 0; l < model.location_count; ++l) {
    std::string attrs = "label=" + dot::quote("l" + std::to_string(l));
    if (model.exits.count(l)) attrs += ", shape=doublecircle";
    g.node("l" + std::to_string(l), attrs);
  }
  g.raw("__start -> l" + std::to_string(model.entry));
  for (const auto& t : model.transitions) {
    std::string text = t.label ? t.label->display() : "\xCE\xB5";
    g.edge("l" + std::to_string(t.from), "l" + std::to_string(t.to), "label=" + dot::quote(text));
  }
  return g.str();
}

}  // namespace blockpat
