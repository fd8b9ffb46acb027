#include "blockpat/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "blockpat/error.hpp"
#include "blockpat/report.hpp"
#include "blockpat/zip.hpp"

namespace blockpat {
namespace {

using nlohmann::json;

std::size_t slots_for(const std::string& opcode) {
  switch (classify_opcode(opcode)) {
    case BlockKind::ControlIfElse: return 2;
    case BlockKind::ControlIfThen:
    case BlockKind::ControlForever:
    case BlockKind::ControlLoopBounded:
    case BlockKind::ControlLoopUntil: return 1;
    default: return 0;
  }
}

bool takes_condition(const std::string& opcode) {
  return opcode == "control_if" || opcode == "control_if_else" ||
         opcode == "control_repeat_until" || opcode == "control_while" ||
         opcode == "control_wait_until";
}

json block_json(const Actor& actor, const RawBlock& b) {
  json inputs = json::object();
  for (std::size_t i = 0; i < b.substacks.size(); ++i) {
    if (b.substacks[i]) inputs[i == 0 ? "SUBSTACK" : "SUBSTACK2"] = json::array({2, *b.substacks[i]});
  }
  std::size_t plain = 0;
  for (std::size_t i = 0; i < b.reporter_children.size(); ++i) {
    const auto& child = b.reporter_children[i];
    const RawBlock* c = actor.find(child);
    std::string name;
    if (c && c->opcode == "procedures_prototype") {
      name = "custom_block";
    } else if (i == 0 && takes_condition(b.opcode)) {
      name = "CONDITION";
    } else {
      std::ostringstream n;
      n << "INPUT" << (plain < 10 ? "0" : "") << plain;
      name = n.str();
      ++plain;
    }
    inputs[name] = json::array({2, child});
  }

  json out{{"opcode", b.opcode},
           {"next", b.next ? json(*b.next) : json(nullptr)},
           {"parent", b.parent ? json(*b.parent) : json(nullptr)},
           {"inputs", std::move(inputs)},
           {"fields", json::object()},
           {"shadow", false},
           {"topLevel", b.is_top_level}};
  if (b.is_top_level) {
    out["x"] = b.x;
    out["y"] = b.y;
  }
  if (b.procedure) {
    out["mutation"] = {{"tagName", "mutation"},
                       {"children", json::array()},
                       {"proccode", *b.procedure},
                       {"argumentids", "[]"},
                       {"warp", "false"}};
  }
  return out;
}

// Preorder over scripts: block, its substacks, then next.
std::vector<std::pair<std::size_t, BlockId>> canonical_blocks(const RawProject& project) {
  std::vector<std::pair<std::size_t, BlockId>> order;
  for (std::size_t a = 0; a < project.actors.size(); ++a) {
    const Actor& actor = project.actors[a];
    std::function<void(const std::optional<BlockId>&)> walk = [&](const std::optional<BlockId>& start) {
      const RawBlock* b = start ? actor.find(*start) : nullptr;
      while (b) {
        order.emplace_back(a, b->id);
        for (const auto& slot : b->substacks) walk(slot);
        b = b->next ? actor.find(*b->next) : nullptr;
      }
    };
    for (const auto& root : actor.script_roots) walk(root);
  }
  return order;
}

void erase_subtree(Actor& actor, const BlockId& id, bool follow_next) {
  auto it = actor.blocks.find(id);
  if (it == actor.blocks.end()) return;
  RawBlock b = it->second;
  actor.blocks.erase(it);
  for (const auto& slot : b.substacks) {
    if (slot) erase_subtree(actor, *slot, true);
  }
  for (const auto& child : b.reporter_children) erase_subtree(actor, child, true);
  if (follow_next && b.next) erase_subtree(actor, *b.next, true);
}

// Points whatever referenced `from` (a previous block's next, a substack slot
// of the parent, or the script root list) at `to`.
void relink(Actor& actor, const RawBlock& from, const std::optional<BlockId>& to) {
  if (from.is_top_level) {
    auto root = std::find(actor.script_roots.begin(), actor.script_roots.end(), from.id);
    if (to) {
      RawBlock& t = actor.blocks.at(*to);
      t.is_top_level = true;
      t.parent.reset();
      t.x = from.x;
      t.y = from.y;
      *root = *to;
    } else {
      actor.script_roots.erase(root);
    }
    return;
  }
  RawBlock& parent = actor.blocks.at(*from.parent);
  if (parent.next == from.id) {
    parent.next = to;
  } else {
    for (auto& slot : parent.substacks) {
      if (slot == from.id) slot = to;
    }
  }
  if (to) actor.blocks.at(*to).parent = parent.id;
}

}  // namespace

BlockSpec block(std::string opcode, std::vector<std::string> reporters) {
  return {std::move(opcode), {}, {}, std::move(reporters), std::nullopt};
}

BlockSpec c_block(std::string opcode, std::vector<BlockSpec> body,
                  std::vector<std::string> reporters) {
  return {std::move(opcode), std::move(body), {}, std::move(reporters), std::nullopt};
}

BlockSpec if_else(std::vector<BlockSpec> then_body, std::vector<BlockSpec> else_body,
                  std::vector<std::string> reporters) {
  return {"control_if_else", std::move(then_body), std::move(else_body), std::move(reporters),
          std::nullopt};
}

ProjectBuilder::ProjectBuilder(std::string project_id) {
  project_.project_id = std::move(project_id);
  Actor stage;
  stage.name = "Stage";
  stage.is_stage = true;
  project_.actors.push_back(std::move(stage));
}

ProjectBuilder& ProjectBuilder::sprite(std::string name) {
  Actor actor;
  actor.name = std::move(name);
  project_.actors.push_back(std::move(actor));
  current_ = project_.actors.size() - 1;
  return *this;
}

ProjectBuilder& ProjectBuilder::stage() {
  current_ = 0;
  return *this;
}

BlockId ProjectBuilder::add(const BlockSpec& spec, const std::optional<BlockId>& parent) {
  BlockId id = "b" + std::to_string(next_id_++);
  RawBlock b;
  b.id = id;
  b.opcode = spec.opcode;
  b.parent = parent;
  b.procedure = spec.procedure;
  b.substacks.resize(slots_for(spec.opcode));
  current().blocks.emplace(id, b);

  std::vector<std::optional<BlockId>> substacks(slots_for(spec.opcode));
  if (!substacks.empty() && !spec.body.empty()) substacks[0] = add_stack(spec.body, id);
  if (substacks.size() > 1 && !spec.else_body.empty()) substacks[1] = add_stack(spec.else_body, id);

  std::vector<BlockId> children;
  if (spec.opcode == "procedures_definition" && spec.procedure) {
    BlockSpec proto = block("procedures_prototype");
    proto.procedure = spec.procedure;
    children.push_back(add(proto, id));
  }
  for (const auto& r : spec.reporters) children.push_back(add(block(r), id));

  RawBlock& stored = current().blocks.at(id);
  stored.substacks = std::move(substacks);
  stored.reporter_children = std::move(children);
  return id;
}

BlockId ProjectBuilder::add_stack(const std::vector<BlockSpec>& stack,
                                  const std::optional<BlockId>& parent) {
  std::optional<BlockId> first;
  std::optional<BlockId> prev = parent;
  std::optional<BlockId> prev_block;
  for (const auto& spec : stack) {
    BlockId id = add(spec, prev);
    if (prev_block) current().blocks.at(*prev_block).next = id;
    if (!first) first = id;
    prev = id;
    prev_block = id;
  }
  return first.value_or(BlockId{});
}

ProjectBuilder& ProjectBuilder::script(const std::vector<BlockSpec>& stack) {
  if (stack.empty()) return *this;
  BlockId root = add_stack(stack, std::nullopt);
  RawBlock& b = current().blocks.at(root);
  b.is_top_level = true;
  b.x = 0;
  b.y = 200.0 * static_cast<double>(current().script_roots.size());
  current().script_roots.push_back(root);
  return *this;
}

ProjectBuilder& ProjectBuilder::loose_reporter(const std::string& opcode) {
  BlockId id = add(block(opcode), std::nullopt);
  RawBlock& b = current().blocks.at(id);
  b.is_top_level = true;
  b.x = 400;
  b.y = 200.0 * static_cast<double>(current().script_roots.size());
  current().script_roots.push_back(id);
  return *this;
}

std::string project_to_json(const RawProject& project) {
  json targets = json::array();
  for (std::size_t i = 0; i < project.actors.size(); ++i) {
    const Actor& actor = project.actors[i];
    json blocks = json::object();
    for (const auto& [id, b] : actor.blocks) blocks[id] = block_json(actor, b);
    json target{{"isStage", actor.is_stage},
                {"name", actor.name},
                {"variables", json::object()},
                {"lists", json::object()},
                {"broadcasts", json::object()},
                {"blocks", std::move(blocks)},
                {"comments", json::object()},
                {"currentCostume", 0},
                {"costumes", json::array()},
                {"sounds", json::array()},
                {"volume", 100},
                {"layerOrder", i}};
    if (!actor.is_stage) {
      target["visible"] = true;
      target["x"] = 0;
      target["y"] = 0;
      target["size"] = 100;
      target["direction"] = 90;
      target["draggable"] = false;
      target["rotationStyle"] = "all around";
    }
    targets.push_back(std::move(target));
  }
  json doc{{"targets", std::move(targets)},
           {"monitors", json::array()},
           {"extensions", json::array()},
           {"meta", {{"semver", "3.0.0"}, {"vm", "0.2.0"}, {"agent", "blockpat"}}}};
  return doc.dump();
}

std::string project_to_sb3(const RawProject& project) {
  return zip::write({{"project.json", project_to_json(project)}});
}

const char* to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::WrongBlock: return "WrongBlock";
    case MutationKind::MissingBlock: return "MissingBlock";
    case MutationKind::WrongOrder: return "WrongOrder";
    case MutationKind::ExtraBlock: return "ExtraBlock";
  }
  return "WrongBlock";
}

MutationKind parse_mutation_kind(const std::string& name) {
  for (auto kind : {MutationKind::WrongBlock, MutationKind::MissingBlock, MutationKind::WrongOrder,
                    MutationKind::ExtraBlock}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown mutation kind: " + name);
}

RawProject apply_mutation(const RawProject& project, const MutationSpec& mutation) {
  auto order = canonical_blocks(project);
  std::vector<std::pair<std::size_t, BlockId>> candidates;
  for (const auto& [a, id] : order) {
    const RawBlock& b = project.actors[a].blocks.at(id);
    if (mutation.target.empty()) {
      auto kind = classify_opcode(b.opcode);
      if (kind != BlockKind::Hat && kind != BlockKind::Reporter) candidates.emplace_back(a, id);
    } else if (b.opcode == mutation.target) {
      candidates.emplace_back(a, id);
    }
  }
  if (candidates.empty()) {
    throw Error(ErrorKind::InvalidConfig, "mutation target not found: " +
                                              (mutation.target.empty() ? "<any>" : mutation.target));
  }
  std::size_t pick = mutation.occurrence;
  if (mutation.target.empty()) {
    std::mt19937_64 rng(mutation.seed);
    pick = static_cast<std::size_t>(rng() % candidates.size());
  }
  if (pick >= candidates.size()) {
    throw Error(ErrorKind::InvalidConfig, "mutation target occurrence out of range");
  }

  RawProject out = project;
  Actor& actor = out.actors[candidates[pick].first];
  const BlockId target_id = candidates[pick].second;
  auto need_replacement = [&] {
    if (!mutation.replacement || mutation.replacement->empty()) {
      throw Error(ErrorKind::InvalidConfig,
                  std::string(to_string(mutation.kind)) + " needs a replacement opcode");
    }
    return *mutation.replacement;
  };

  switch (mutation.kind) {
    case MutationKind::WrongBlock: {
      std::string opcode = need_replacement();
      RawBlock& b = actor.blocks.at(target_id);
      std::size_t slots = slots_for(opcode);
      for (std::size_t i = slots; i < b.substacks.size(); ++i) {
        if (b.substacks[i]) erase_subtree(actor, *b.substacks[i], true);
      }
      RawBlock& kept = actor.blocks.at(target_id);
      kept.substacks.resize(slots);
      kept.opcode = opcode;
      if (opcode != "procedures_call" && opcode != "procedures_definition") kept.procedure.reset();
      break;
    }
    case MutationKind::MissingBlock: {
      RawBlock removed = actor.blocks.at(target_id);
      relink(actor, removed, removed.next);
      actor.blocks.at(target_id).next.reset();
      erase_subtree(actor, target_id, false);
      break;
    }
    case MutationKind::WrongOrder: {
      RawBlock first = actor.blocks.at(target_id);
      if (!first.next) {
        throw Error(ErrorKind::InvalidConfig, "WrongOrder target has no following block");
      }
      BlockId second_id = *first.next;
      std::optional<BlockId> after = actor.blocks.at(second_id).next;
      relink(actor, first, second_id);
      RawBlock& a = actor.blocks.at(target_id);
      RawBlock& b = actor.blocks.at(second_id);
      a.is_top_level = false;
      a.next = after;
      a.parent = second_id;
      b.next = target_id;
      if (after) actor.blocks.at(*after).parent = target_id;
      break;
    }
    case MutationKind::ExtraBlock: {
      std::string opcode = need_replacement();
      BlockId id = "extra-" + std::to_string(mutation.seed);
      for (int n = 2; actor.blocks.count(id); ++n) {
        id = "extra-" + std::to_string(mutation.seed) + "-" + std::to_string(n);
      }
      RawBlock extra;
      extra.id = id;
      extra.opcode = opcode;
      extra.parent = target_id;
      extra.substacks.resize(slots_for(opcode));
      RawBlock& t = actor.blocks.at(target_id);
      extra.next = t.next;
      if (t.next) actor.blocks.at(*t.next).parent = id;
      t.next = id;
      actor.blocks.emplace(id, std::move(extra));
      break;
    }
  }
  return out;
}

std::vector<std::filesystem::path> generate_corpus(const RawProject& reference,
                                                   std::size_t n_correct,
                                                   const std::vector<MutationSpec>& mutations,
                                                   const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error(ErrorKind::OutputUnwritable, "cannot create " + out_dir.string());
  }
  auto numbered = [](const std::string& prefix, std::size_t n, int width) {
    std::string digits = std::to_string(n);
    if (digits.size() < static_cast<std::size_t>(width)) {
      digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
    }
    return prefix + digits;
  };

  std::vector<std::filesystem::path> written;
  std::string clone = project_to_sb3(reference);
  for (std::size_t i = 0; i < n_correct; ++i) {
    auto path = out_dir / (numbered("correct_", i, 3) + ".sb3");
    write_file(path, clone);
    written.push_back(path);
  }
  for (std::size_t i = 0; i < mutations.size(); ++i) {
    RawProject mutant = apply_mutation(reference, mutations[i]);
    auto path = out_dir / (numbered("mutant_", i, 3) + "_" + to_string(mutations[i].kind) + ".sb3");
    write_file(path, project_to_sb3(mutant));
    written.push_back(path);
  }
  return written;
}

CorpusSpec load_corpus_spec(const std::filesystem::path& spec_path) {
  std::ifstream in(spec_path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open corpus spec " + spec_path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::InvalidConfig, "corpus spec is not a JSON object");
  }
  CorpusSpec spec;
  try {
    spec.reference = doc.at("reference").get<std::string>();
    if (spec.reference.is_relative()) spec.reference = spec_path.parent_path() / spec.reference;
    spec.correct = doc.value("correct", std::size_t{0});
    for (const auto& m : doc.value("mutations", json::array())) {
      MutationSpec ms;
      ms.kind = parse_mutation_kind(m.at("kind").get<std::string>());
      ms.target = m.value("target", std::string{});
      ms.occurrence = m.value("occurrence", std::size_t{0});
      if (m.contains("replacement")) ms.replacement = m.at("replacement").get<std::string>();
      ms.seed = m.value("seed", std::uint64_t{0});
      spec.mutations.push_back(std::move(ms));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("bad corpus spec: ") + e.what());
  }
  return spec;
}

}  // namespace blockpat
