#include "blockpat/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "blockpat/error.hpp"
#include "blockpat/parallel.hpp"
#include "blockpat/zip.hpp"

namespace blockpat {
namespace {

using nlohmann::json;

std::size_t substack_slots(BlockKind kind) {
  switch (kind) {
    case BlockKind::ControlIfElse: return 2;
    case BlockKind::ControlIfThen:
    case BlockKind::ControlForever:
    case BlockKind::ControlLoopBounded:
    case BlockKind::ControlLoopUntil: return 1;
    default: return 0;
  }
}

std::optional<BlockId> optional_id(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  return std::nullopt;
}

// Input values are [shadow-type, value, (obscured-shadow)]; the value is a
// block id string, an inline primitive array, or null.
std::optional<BlockId> input_block(const json& input) {
  if (!input.is_array() || input.size() < 2) return std::nullopt;
  return optional_id(input[1]);
}

std::optional<std::string> proccode_of(const json& block) {
  auto mutation = block.find("mutation");
  if (mutation == block.end() || !mutation->is_object()) return std::nullopt;
  auto code = mutation->find("proccode");
  if (code == mutation->end() || !code->is_string()) return std::nullopt;
  return code->get<std::string>();
}

class ActorBuilder {
 public:
  ActorBuilder(RawProject& project, Actor& actor) : project_(project), actor_(actor) {}

  void parse_blocks(const json& blocks) {
    if (!blocks.is_object()) {
      warn("blocks is not an object");
      return;
    }
    for (const auto& [id, data] : blocks.items()) {
      // Arrays are top-level variable or list reporters dropped on the canvas.
      if (!data.is_object()) continue;
      auto opcode = data.find("opcode");
      if (opcode == data.end() || !opcode->is_string()) {
        warn("block " + id + " has no opcode; dropped");
        continue;
      }
      RawBlock block;
      block.id = id;
      block.opcode = opcode->get<std::string>();
      if (auto it = data.find("next"); it != data.end()) block.next = optional_id(*it);
      if (auto it = data.find("parent"); it != data.end()) block.parent = optional_id(*it);
      if (auto it = data.find("topLevel"); it != data.end() && it->is_boolean()) {
        block.is_top_level = it->get<bool>();
      }
      if (auto it = data.find("x"); it != data.end() && it->is_number()) block.x = it->get<double>();
      if (auto it = data.find("y"); it != data.end() && it->is_number()) block.y = it->get<double>();
      block.procedure = proccode_of(data);

      block.substacks.resize(substack_slots(classify_opcode(block.opcode)));
      if (auto inputs = data.find("inputs"); inputs != data.end() && inputs->is_object()) {
        for (const auto& [name, input] : inputs->items()) {
          auto child = input_block(input);
          if (!child) continue;
          if (name == "SUBSTACK" || name == "SUBSTACK2") {
            std::size_t slot = name == "SUBSTACK" ? 0 : 1;
            if (slot < block.substacks.size()) block.substacks[slot] = child;
          } else {
            block.reporter_children.push_back(*child);
          }
        }
      }
      actor_.blocks.emplace(id, std::move(block));
    }
  }

  void resolve() {
    resolve_definitions();
    drop_orphans();
    clear_dangling();
    break_cycles();
    collect_roots();
  }

 private:
  void warn(const std::string& message) {
    project_.warnings.push_back({project_.project_id, actor_.name + ": " + message});
  }

  bool exists(const BlockId& id) const { return actor_.blocks.count(id) != 0; }

  // A definition's prototype text lives on its custom_block input.
  void resolve_definitions() {
    for (auto& [id, block] : actor_.blocks) {
      if (block.opcode != "procedures_definition" || block.procedure) continue;
      for (const auto& child : block.reporter_children) {
        auto it = actor_.blocks.find(child);
        if (it != actor_.blocks.end() && it->second.procedure) {
          block.procedure = it->second.procedure;
          break;
        }
      }
    }
  }

  // Non-top-level blocks whose parent is missing cannot belong to any script.
  void drop_orphans() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = actor_.blocks.begin(); it != actor_.blocks.end();) {
        const auto& block = it->second;
        if (!block.is_top_level && block.parent && !exists(*block.parent)) {
          warn("block " + block.id + " references missing parent " + *block.parent + "; dropped");
          it = actor_.blocks.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
  }

  void clear_dangling() {
    for (auto& [id, block] : actor_.blocks) {
      if (block.next && !exists(*block.next)) {
        warn("block " + id + " has unresolved next " + *block.next);
        block.next.reset();
      }
      for (auto& slot : block.substacks) {
        if (slot && !exists(*slot)) {
          warn("block " + id + " has unresolved substack " + *slot);
          slot.reset();
        }
      }
      auto& children = block.reporter_children;
      auto keep = std::stable_partition(children.begin(), children.end(),
                                        [&](const BlockId& c) { return exists(c); });
      if (keep != children.end()) {
        warn("block " + id + " has unresolved inputs");
        children.erase(keep, children.end());
      }
      if (block.is_top_level && block.parent && !exists(*block.parent)) block.parent.reset();
    }
  }

  // Script trees must be acyclic; any link into an already visited block is cut.
  void break_cycles() {
    std::set<BlockId> visited;
    auto visit = [&](auto&& self, const BlockId& start) -> void {
      BlockId current = start;
      while (true) {
        visited.insert(current);
        auto& block = actor_.blocks.at(current);
        for (auto& slot : block.substacks) {
          if (!slot) continue;
          if (visited.count(*slot)) {
            warn("block " + current + " substack forms a cycle; link cut");
            slot.reset();
          } else {
            self(self, *slot);
          }
        }
        auto& children = block.reporter_children;
        std::erase_if(children, [&](const BlockId& c) { return visited.count(c) != 0; });
        for (const auto& child : children) self(self, child);
        if (!block.next) return;
        if (visited.count(*block.next)) {
          warn("block " + current + " next forms a cycle; link cut");
          block.next.reset();
          return;
        }
        current = *block.next;
      }
    };
    for (const auto& [id, block] : actor_.blocks) {
      if (block.is_top_level && !visited.count(id)) visit(visit, id);
    }
  }

  void collect_roots() {
    std::vector<const RawBlock*> roots;
    for (const auto& [id, block] : actor_.blocks) {
      if (block.is_top_level) roots.push_back(&block);
    }
    std::sort(roots.begin(), roots.end(), [](const RawBlock* a, const RawBlock* b) {
      if (a->y != b->y) return a->y < b->y;
      if (a->x != b->x) return a->x < b->x;
      return a->id < b->id;
    });
    for (const auto* root : roots) actor_.script_roots.push_back(root->id);
  }

  RawProject& project_;
  Actor& actor_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ArchiveUnreadable, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::ArchiveUnreadable, "cannot read " + path.string());
  return std::move(buffer).str();
}

bool is_project_file(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".sb3" || ext == ".json";
}

bool has_non_reporter(const Actor& actor, const BlockId& root) {
  return count_command_blocks(actor, root) > 0;
}

}  // namespace

const RawBlock* Actor::find(const BlockId& id) const {
  auto it = blocks.find(id);
  return it == blocks.end() ? nullptr : &it->second;
}

const Actor* RawProject::find_actor(std::string_view name) const {
  for (const auto& actor : actors) {
    if (actor.name == name) return &actor;
  }
  return nullptr;
}

std::string ScriptSource::key() const {
  return project_id + "/" + actor_name + "/" + std::to_string(script_index);
}

RawProject parse_project_json(std::string_view json_text, std::string project_id) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorKind::MalformedProject, project_id + ": project.json is not valid JSON");
  }
  auto targets = doc.find("targets");
  if (!doc.is_object() || targets == doc.end() || !targets->is_array()) {
    throw Error(ErrorKind::MalformedProject, project_id + ": project.json has no targets array");
  }

  RawProject project;
  project.project_id = std::move(project_id);
  std::size_t stages = 0;
  for (const auto& target : *targets) {
    if (!target.is_object()) {
      project.warnings.push_back({project.project_id, "target is not an object; skipped"});
      continue;
    }
    Actor actor;
    actor.name = target.value("name", std::string{});
    actor.is_stage = target.value("isStage", false);
    stages += actor.is_stage ? 1 : 0;
    ActorBuilder builder(project, actor);
    if (auto blocks = target.find("blocks"); blocks != target.end()) {
      builder.parse_blocks(*blocks);
    }
    builder.resolve();
    project.actors.push_back(std::move(actor));
  }
  if (stages != 1) {
    project.warnings.push_back(
        {project.project_id, "expected one stage target, found " + std::to_string(stages)});
  }
  return project;
}

RawProject load_project(const std::filesystem::path& archive_path) {
  std::string bytes = read_file(archive_path);
  std::string project_id = archive_path.stem().string();

  if (zip::looks_like_zip(bytes)) {
    auto entries = zip::read(bytes);
    auto it = std::find_if(entries.begin(), entries.end(),
                           [](const zip::Entry& e) { return e.name == "project.json"; });
    if (it == entries.end()) {
      throw Error(ErrorKind::MalformedProject, archive_path.string() + ": no project.json in archive");
    }
    return parse_project_json(it->data, std::move(project_id));
  }

  if (!json::accept(bytes)) {
    throw Error(ErrorKind::ArchiveUnreadable,
                archive_path.string() + ": neither a zip archive nor a project.json file");
  }
  return parse_project_json(bytes, std::move(project_id));
}

Dataset load_dataset(const std::filesystem::path& directory, unsigned threads) {
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec)) {
    throw Error(ErrorKind::ArchiveUnreadable, directory.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && is_project_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });

  std::vector<std::optional<RawProject>> loaded(files.size());
  std::vector<std::string> failures(files.size());
  parallel_for(files.size(), threads, [&](std::size_t i) {
    try {
      loaded[i] = load_project(files[i]);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });

  Dataset dataset;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!loaded[i]) {
      dataset.skipped.push_back({files[i], failures[i]});
      continue;
    }
    RawProject& project = *loaded[i];
    // a.sb3 and a.json would share a stem.
    if (!ids.insert(project.project_id).second) {
      project.project_id = files[i].filename().string();
      ids.insert(project.project_id);
    }
    for (auto& w : project.warnings) w.project_id = project.project_id;
    dataset.projects.push_back(std::move(project));
  }
  if (dataset.projects.empty()) {
    throw Error(ErrorKind::DatasetEmpty, "no loadable projects in " + directory.string());
  }
  return dataset;
}

std::size_t count_command_blocks(const Actor& actor, const BlockId& root) {
  std::size_t count = 0;
  auto walk = [&](auto&& self, const BlockId& start) -> void {
    const RawBlock* block = actor.find(start);
    while (block) {
      if (classify_opcode(block->opcode) != BlockKind::Reporter) ++count;
      for (const auto& slot : block->substacks) {
        if (slot) self(self, *slot);
      }
      block = block->next ? actor.find(*block->next) : nullptr;
    }
  };
  walk(walk, root);
  return count;
}

std::vector<ScriptSource> enumerate_scripts(const RawProject& project) {
  std::vector<ScriptSource> scripts;
  for (const auto& actor : project.actors) {
    std::size_t index = 0;
    for (const auto& root : actor.script_roots) {
      const RawBlock* block = actor.find(root);
      if (!block || classify_opcode(block->opcode) == BlockKind::Reporter) continue;
      if (!has_non_reporter(actor, root)) continue;
      scripts.push_back({project.project_id, actor.name, index++, root, actor.is_stage});
    }
  }
  return scripts;
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ArchiveUnreadable: return "ArchiveUnreadable";
    case ErrorKind::MalformedProject: return "MalformedProject";
    case ErrorKind::DatasetEmpty: return "DatasetEmpty";
    case ErrorKind::OutputUnwritable: return "OutputUnwritable";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Error";
}

}  // namespace blockpat
