#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blockpat {

using BlockId = std::string;

enum class BlockKind {
  Hat,
  Command,
  ControlIfThen,
  ControlIfElse,
  ControlForever,
  ControlLoopBounded,
  ControlLoopUntil,
  Cap,
  Reporter,
  Unknown,
};

const char* to_string(BlockKind kind);

/// Classifies an opcode using the shipped opcode table. Opcodes missing from
/// the table map to Unknown; callers treat Unknown as a command when it sits
/// in a next-chain and as a reporter when it only appears as an input.
BlockKind classify_opcode(std::string_view opcode);

/// Human-readable name for an opcode, or the opcode itself when the table has
/// no alias for it.
std::string opcode_alias(std::string_view opcode);

/// Version string from the header of the opcode table.
std::string opcode_table_version();

struct RawBlock {
  BlockId id;
  std::string opcode;
  std::optional<BlockId> next;
  std::optional<BlockId> parent;
  /// Body and else-body for C-blocks. Length follows the opcode kind: 2 for
  /// if-else, 1 for other C-blocks, 0 otherwise.
  std::vector<std::optional<BlockId>> substacks;
  std::vector<BlockId> reporter_children;
  bool is_top_level = false;
  /// Custom block prototype text, set on procedure calls and definitions.
  std::optional<std::string> procedure;
  double x = 0.0;
  double y = 0.0;
};

struct Actor {
  std::string name;
  bool is_stage = false;
  std::map<BlockId, RawBlock> blocks;
  /// Top-level blocks in canonical order (canvas y, then x, then id).
  std::vector<BlockId> script_roots;

  const RawBlock* find(const BlockId& id) const;
};

struct LoadWarning {
  std::string project_id;
  std::string message;
};

struct RawProject {
  std::string project_id;
  std::vector<Actor> actors;
  std::vector<LoadWarning> warnings;

  const Actor* find_actor(std::string_view name) const;
};

struct ScriptSource {
  std::string project_id;
  std::string actor_name;
  std::size_t script_index = 0;
  BlockId root_block;
  bool from_stage = false;

  /// "project/actor/index", used in reports and file names.
  std::string key() const;

  auto operator<=>(const ScriptSource&) const = default;
};

struct SkipRecord {
  std::filesystem::path path;
  std::string reason;
};

struct Dataset {
  std::vector<RawProject> projects;
  std::vector<SkipRecord> skipped;
};

/// Parses project.json text. `project_id` names the result.
RawProject parse_project_json(std::string_view json_text, std::string project_id);

/// Loads an .sb3 archive or a bare project.json file. Throws Error with
/// ArchiveUnreadable or MalformedProject.
RawProject load_project(const std::filesystem::path& archive_path);

/// Loads every .sb3 and .json file in `directory`, sorted by file name.
/// Unreadable files are recorded in Dataset::skipped. Throws DatasetEmpty when
/// nothing loads, ArchiveUnreadable when the directory is missing.
Dataset load_dataset(const std::filesystem::path& directory, unsigned threads = 1);

/// Top-level stacks holding at least one non-reporter block, in actor order
/// then canonical root order.
std::vector<ScriptSource> enumerate_scripts(const RawProject& project);

/// Number of non-reporter blocks reachable from `root` through next and
/// substack links.
std::size_t count_command_blocks(const Actor& actor, const BlockId& root);

}  // namespace blockpat
