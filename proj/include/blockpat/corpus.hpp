#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "blockpat/ingest.hpp"

namespace blockpat {

/// Declarative block tree used to build projects in code.
struct BlockSpec {
  std::string opcode;
  std::vector<BlockSpec> body;
  std::vector<BlockSpec> else_body;
  /// Reporter opcodes plugged into this block's inputs.
  std::vector<std::string> reporters;
  /// Prototype text for procedures_call / procedures_definition.
  std::optional<std::string> procedure;
};

BlockSpec block(std::string opcode, std::vector<std::string> reporters = {});
BlockSpec c_block(std::string opcode, std::vector<BlockSpec> body,
                  std::vector<std::string> reporters = {});
BlockSpec if_else(std::vector<BlockSpec> then_body, std::vector<BlockSpec> else_body,
                  std::vector<std::string> reporters = {});

/// Builds a RawProject with deterministic block ids ("b<n>") and
/// canvas positions that keep scripts in insertion order.
class ProjectBuilder {
 public:
  explicit ProjectBuilder(std::string project_id);

  /// Adds a sprite; the stage always exists.
  ProjectBuilder& sprite(std::string name);
  ProjectBuilder& stage();
  /// Appends a top-level stack to the current actor.
  ProjectBuilder& script(const std::vector<BlockSpec>& stack);
  /// Adds a top-level reporter block with no stack.
  ProjectBuilder& loose_reporter(const std::string& opcode);

  RawProject build() const { return project_; }

 private:
  BlockId add(const BlockSpec& spec, const std::optional<BlockId>& parent);
  BlockId add_stack(const std::vector<BlockSpec>& stack, const std::optional<BlockId>& parent);
  Actor& current() { return project_.actors[current_]; }

  RawProject project_;
  std::size_t current_ = 0;
  std::size_t next_id_ = 1;
};

/// Scratch 3 project.json text for a project. Keys are sorted, so equal
/// projects serialize to equal bytes.
std::string project_to_json(const RawProject& project);

/// .sb3 archive bytes holding project.json.
std::string project_to_sb3(const RawProject& project);

enum class MutationKind { WrongBlock, MissingBlock, WrongOrder, ExtraBlock };

const char* to_string(MutationKind kind);
/// Throws Error(InvalidConfig) for unknown names.
MutationKind parse_mutation_kind(const std::string& name);

struct MutationSpec {
  MutationKind kind = MutationKind::WrongBlock;
  /// Opcode of the block to mutate. Empty selects a random command block.
  std::string target;
  /// Which match of `target` to use, counting in canonical block order.
  std::size_t occurrence = 0;
  /// New opcode for WrongBlock and ExtraBlock.
  std::optional<std::string> replacement;
  std::uint64_t seed = 0;
};

/// Returns a copy of `project` with the mutation applied. Throws
/// Error(InvalidConfig) when the target does not exist or the mutation does
/// not apply to it.
RawProject apply_mutation(const RawProject& project, const MutationSpec& mutation);

/// Writes `n_correct` clones of `reference` and one mutant per mutation as
/// .sb3 archives into `out_dir`. Returns the paths in write order.
std::vector<std::filesystem::path> generate_corpus(const RawProject& reference,
                                                   std::size_t n_correct,
                                                   const std::vector<MutationSpec>& mutations,
                                                   const std::filesystem::path& out_dir);

struct CorpusSpec {
  std::filesystem::path reference;
  std::size_t correct = 0;
  std::vector<MutationSpec> mutations;
};

/// Reads a JSON corpus spec. A relative reference path is resolved against
/// the spec file's directory.
CorpusSpec load_corpus_spec(const std::filesystem::path& spec_path);

}  // namespace blockpat
