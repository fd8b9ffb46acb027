#include <sstream>
#include <string>
#include <unordered_map>

#include "blockpat/ingest.hpp"

namespace blockpat {
namespace detail {
extern const char* const kOpcodeTable;
}

namespace {

struct OpcodeInfo {
  BlockKind kind;
  std::string alias;
};

struct OpcodeTable {
  std::unordered_map<std::string, OpcodeInfo> entries;
  std::string version = "unversioned";
};

BlockKind parse_kind(const std::string& name) {
  static const std::unordered_map<std::string, BlockKind> kinds = {
      {"Hat", BlockKind::Hat},
      {"Command", BlockKind::Command},
      {"ControlIfThen", BlockKind::ControlIfThen},
      {"ControlIfElse", BlockKind::ControlIfElse},
      {"ControlForever", BlockKind::ControlForever},
      {"ControlLoopBounded", BlockKind::ControlLoopBounded},
      {"ControlLoopUntil", BlockKind::ControlLoopUntil},
      {"Cap", BlockKind::Cap},
      {"Reporter", BlockKind::Reporter},
  };
  auto it = kinds.find(name);
  return it == kinds.end() ? BlockKind::Unknown : it->second;
}

OpcodeTable parse_table() {
  OpcodeTable table;
  std::istringstream in(detail::kOpcodeTable);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      constexpr std::string_view marker = "# version ";
      if (line.starts_with(marker)) table.version = line.substr(marker.size());
      continue;
    }
    auto tab1 = line.find('\t');
    auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos) continue;
    std::string opcode = line.substr(0, tab1);
    std::string kind = line.substr(tab1 + 1, tab2 == std::string::npos ? std::string::npos
                                                                      : tab2 - tab1 - 1);
    std::string alias = tab2 == std::string::npos ? opcode : line.substr(tab2 + 1);
    table.entries[opcode] = {parse_kind(kind), alias};
  }
  return table;
}

const OpcodeTable& table() {
  static const OpcodeTable instance = parse_table();
  return instance;
}

}  // namespace

BlockKind classify_opcode(std::string_view opcode) {
  const auto& entries = table().entries;
  auto it = entries.find(std::string(opcode));
  return it == entries.end() ? BlockKind::Unknown : it->second.kind;
}

std::string opcode_alias(std::string_view opcode) {
  const auto& entries = table().entries;
  auto it = entries.find(std::string(opcode));
  return it == entries.end() ? std::string(opcode) : it->second.alias;
}

std::string opcode_table_version() { return table().version; }

const char* to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Hat: return "Hat";
    case BlockKind::Command: return "Command";
    case BlockKind::ControlIfThen: return "ControlIfThen";
    case BlockKind::ControlIfElse: return "ControlIfElse";
    case BlockKind::ControlForever: return "ControlForever";
    case BlockKind::ControlLoopBounded: return "ControlLoopBounded";
    case BlockKind::ControlLoopUntil: return "ControlLoopUntil";
    case BlockKind::Cap: return "Cap";
    case BlockKind::Reporter: return "Reporter";
    case BlockKind::Unknown: return "Unknown";
  }
  return "Unknown";
}

}  // namespace blockpat
