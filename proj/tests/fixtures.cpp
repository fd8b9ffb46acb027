#include "fixtures.hpp"

#include <atomic>
#include <random>

#include "blockpat/report.hpp"

namespace fixtures {

std::vector<BlockSpec> loop_sensing_stack(const std::string& action) {
  return {block(kFlag), c_block(kForever, {c_block(kIf, {block(action)}, {kKeyPressed})})};
}

RawProject loop_sensing_project(const std::string& id, const std::string& action) {
  return ProjectBuilder(id).sprite("Sprite1").script(loop_sensing_stack(action)).build();
}

ScriptModel hand_model(const std::string& action) {
  ScriptModel m;
  m.location_count = 4;
  m.entry = 0;
  m.add(0, BlockLabel{kFlag}, 1);
  m.add(1, BlockLabel{kForever}, 2);
  m.add(2, BlockLabel{kIf}, 2);
  m.add(2, BlockLabel{kIf}, 3);
  m.add(3, BlockLabel{action}, 2);
  return m;
}

TemporalProperty prop(const std::string& a, const std::string& b) {
  return {BlockLabel{a}, BlockLabel{b}};
}

std::set<TemporalProperty> props_of(std::initializer_list<std::pair<std::string, std::string>> pairs) {
  std::set<TemporalProperty> out;
  for (const auto& [a, b] : pairs) out.insert(prop(a, b));
  return out;
}

std::set<TemporalProperty> properties_with(const std::string& action) {
  return props_of({{kFlag, kForever},
                   {kFlag, kIf},
                   {kFlag, action},
                   {kForever, kIf},
                   {kForever, action},
                   {kIf, action},
                   {kIf, kIf},
                   {action, kIf},
                   {action, action}});
}

std::set<TemporalProperty> correct_properties() { return properties_with(kMove); }

PropertySet property_set(const std::set<TemporalProperty>& properties, const std::string& project,
                         std::size_t index) {
  PropertySet s;
  s.source = {project, "Sprite1", index, "b1", false};
  s.properties = properties;
  return s;
}

std::vector<PropertySet> classroom_sets(std::size_t correct) {
  std::vector<PropertySet> sets;
  auto name = [](std::size_t i) {
    std::string n = std::to_string(i);
    return "class-" + std::string(3 - std::min<std::size_t>(3, n.size()), '0') + n;
  };
  for (std::size_t i = 0; i < correct; ++i) sets.push_back(property_set(correct_properties(), name(i)));
  sets.push_back(property_set(properties_with(kGoTo), name(correct)));
  return sets;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("blockpat-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_classroom(const std::filesystem::path& dir, std::size_t n_correct) {
  MutationSpec wrong;
  wrong.kind = MutationKind::WrongBlock;
  wrong.target = kMove;
  wrong.replacement = kGoTo;
  generate_corpus(loop_sensing_project("reference"), n_correct, {wrong}, dir);
}

RawProject lone_hat_project(const std::string& id) {
  return ProjectBuilder(id).sprite("Sprite1").script({block(kFlag)}).build();
}

}  // namespace fixtures
