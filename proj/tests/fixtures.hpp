#pragma once

// Shared fixtures: the two introductory scripts (forever / if key pressed /
// move vs. go to), their hand-drawn models and property sets, and helpers for
// synthetic classrooms.

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "blockpat/corpus.hpp"
#include "blockpat/model.hpp"
#include "blockpat/properties.hpp"

namespace fixtures {

using namespace blockpat;

inline const std::string kFlag = "event_whenflagclicked";
inline const std::string kForever = "control_forever";
inline const std::string kIf = "control_if";
inline const std::string kMove = "motion_movesteps";
inline const std::string kGoTo = "motion_goto";
inline const std::string kKeyPressed = "sensing_keypressed";

/// when flag clicked / forever / if <key pressed> / <action>
std::vector<BlockSpec> loop_sensing_stack(const std::string& action);
RawProject loop_sensing_project(const std::string& id, const std::string& action = kMove);

/// Models drawn by hand: l0 -flag-> l1 -forever-> l2, l2 -if-> l2,
/// l2 -if-> l3, l3 -action-> l2.
ScriptModel hand_model(const std::string& action);

TemporalProperty prop(const std::string& a, const std::string& b);
std::set<TemporalProperty> props_of(std::initializer_list<std::pair<std::string, std::string>> pairs);

/// The nine properties of the correct script's model.
std::set<TemporalProperty> correct_properties();
/// The same nine with `action` in place of move steps.
std::set<TemporalProperty> properties_with(const std::string& action);

PropertySet property_set(const std::set<TemporalProperty>& properties, const std::string& project,
                         std::size_t index = 0);

/// `correct` copies of the correct script's property set followed by one
/// go-to variant, named class-000 ... class-NNN.
std::vector<PropertySet> classroom_sets(std::size_t correct);

/// Empty scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Writes `n_correct` correct solutions and one go-to mutant to `dir`.
void write_classroom(const std::filesystem::path& dir, std::size_t n_correct);

/// Lone "when flag clicked" project.
RawProject lone_hat_project(const std::string& id);

}  // namespace fixtures
