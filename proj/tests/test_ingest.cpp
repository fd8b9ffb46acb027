#include <doctest.h>

#include <fstream>

#include "blockpat/corpus.hpp"
#include "blockpat/error.hpp"
#include "blockpat/ingest.hpp"
#include "blockpat/report.hpp"
#include "fixtures.hpp"

using namespace blockpat;

namespace {

const std::filesystem::path kData = BLOCKPAT_TEST_DATA;

ErrorKind error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidConfig;
}

std::string blocks_json(const std::string& blocks) {
  return R"({"targets":[{"isStage":true,"name":"Stage","blocks":{}},)"
         R"({"isStage":false,"name":"Sprite1","blocks":)" +
         blocks + "}]}";
}

}  // namespace

TEST_SUITE("ingest") {
  TEST_CASE("hand-built archive of the loop sensing script") {
    for (const char* file : {"fig1a.sb3", "fig1a.json"}) {
      CAPTURE(file);
      RawProject p = load_project(kData / file);
      CHECK(p.project_id == "fig1a");
      REQUIRE(p.actors.size() == 2);
      CHECK(p.actors[0].is_stage);
      const Actor& sprite = p.actors[1];
      CHECK_FALSE(sprite.is_stage);
      CHECK(sprite.name == "Sprite1");
      CHECK(sprite.script_roots == std::vector<BlockId>{"hat"});
      CHECK(sprite.blocks.size() == 5);
      CHECK(p.warnings.empty());

      const RawBlock& cond = sprite.blocks.at("cond");
      REQUIRE(cond.substacks.size() == 1);
      CHECK(cond.substacks[0] == std::optional<BlockId>("move"));
      CHECK(cond.reporter_children == std::vector<BlockId>{"key"});
      CHECK(sprite.blocks.at("loop").substacks.size() == 1);
      CHECK(sprite.blocks.at("move").substacks.empty());

      auto scripts = enumerate_scripts(p);
      REQUIRE(scripts.size() == 1);
      CHECK(scripts[0].actor_name == "Sprite1");
      CHECK(scripts[0].root_block == "hat");
      CHECK(count_command_blocks(sprite, "hat") == 4);
    }
  }

  TEST_CASE("stage without sprites") {
    RawProject p = load_project(kData / "stage_only.sb3");
    CHECK(p.actors.size() == 1);
    CHECK(p.actors[0].script_roots.empty());
    CHECK(enumerate_scripts(p).empty());
  }

  TEST_CASE("unreadable inputs") {
    CHECK(error_of([] { load_project(kData / "garbage.sb3"); }) == ErrorKind::ArchiveUnreadable);
    CHECK(error_of([] { load_project(kData / "missing.sb3"); }) == ErrorKind::ArchiveUnreadable);
    CHECK(error_of([] { load_project(kData / "no_project_json.sb3"); }) ==
          ErrorKind::MalformedProject);
    CHECK(error_of([] { parse_project_json("{\"foo\": 1}", "x"); }) == ErrorKind::MalformedProject);
  }

  TEST_CASE("truncated zip is unreadable") {
    fixtures::TempDir dir("trunc");
    std::string bytes = project_to_sb3(fixtures::loop_sensing_project("p"));
    write_file(dir.path() / "cut.sb3", bytes.substr(0, bytes.size() / 2));
    CHECK(error_of([&] { load_project(dir.path() / "cut.sb3"); }) == ErrorKind::ArchiveUnreadable);
  }

  TEST_CASE("classification table") {
    CHECK(classify_opcode("control_forever") == BlockKind::ControlForever);
    CHECK(classify_opcode("sensing_keypressed") == BlockKind::Reporter);
    CHECK(classify_opcode("event_whenflagclicked") == BlockKind::Hat);
    CHECK(classify_opcode("control_if_else") == BlockKind::ControlIfElse);
    CHECK(classify_opcode("control_repeat") == BlockKind::ControlLoopBounded);
    CHECK(classify_opcode("control_repeat_until") == BlockKind::ControlLoopUntil);
    CHECK(classify_opcode("control_stop") == BlockKind::Cap);
    CHECK(classify_opcode("music_playDrumForBeats") == BlockKind::Unknown);
    CHECK(opcode_alias("motion_movesteps") == "move steps");
    CHECK(opcode_alias("music_playDrumForBeats") == "music_playDrumForBeats");
    CHECK(opcode_table_version() == "1");
  }

  TEST_CASE("lone hat block is one script") {
    auto p = fixtures::lone_hat_project("empty");
    auto scripts = enumerate_scripts(p);
    REQUIRE(scripts.size() == 1);
    CHECK(count_command_blocks(*p.find_actor("Sprite1"), scripts[0].root_block) == 1);
  }

  TEST_CASE("loose reporters are not scripts, headless stacks are") {
    auto p = ProjectBuilder("p")
                 .sprite("Cat")
                 .loose_reporter("operator_add")
                 .script({block("motion_movesteps"), block("looks_show")})
                 .script({block(fixtures::kFlag)})
                 .build();
    auto scripts = enumerate_scripts(p);
    REQUIRE(scripts.size() == 2);
    CHECK(scripts[0].script_index == 0);
    CHECK(p.find_actor("Cat")->find(scripts[0].root_block)->opcode == "motion_movesteps");
    CHECK(scripts[1].script_index == 1);
  }

  TEST_CASE("top-level variable arrays are ignored") {
    auto p = parse_project_json(
        blocks_json(R"({"v": [12, "score", "id-1", 10, 20],)"
                    R"("h": {"opcode":"event_whenflagclicked","next":null,"parent":null,)"
                    R"("inputs":{},"fields":{},"topLevel":true,"x":0,"y":0}})"),
        "vars");
    CHECK(p.actors[1].blocks.size() == 1);
    CHECK(enumerate_scripts(p).size() == 1);
  }

  TEST_CASE("unresolvable references degrade to warnings") {
    auto p = parse_project_json(
        blocks_json(R"({"h": {"opcode":"event_whenflagclicked","next":"gone","parent":null,)"
                    R"("inputs":{},"topLevel":true,"x":0,"y":0},)"
                    R"("orphan": {"opcode":"motion_movesteps","next":null,"parent":"nowhere",)"
                    R"("inputs":{},"topLevel":false},)"
                    R"("f": {"opcode":"control_forever","next":null,"parent":null,)"
                    R"("inputs":{"SUBSTACK":[2,"missing"]},"topLevel":true,"x":0,"y":50}})"),
        "broken");
    const Actor& a = p.actors[1];
    CHECK(a.find("orphan") == nullptr);
    CHECK_FALSE(a.blocks.at("h").next.has_value());
    CHECK_FALSE(a.blocks.at("f").substacks[0].has_value());
    CHECK(p.warnings.size() >= 3);
    CHECK(enumerate_scripts(p).size() == 2);
  }

  TEST_CASE("cyclic next chains are cut") {
    auto p = parse_project_json(
        blocks_json(R"({"h": {"opcode":"event_whenflagclicked","next":"a","parent":null,)"
                    R"("inputs":{},"topLevel":true,"x":0,"y":0},)"
                    R"("a": {"opcode":"motion_movesteps","next":"b","parent":"h","inputs":{}},)"
                    R"("b": {"opcode":"looks_show","next":"a","parent":"a","inputs":{}}})"),
        "cycle");
    CHECK_FALSE(p.actors[1].blocks.at("b").next.has_value());
    CHECK(count_command_blocks(p.actors[1], "h") == 3);
    CHECK_FALSE(p.warnings.empty());
  }

  TEST_CASE("custom blocks carry their prototype text") {
    BlockSpec def = block("procedures_definition");
    def.procedure = "jump %s";
    BlockSpec call = block("procedures_call");
    call.procedure = "jump %s";
    auto p = ProjectBuilder("proc").sprite("S").script({def, block("motion_changeyby")}).script(
                                                                   {block(fixtures::kFlag), call})
                 .build();
    fixtures::TempDir dir("proc");
    write_file(dir.path() / "proc.sb3", project_to_sb3(p));
    auto loaded = load_project(dir.path() / "proc.sb3");
    int definitions = 0;
    int calls = 0;
    for (const auto& [id, b] : loaded.actors[1].blocks) {
      if (b.opcode == "procedures_definition") {
        ++definitions;
        CHECK(b.procedure == std::optional<std::string>("jump %s"));
      }
      if (b.opcode == "procedures_call") {
        ++calls;
        CHECK(b.procedure == std::optional<std::string>("jump %s"));
      }
    }
    CHECK(definitions == 1);
    CHECK(calls == 1);
    CHECK(enumerate_scripts(loaded).size() == 2);
  }

  TEST_CASE("datasets load in file name order and skip bad files") {
    fixtures::TempDir dir("ds");
    for (const char* name : {"c", "a", "b"}) {
      write_file(dir.path() / (std::string(name) + ".sb3"),
                 project_to_sb3(fixtures::loop_sensing_project(name)));
    }
    write_file(dir.path() / "notes.txt", "ignored");
    auto ds = load_dataset(dir.path());
    REQUIRE(ds.projects.size() == 3);
    CHECK(ds.projects[0].project_id == "a");
    CHECK(ds.projects[1].project_id == "b");
    CHECK(ds.projects[2].project_id == "c");
    CHECK(ds.skipped.empty());

    write_file(dir.path() / "b.sb3", "definitely not a project");
    auto partial = load_dataset(dir.path(), 4);
    CHECK(partial.projects.size() == 2);
    REQUIRE(partial.skipped.size() == 1);
    CHECK(partial.skipped[0].path.filename() == "b.sb3");
  }

  TEST_CASE("empty or missing dataset directories") {
    fixtures::TempDir dir("empty");
    CHECK(error_of([&] { load_dataset(dir.path()); }) == ErrorKind::DatasetEmpty);
    write_file(dir.path() / "x.sb3", "garbage");
    CHECK(error_of([&] { load_dataset(dir.path()); }) == ErrorKind::DatasetEmpty);
    CHECK(error_of([&] { load_dataset(dir.path() / "nope"); }) == ErrorKind::ArchiveUnreadable);
  }

  TEST_CASE("130 generated solutions load deterministically") {
    fixtures::TempDir dir("130");
    generate_corpus(fixtures::loop_sensing_project("ref"), 130, {}, dir.path());
    auto first = load_dataset(dir.path(), 1);
    auto second = load_dataset(dir.path(), 8);
    REQUIRE(first.projects.size() == 130);
    REQUIRE(second.projects.size() == 130);
    for (std::size_t i = 0; i < 130; ++i) {
      CHECK(first.projects[i].project_id == second.projects[i].project_id);
      CHECK(project_to_json(first.projects[i]) == project_to_json(second.projects[i]));
    }
  }
}
