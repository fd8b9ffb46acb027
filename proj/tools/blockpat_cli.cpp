// blockpat: anomaly detection over collections of Scratch solutions.
//
// Exit codes: 0 ran (anomalies or not), 1 usage or configuration error,
// 2 dataset or output unreadable/unwritable.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "blockpat/corpus.hpp"
#include "blockpat/error.hpp"
#include "blockpat/report.hpp"

namespace {

using namespace blockpat;

struct MiningFlags {
  std::string preset = "default";
  std::optional<std::size_t> min_support;
  std::optional<std::string> min_confidence;
  std::optional<std::size_t> min_size;
  std::optional<std::size_t> max_deviation;

  void add_to(CLI::App* cmd, bool with_support_and_confidence = true) {
    cmd->add_option("--preset", preset,
                    "default: support 20, confidence 0.9; small: support 10, confidence 0.7")
        ->check(CLI::IsMember({"default", "small"}))
        ->envname("BLOCKPAT_PRESET");
    if (with_support_and_confidence) {
      cmd->add_option("--min-support", min_support, "minimum pattern support")
          ->envname("BLOCKPAT_MIN_SUPPORT");
      cmd->add_option("--min-confidence", min_confidence, "minimum violation confidence, (0,1]")
          ->envname("BLOCKPAT_MIN_CONFIDENCE");
    }
    cmd->add_option("--min-size", min_size, "minimum size of a violated pattern")
        ->envname("BLOCKPAT_MIN_SIZE");
    cmd->add_option("--max-deviation", max_deviation, "maximum deviation level")
        ->envname("BLOCKPAT_MAX_DEVIATION");
  }

  MiningConfig resolve() const {
    MiningConfig c;
    if (preset == "small") {
      c.min_support = 10;
      c.min_confidence = {7, 10};
    }
    if (min_support) c.min_support = *min_support;
    if (min_confidence) c.min_confidence = parse_ratio(*min_confidence);
    if (min_size) c.min_pattern_size = *min_size;
    if (max_deviation) c.max_deviation_level = *max_deviation;
    c.validate();
    return c;
  }
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig: return 1;
    default: return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pattern-based anomaly detection for collections of Scratch solutions"};
  app.require_subcommand(1);
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--threads", threads, "worker threads")->envname("BLOCKPAT_THREADS");

  // stats
  std::string dataset_dir;
  std::string format;
  std::string out_path;
  auto* stats = app.add_subcommand("stats", "dataset statistics");
  stats->add_option("dataset", dataset_dir, "directory of .sb3 / project.json files")->required();
  stats->add_option("--format", format, "text | structured")
      ->check(CLI::IsMember({"text", "structured"}))
      ->envname("BLOCKPAT_FORMAT");
  stats->add_option("--out", out_path, "output file (default stdout)");

  // extract-models
  auto* extract = app.add_subcommand("extract-models", "write one model file per script");
  extract->add_option("dataset", dataset_dir)->required();
  extract->add_option("--out", out_path, "output directory")->required();
  extract->add_option("--format", format, "dot | structured")
      ->check(CLI::IsMember({"dot", "structured"}))
      ->envname("BLOCKPAT_FORMAT");

  // mine
  MiningFlags mine_flags;
  std::size_t top_n = 10;
  auto* mine = app.add_subcommand("mine", "mine patterns and report ranked anomalies");
  mine->add_option("dataset", dataset_dir)->required();
  mine_flags.add_to(mine);
  mine->add_option("--top", top_n, "number of anomalies to report")->envname("BLOCKPAT_TOP");
  mine->add_option("--format", format, "text | structured | dot")
      ->check(CLI::IsMember({"text", "structured", "dot"}))
      ->envname("BLOCKPAT_FORMAT");
  mine->add_option("--out", out_path, "output file (default stdout)");

  // sweep
  MiningFlags sweep_flags;
  std::string supports_text = "1,5,10,15,20";
  std::string confidences_text = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  auto* sweep = app.add_subcommand("sweep", "anomaly counts over a support x confidence grid");
  sweep->add_option("dataset", dataset_dir)->required();
  sweep_flags.add_to(sweep, false);
  sweep->add_option("--supports", supports_text, "comma-separated minimum supports");
  sweep->add_option("--confidences", confidences_text, "comma-separated minimum confidences");
  sweep->add_option("--format", format, "structured | csv")
      ->check(CLI::IsMember({"structured", "csv"}))
      ->envname("BLOCKPAT_FORMAT");
  sweep->add_option("--out", out_path, "output file (default stdout)");

  // gen-corpus
  std::string spec_path;
  auto* gen = app.add_subcommand("gen-corpus", "clone a reference solution and inject defects");
  gen->add_option("--spec", spec_path, "JSON corpus spec")->required();
  gen->add_option("--out", out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*stats) {
      auto s = cmd_stats(dataset_dir, threads);
      emit(format == "structured" ? stats_to_json(s) : stats_to_text(s), out_path);
    } else if (*extract) {
      auto files = cmd_extract_models(dataset_dir, out_path,
                                      format == "structured" ? ModelFormat::Structured
                                                             : ModelFormat::Dot,
                                      threads);
      std::cout << "wrote " << files.size() << " model files to " << out_path << "\n";
    } else if (*mine) {
      auto report = cmd_mine(dataset_dir, mine_flags.resolve(), threads);
      ReportFormat rf = format == "structured" ? ReportFormat::Structured
                        : format == "dot"      ? ReportFormat::Dot
                                               : ReportFormat::Text;
      emit(render_report(report, rf, top_n), out_path);
    } else if (*sweep) {
      std::vector<std::size_t> supports;
      for (const auto& s : split_list(supports_text)) {
        try {
          supports.push_back(std::stoul(s));
        } catch (const std::exception&) {
          throw Error(ErrorKind::InvalidConfig, "invalid support value: " + s);
        }
      }
      std::vector<Ratio> confidences;
      for (const auto& c : split_list(confidences_text)) confidences.push_back(parse_ratio(c));
      auto grid = cmd_sweep(dataset_dir, supports, confidences, sweep_flags.resolve(), threads);
      emit(format == "csv" ? sweep_to_csv(grid) : sweep_to_json(grid), out_path);
    } else if (*gen) {
      auto spec = load_corpus_spec(spec_path);
      auto reference = load_project(spec.reference);
      auto files = generate_corpus(reference, spec.correct, spec.mutations, out_path);
      std::cout << "wrote " << files.size() << " projects to " << out_path << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "blockpat: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return 0;
}
