#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "blockpat/detector.hpp"
#include "blockpat/ingest.hpp"
#include "blockpat/model.hpp"
#include "blockpat/properties.hpp"

namespace blockpat {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kModelSchemaVersion = 1;

/// Models and property sets for every script of a dataset, in enumeration
/// order.
struct Extraction {
  std::vector<ScriptSource> scripts;
  std::vector<ScriptModel> models;
  std::vector<PropertySet> property_sets;
};

Extraction extract_dataset(const Dataset& dataset, unsigned threads = 1);

struct DatasetStats {
  std::size_t solutions = 0;
  std::size_t models = 0;
  std::size_t patterns = 0;
  std::size_t violations = 0;
  std::size_t anomalies = 0;
  /// Command blocks in scripts, per project.
  Ratio mean_blocks;
  Ratio mean_scripts;
  /// Non-stage actors per project.
  Ratio mean_sprites;
  std::size_t skipped = 0;
};

DatasetStats compute_stats(const Dataset& dataset, const Extraction& extraction);

struct AnomalyReport {
  MiningConfig config;
  DatasetStats stats;
  std::vector<PropertySet> property_sets;
  Detection detection;
};

enum class ModelFormat { Dot, Structured };
enum class ReportFormat { Text, Structured, Dot };

/// Pipeline entry points behind the CLI subcommands.
DatasetStats cmd_stats(const std::filesystem::path& dataset_dir, unsigned threads = 1);
std::vector<std::filesystem::path> cmd_extract_models(const std::filesystem::path& dataset_dir,
                                                      const std::filesystem::path& out_dir,
                                                      ModelFormat format, unsigned threads = 1);
AnomalyReport cmd_mine(const std::filesystem::path& dataset_dir, const MiningConfig& config,
                       unsigned threads = 1);
SweepGrid cmd_sweep(const std::filesystem::path& dataset_dir,
                    const std::vector<std::size_t>& supports,
                    const std::vector<Ratio>& confidences, const MiningConfig& fixed,
                    unsigned threads = 1);

AnomalyReport build_report(const Dataset& dataset, const MiningConfig& config,
                           unsigned threads = 1);

std::string stats_to_text(const DatasetStats& stats);
std::string stats_to_json(const DatasetStats& stats);

/// Renders at most `top_n` anomalies.
std::string render_report(const AnomalyReport& report, ReportFormat format, std::size_t top_n);

std::string model_to_json(const ScriptModel& model);
std::string sweep_to_json(const SweepGrid& grid);
std::string sweep_to_csv(const SweepGrid& grid);

/// File-name-safe form of a script's provenance triple.
std::string artifact_name(const ScriptSource& source);

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace blockpat
