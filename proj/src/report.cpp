#include "blockpat/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "blockpat/dot.hpp"
#include "blockpat/error.hpp"
#include "blockpat/parallel.hpp"

namespace blockpat {
namespace {

using nlohmann::json;

constexpr std::size_t kPatternSummaryLimit = 10;

Ratio mean(std::size_t total, std::size_t count) {
  return count == 0 ? Ratio{0, 1} : Ratio{total, count}.reduced();
}

json property_json(const TemporalProperty& p) {
  return {{"first", p.first.id}, {"second", p.second.id}, {"text", format_property(p)}};
}

json properties_json(const std::vector<TemporalProperty>& props) {
  json out = json::array();
  for (const auto& p : props) out.push_back(property_json(p));
  return out;
}

json source_json(const ScriptSource& s) {
  return {{"project", s.project_id},
          {"actor", s.actor_name},
          {"index", s.script_index},
          {"stage", s.from_stage},
          {"key", s.key()}};
}

json config_json(const MiningConfig& c) {
  return {{"min_support", c.min_support},
          {"min_pattern_size", c.min_pattern_size},
          {"max_deviation_level", c.max_deviation_level},
          {"min_confidence", c.min_confidence.to_fixed(4)},
          {"min_confidence_exact", c.min_confidence.to_fraction()}};
}

json stats_json(const DatasetStats& s) {
  return {{"solutions", s.solutions},
          {"models", s.models},
          {"patterns", s.patterns},
          {"violations", s.violations},
          {"anomalies", s.anomalies},
          {"skipped", s.skipped},
          {"mean_blocks", s.mean_blocks.to_fixed(4)},
          {"mean_scripts", s.mean_scripts.to_fixed(4)},
          {"mean_sprites", s.mean_sprites.to_fixed(4)}};
}

std::size_t shown(const AnomalyReport& r, std::size_t top_n) {
  return std::min(top_n, r.detection.anomalies.size());
}

std::string render_json(const AnomalyReport& r, std::size_t top_n) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool"] = "blockpat";
  doc["config"] = config_json(r.config);
  doc["stats"] = stats_json(r.stats);

  json patterns = json::array();
  for (std::size_t i = 0; i < r.detection.patterns.size(); ++i) {
    const auto& p = r.detection.patterns[i];
    patterns.push_back({{"id", i + 1},
                        {"support", p.support},
                        {"size", p.size()},
                        {"supporters", p.supporters.size()},
                        {"properties", properties_json(p.properties)}});
  }
  doc["patterns"] = std::move(patterns);

  json anomalies = json::array();
  for (std::size_t i = 0; i < shown(r, top_n); ++i) {
    const auto& a = r.detection.anomalies[i];
    const auto& v = a.violation;
    anomalies.push_back({{"rank", a.rank},
                         {"confidence", a.confidence.to_fixed(4)},
                         {"confidence_exact", a.confidence.to_fraction()},
                         {"same_deviation_count", a.same_deviation_count},
                         {"script", source_json(r.property_sets[v.script].source)},
                         {"pattern",
                          {{"id", v.pattern + 1},
                           {"support", v.pattern_support},
                           {"size", v.deviation.size() + v.satisfied.size()}}},
                         {"satisfied", properties_json(v.satisfied)},
                         {"deviation", properties_json(v.deviation)}});
  }
  doc["anomalies_total"] = r.detection.anomalies.size();
  doc["anomalies"] = std::move(anomalies);
  return doc.dump(2) + "\n";
}

std::string render_text(const AnomalyReport& r, std::size_t top_n) {
  std::ostringstream out;
  const auto& c = r.config;
  out << "blockpat anomaly report\n";
  out << "config: min-support=" << c.min_support
      << " min-confidence=" << c.min_confidence.to_fixed(4)
      << " min-size=" << c.min_pattern_size << " max-deviation=" << c.max_deviation_level << "\n";
  out << stats_to_text(r.stats);

  const auto& patterns = r.detection.patterns;
  out << "\npatterns: " << patterns.size() << " closed\n";
  for (std::size_t i = 0; i < std::min(patterns.size(), kPatternSummaryLimit); ++i) {
    out << "  pattern " << i + 1 << ": support " << patterns[i].support << ", size "
        << patterns[i].size() << "\n";
  }
  if (patterns.size() > kPatternSummaryLimit) {
    out << "  ... " << patterns.size() - kPatternSummaryLimit << " more\n";
  }

  std::size_t n = shown(r, top_n);
  if (n == 0) return out.str();
  out << "\nanomalies: showing " << n << " of " << r.detection.anomalies.size() << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = r.detection.anomalies[i];
    const auto& v = a.violation;
    out << "\n#" << a.rank << "  confidence " << a.confidence.to_fixed(4) << " ("
        << a.confidence.to_fraction() << ")  script " << r.property_sets[v.script].source.key()
        << "\n";
    out << "    pattern " << v.pattern + 1 << ": support " << v.pattern_support << ", size "
        << v.deviation.size() + v.satisfied.size() << ", same deviation in "
        << a.same_deviation_count << " script(s)\n";
    out << "    missing:\n";
    for (const auto& p : v.deviation) out << "      " << format_property(p) << "\n";
    out << "    present:\n";
    for (const auto& p : v.satisfied) out << "      " << format_property(p) << "\n";
  }
  return out.str();
}

std::string render_dot(const AnomalyReport& r, std::size_t top_n) {
  dot::Graph g("anomalies");
  g.attribute("compound", "true");
  for (std::size_t i = 0; i < shown(r, top_n); ++i) {
    const auto& a = r.detection.anomalies[i];
    const auto& v = a.violation;
    std::set<TemporalProperty> present(v.satisfied.begin(), v.satisfied.end());
    std::set<TemporalProperty> missing(v.deviation.begin(), v.deviation.end());
    std::string prefix = "a" + std::to_string(a.rank) + "_";
    auto cluster = property_graph(present, missing, "cluster_" + std::to_string(a.rank), prefix);
    cluster.attribute("label", "#" + std::to_string(a.rank) + " " +
                                   r.property_sets[v.script].source.key() + " (" +
                                   a.confidence.to_fixed(4) + ")");
    g.subgraph(cluster);
  }
  return g.str();
}

std::string sanitize(std::string_view text) {
  std::string out;
  for (char c : text) {
    bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                c == '-' || c == '_' || c == '.';
    out += keep ? c : '_';
  }
  return out.empty() ? "_" : out;
}

}  // namespace

Extraction extract_dataset(const Dataset& dataset, unsigned threads) {
  Extraction out;
  std::vector<const RawProject*> owner;
  for (const auto& project : dataset.projects) {
    for (auto& s : enumerate_scripts(project)) {
      out.scripts.push_back(std::move(s));
      owner.push_back(&project);
    }
  }
  out.models.resize(out.scripts.size());
  out.property_sets.resize(out.scripts.size());
  parallel_for(out.scripts.size(), threads, [&](std::size_t i) {
    out.models[i] = extract_script_model(out.scripts[i], *owner[i]);
    out.property_sets[i] = props(out.models[i]);
  });
  return out;
}

DatasetStats compute_stats(const Dataset& dataset, const Extraction& extraction) {
  DatasetStats s;
  s.solutions = dataset.projects.size();
  s.models = extraction.scripts.size();
  s.skipped = dataset.skipped.size();
  std::size_t blocks = 0;
  std::size_t sprites = 0;
  for (const auto& project : dataset.projects) {
    for (const auto& actor : project.actors) {
      if (!actor.is_stage) ++sprites;
    }
  }
  std::map<std::string, const RawProject*> by_id;
  for (const auto& project : dataset.projects) by_id.emplace(project.project_id, &project);
  for (const auto& script : extraction.scripts) {
    auto it = by_id.find(script.project_id);
    if (it == by_id.end()) continue;
    if (const Actor* actor = it->second->find_actor(script.actor_name)) {
      blocks += count_command_blocks(*actor, script.root_block);
    }
  }
  s.mean_blocks = mean(blocks, s.solutions);
  s.mean_scripts = mean(s.models, s.solutions);
  s.mean_sprites = mean(sprites, s.solutions);
  return s;
}

AnomalyReport build_report(const Dataset& dataset, const MiningConfig& config, unsigned threads) {
  config.validate();
  auto extraction = extract_dataset(dataset, threads);
  AnomalyReport report;
  report.config = config;
  report.stats = compute_stats(dataset, extraction);
  report.detection = detect_anomalies(extraction.property_sets, config, threads);
  report.property_sets = std::move(extraction.property_sets);
  report.stats.patterns = report.detection.patterns.size();
  report.stats.violations = report.detection.violation_count;
  report.stats.anomalies = report.detection.anomalies.size();
  return report;
}

DatasetStats cmd_stats(const std::filesystem::path& dataset_dir, unsigned threads) {
  auto dataset = load_dataset(dataset_dir, threads);
  return compute_stats(dataset, extract_dataset(dataset, threads));
}

std::vector<std::filesystem::path> cmd_extract_models(const std::filesystem::path& dataset_dir,
                                                      const std::filesystem::path& out_dir,
                                                      ModelFormat format, unsigned threads) {
  auto dataset = load_dataset(dataset_dir, threads);
  auto extraction = extract_dataset(dataset, threads);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error(ErrorKind::OutputUnwritable, "cannot create " + out_dir.string());
  }

  std::vector<std::filesystem::path> written;
  std::set<std::string> used;
  const char* ext = format == ModelFormat::Dot ? ".dot" : ".json";
  for (const auto& model : extraction.models) {
    std::string base = artifact_name(model.source);
    std::string name = base;
    for (int n = 2; !used.insert(name).second; ++n) name = base + "-" + std::to_string(n);
    auto path = out_dir / (name + ext);
    write_file(path, format == ModelFormat::Dot ? to_dot(model, model.source.key())
                                                : model_to_json(model));
    written.push_back(path);
  }
  return written;
}

AnomalyReport cmd_mine(const std::filesystem::path& dataset_dir, const MiningConfig& config,
                       unsigned threads) {
  config.validate();
  return build_report(load_dataset(dataset_dir, threads), config, threads);
}

SweepGrid cmd_sweep(const std::filesystem::path& dataset_dir,
                    const std::vector<std::size_t>& supports,
                    const std::vector<Ratio>& confidences, const MiningConfig& fixed,
                    unsigned threads) {
  auto dataset = load_dataset(dataset_dir, threads);
  auto extraction = extract_dataset(dataset, threads);
  return parameter_sweep(extraction.property_sets, supports, confidences, fixed, threads);
}

std::string stats_to_text(const DatasetStats& s) {
  std::ostringstream out;
  out << "solutions: " << s.solutions << " (" << s.skipped << " skipped)\n";
  out << "models: " << s.models << "\n";
  out << "mean blocks per solution: " << s.mean_blocks.to_fixed(2) << "\n";
  out << "mean scripts per solution: " << s.mean_scripts.to_fixed(2) << "\n";
  out << "mean sprites per solution: " << s.mean_sprites.to_fixed(2) << "\n";
  out << "patterns: " << s.patterns << "\n";
  out << "violations: " << s.violations << "\n";
  out << "anomalies: " << s.anomalies << "\n";
  return out.str();
}

std::string stats_to_json(const DatasetStats& stats) {
  json doc{{"schema_version", kReportSchemaVersion}, {"stats", stats_json(stats)}};
  return doc.dump(2) + "\n";
}

std::string render_report(const AnomalyReport& report, ReportFormat format, std::size_t top_n) {
  switch (format) {
    case ReportFormat::Text: return render_text(report, top_n);
    case ReportFormat::Structured: return render_json(report, top_n);
    case ReportFormat::Dot: return render_dot(report, top_n);
  }
  return {};
}

std::string model_to_json(const ScriptModel& model) {
  json transitions = json::array();
  for (const auto& t : model.transitions) {
    transitions.push_back({{"from", t.from},
                           {"to", t.to},
                           {"label", t.label ? json(t.label->id) : json(nullptr)}});
  }
  json doc{{"schema_version", kModelSchemaVersion},
           {"source", source_json(model.source)},
           {"locations", model.location_count},
           {"entry", model.entry},
           {"exits", std::vector<Location>(model.exits.begin(), model.exits.end())},
           {"transitions", std::move(transitions)}};
  return doc.dump(2) + "\n";
}

std::string sweep_to_json(const SweepGrid& grid) {
  json rows = json::array();
  for (std::size_t i = 0; i < grid.supports.size(); ++i) {
    for (std::size_t j = 0; j < grid.confidences.size(); ++j) {
      rows.push_back({{"min_support", grid.supports[i]},
                      {"min_confidence", grid.confidences[j].to_fixed(4)},
                      {"anomalies", grid.counts[i][j]}});
    }
  }
  json doc{{"schema_version", kReportSchemaVersion}, {"grid", std::move(rows)}};
  return doc.dump(2) + "\n";
}

std::string sweep_to_csv(const SweepGrid& grid) {
  std::string out = "min_support,min_confidence,anomalies\n";
  for (std::size_t i = 0; i < grid.supports.size(); ++i) {
    for (std::size_t j = 0; j < grid.confidences.size(); ++j) {
      out += std::to_string(grid.supports[i]) + "," + grid.confidences[j].to_fixed(4) + "," +
             std::to_string(grid.counts[i][j]) + "\n";
    }
  }
  return out;
}

std::string artifact_name(const ScriptSource& source) {
  return sanitize(source.project_id) + "__" + sanitize(source.actor_name) + "__" +
         std::to_string(source.script_index);
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::OutputUnwritable, "cannot write " + path.string());
  out << contents;
  out.flush();
  if (!out) throw Error(ErrorKind::OutputUnwritable, "cannot write " + path.string());
}

}  // namespace blockpat
