#pragma once

#include <cstddef>
#include <vector>

#include "blockpat/miner.hpp"
#include "blockpat/ratio.hpp"

namespace blockpat {

/// A script that lacks some, but not all, properties of a pattern.
struct Violation {
  /// Index into the property-set list.
  std::size_t script = 0;
  /// Index into the pattern list.
  std::size_t pattern = 0;
  std::size_t pattern_support = 0;
  /// Pattern properties the script lacks. Sorted, never empty.
  std::vector<TemporalProperty> deviation;
  /// Pattern properties the script has. Sorted, never empty.
  std::vector<TemporalProperty> satisfied;
};

struct Anomaly {
  Violation violation;
  /// support / (support + same_deviation_count)
  Ratio confidence;
  /// Scripts that deviate from the same pattern in exactly the same way,
  /// the script itself included.
  std::size_t same_deviation_count = 0;
  /// 1-based position in the ranked list.
  std::size_t rank = 0;
};

struct Detection {
  std::vector<Pattern> patterns;
  std::size_t violation_count = 0;
  std::vector<Anomaly> anomalies;
};

/// One violation per (pattern, script) pair where the pattern has at least
/// min_pattern_size properties, the script misses between 1 and
/// max_deviation_level of them and has at least one. Ordered by pattern, then
/// script.
std::vector<Violation> find_violations(const std::vector<Pattern>& patterns,
                                       const std::vector<PropertySet>& property_sets,
                                       const MiningConfig& config, unsigned threads = 1);

/// s / (s + v) where v counts the violations in `all` of the same pattern with
/// an equal deviation.
Ratio confidence(const Violation& violation, const std::vector<Violation>& all);

/// Violations scored with their confidence, unfiltered and unranked.
std::vector<Anomaly> score_violations(const std::vector<Violation>& violations);

/// Ranking order: confidence desc, pattern support desc, deviation size asc,
/// script provenance asc, pattern index asc.
void rank_anomalies(std::vector<Anomaly>& anomalies,
                    const std::vector<PropertySet>& property_sets);

/// Mines, finds violations, keeps those with confidence >= min_confidence and
/// ranks them.
Detection detect_anomalies(const std::vector<PropertySet>& property_sets,
                           const MiningConfig& config, unsigned threads = 1);

struct SweepGrid {
  std::vector<std::size_t> supports;
  std::vector<Ratio> confidences;
  /// counts[i][j]: anomalies at supports[i] and confidences[j].
  std::vector<std::vector<std::size_t>> counts;
};

/// Anomaly counts for every (support, confidence) pair. Other settings come
/// from `fixed`.
SweepGrid parameter_sweep(const std::vector<PropertySet>& property_sets,
                          const std::vector<std::size_t>& supports,
                          const std::vector<Ratio>& confidences, const MiningConfig& fixed,
                          unsigned threads = 1);

}  // namespace blockpat
