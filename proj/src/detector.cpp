#include "blockpat/detector.hpp"

#include <algorithm>
#include <map>

#include <boost/dynamic_bitset.hpp>

#include "blockpat/error.hpp"
#include "blockpat/parallel.hpp"

namespace blockpat {
namespace {

using Bits = boost::dynamic_bitset<std::uint64_t>;

using DeviationKey = std::pair<std::size_t, const std::vector<TemporalProperty>*>;

struct DeviationKeyLess {
  bool operator()(const DeviationKey& a, const DeviationKey& b) const {
    if (a.first != b.first) return a.first < b.first;
    return *a.second < *b.second;
  }
};

}  // namespace

std::vector<Violation> find_violations(const std::vector<Pattern>& patterns,
                                       const std::vector<PropertySet>& property_sets,
                                       const MiningConfig& config, unsigned threads) {
  PropertyIndex index(property_sets);
  std::vector<Bits> rows(property_sets.size(), Bits(index.size()));
  for (std::size_t s = 0; s < property_sets.size(); ++s) {
    for (auto id : index.transaction(s)) rows[s].set(id);
  }

  std::vector<std::vector<Violation>> per_pattern(patterns.size());
  parallel_for(patterns.size(), threads, [&](std::size_t pi) {
    const Pattern& pattern = patterns[pi];
    if (pattern.size() < config.min_pattern_size) return;
    std::vector<PropertyIndex::Id> ids;
    ids.reserve(pattern.size());
    for (const auto& p : pattern.properties) ids.push_back(index.find(p));

    for (std::size_t s = 0; s < property_sets.size(); ++s) {
      std::size_t missing = 0;
      for (auto id : ids) missing += (id < index.size() && rows[s].test(id)) ? 0 : 1;
      if (missing == 0 || missing == ids.size() || missing > config.max_deviation_level) continue;

      Violation v;
      v.script = s;
      v.pattern = pi;
      v.pattern_support = pattern.support;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        bool has = ids[i] < index.size() && rows[s].test(ids[i]);
        (has ? v.satisfied : v.deviation).push_back(pattern.properties[i]);
      }
      per_pattern[pi].push_back(std::move(v));
    }
  });

  std::vector<Violation> out;
  for (auto& group : per_pattern) {
    for (auto& v : group) out.push_back(std::move(v));
  }
  return out;
}

Ratio confidence(const Violation& violation, const std::vector<Violation>& all) {
  auto same = static_cast<std::uint64_t>(
      std::count_if(all.begin(), all.end(), [&](const Violation& other) {
        return other.pattern == violation.pattern && other.deviation == violation.deviation;
      }));
  return Ratio{violation.pattern_support, violation.pattern_support + same};
}

std::vector<Anomaly> score_violations(const std::vector<Violation>& violations) {
  std::map<DeviationKey, std::size_t, DeviationKeyLess> classes;
  for (const auto& v : violations) ++classes[{v.pattern, &v.deviation}];

  std::vector<Anomaly> scored;
  scored.reserve(violations.size());
  for (const auto& v : violations) {
    std::size_t same = classes.at({v.pattern, &v.deviation});
    Anomaly a;
    a.violation = v;
    a.same_deviation_count = same;
    a.confidence = Ratio{v.pattern_support, v.pattern_support + same};
    scored.push_back(std::move(a));
  }
  return scored;
}

void rank_anomalies(std::vector<Anomaly>& anomalies,
                    const std::vector<PropertySet>& property_sets) {
  std::sort(anomalies.begin(), anomalies.end(), [&](const Anomaly& a, const Anomaly& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    const auto& va = a.violation;
    const auto& vb = b.violation;
    if (va.pattern_support != vb.pattern_support) return va.pattern_support > vb.pattern_support;
    if (va.deviation.size() != vb.deviation.size()) {
      return va.deviation.size() < vb.deviation.size();
    }
    const auto& sa = property_sets[va.script].source;
    const auto& sb = property_sets[vb.script].source;
    if (sa != sb) return sa < sb;
    if (va.script != vb.script) return va.script < vb.script;
    return va.pattern < vb.pattern;
  });
  for (std::size_t i = 0; i < anomalies.size(); ++i) anomalies[i].rank = i + 1;
}

Detection detect_anomalies(const std::vector<PropertySet>& property_sets,
                           const MiningConfig& config, unsigned threads) {
  config.validate();
  Detection result;
  result.patterns = mine_closed_patterns(property_sets, config.min_support, threads);
  auto violations = find_violations(result.patterns, property_sets, config, threads);
  result.violation_count = violations.size();
  for (auto& a : score_violations(violations)) {
    if (a.confidence >= config.min_confidence) result.anomalies.push_back(std::move(a));
  }
  rank_anomalies(result.anomalies, property_sets);
  return result;
}

SweepGrid parameter_sweep(const std::vector<PropertySet>& property_sets,
                          const std::vector<std::size_t>& supports,
                          const std::vector<Ratio>& confidences, const MiningConfig& fixed,
                          unsigned threads) {
  if (supports.empty() || confidences.empty()) {
    throw Error(ErrorKind::InvalidConfig, "sweep needs at least one support and one confidence");
  }
  for (auto k : supports) {
    MiningConfig c = fixed;
    c.min_support = k;
    c.validate();
  }
  for (const auto& r : confidences) {
    MiningConfig c = fixed;
    c.min_confidence = r;
    c.validate();
  }

  // Closed patterns at a higher threshold are exactly the closed patterns at
  // the lowest one with enough support, and a violation's confidence does not
  // depend on the threshold, so one mining pass serves the whole grid.
  std::size_t lowest = *std::min_element(supports.begin(), supports.end());
  auto patterns = mine_closed_patterns(property_sets, lowest, threads);
  auto scored = score_violations(find_violations(patterns, property_sets, fixed, threads));

  SweepGrid grid{supports, confidences, {}};
  grid.counts.assign(supports.size(), std::vector<std::size_t>(confidences.size(), 0));
  for (const auto& a : scored) {
    for (std::size_t i = 0; i < supports.size(); ++i) {
      if (a.violation.pattern_support < supports[i]) continue;
      for (std::size_t j = 0; j < confidences.size(); ++j) {
        if (a.confidence >= confidences[j]) ++grid.counts[i][j];
      }
    }
  }
  return grid;
}

}  // namespace blockpat
