#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "blockpat/properties.hpp"
#include "blockpat/ratio.hpp"

namespace blockpat {

/// A set of temporal properties shared by `support` scripts.
struct Pattern {
  /// Sorted, duplicate-free.
  std::vector<TemporalProperty> properties;
  std::size_t support = 0;
  /// Indices into the property-set list the pattern was mined from, ascending.
  std::vector<std::size_t> supporters;

  std::size_t size() const { return properties.size(); }
};

struct MiningConfig {
  std::size_t min_support = 20;
  std::size_t min_pattern_size = 2;
  std::size_t max_deviation_level = 10000;
  /// In (0, 1].
  Ratio min_confidence{9, 10};

  /// Throws Error(InvalidConfig) when a field is out of range.
  void validate() const;
};

/// Interns temporal properties to dense ids. Ids follow the sorted order of
/// the properties, so they do not depend on the order scripts were added.
class PropertyIndex {
 public:
  using Id = std::uint32_t;

  explicit PropertyIndex(const std::vector<PropertySet>& sets);

  std::size_t size() const { return properties_.size(); }
  const TemporalProperty& property(Id id) const { return properties_[id]; }
  /// Returns size() for unknown properties.
  Id find(const TemporalProperty& property) const;
  /// Sorted ids of the properties of set `i`.
  const std::vector<Id>& transaction(std::size_t i) const { return transactions_[i]; }
  std::size_t transaction_count() const { return transactions_.size(); }

 private:
  std::vector<TemporalProperty> properties_;
  std::map<TemporalProperty, Id> ids_;
  std::vector<std::vector<Id>> transactions_;
};

/// Number of property sets that contain every property of `pattern`.
std::size_t support(const std::set<TemporalProperty>& pattern,
                    const std::vector<PropertySet>& property_sets);

/// All non-empty closed property sets with support >= min_support, each with
/// its exact supporter list. Sorted by support desc, size desc, then
/// properties lexicographically.
std::vector<Pattern> mine_closed_patterns(const std::vector<PropertySet>& property_sets,
                                          std::size_t min_support, unsigned threads = 1);

/// Canonical pattern order used by mine_closed_patterns.
bool pattern_order(const Pattern& a, const Pattern& b);

}  // namespace blockpat
