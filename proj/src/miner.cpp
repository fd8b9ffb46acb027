#include "blockpat/miner.hpp"

#include <algorithm>

#include <boost/dynamic_bitset.hpp>

#include "blockpat/error.hpp"
#include "blockpat/parallel.hpp"

namespace blockpat {
namespace {

using Bits = boost::dynamic_bitset<std::uint64_t>;

struct Found {
  Bits items;
  Bits tids;
};

// Closed itemset enumeration by prefix-preserving closure extension (LCM).
// Every closed set is produced exactly once, from its unique parent.
class ClosedMiner {
 public:
  ClosedMiner(const PropertyIndex& index, std::size_t min_support)
      : min_support_(min_support),
        item_count_(index.size()),
        tid_count_(index.transaction_count()) {
    occurrences_.assign(item_count_, Bits(tid_count_));
    rows_.assign(tid_count_, Bits(item_count_));
    for (std::size_t t = 0; t < tid_count_; ++t) {
      for (auto id : index.transaction(t)) {
        occurrences_[id].set(t);
        rows_[t].set(id);
      }
    }
  }

  // Closure of the root and its extensions. The root is the intersection of
  // all transactions and is returned only when non-empty.
  std::vector<Found> run(unsigned threads) const {
    std::vector<Found> out;
    if (tid_count_ < min_support_ || tid_count_ == 0) return out;
    Bits all(tid_count_);
    all.set();
    Bits root = closure(all);
    if (root.any()) out.push_back({root, all});

    std::vector<std::vector<Found>> branches(item_count_);
    parallel_for(item_count_, threads, [&](std::size_t e) {
      extend(root, all, e, branches[e]);
    });
    for (auto& branch : branches) {
      for (auto& f : branch) out.push_back(std::move(f));
    }
    return out;
  }

 private:
  Bits closure(const Bits& tids) const {
    Bits items(item_count_);
    items.set();
    for (auto t = tids.find_first(); t != Bits::npos; t = tids.find_next(t)) items &= rows_[t];
    return items;
  }

  // Tries to add item `e` to the closed set `prefix`; recurses on success.
  void extend(const Bits& prefix, const Bits& tids, std::size_t e, std::vector<Found>& out) const {
    if (prefix.test(e)) return;
    Bits narrowed = tids & occurrences_[e];
    if (narrowed.count() < min_support_) return;
    Bits closed = closure(narrowed);
    for (std::size_t i = 0; i < e; ++i) {
      if (closed.test(i) != prefix.test(i)) return;
    }
    out.push_back({closed, narrowed});
    for (std::size_t next = e + 1; next < item_count_; ++next) {
      extend(closed, narrowed, next, out);
    }
  }

  std::size_t min_support_;
  std::size_t item_count_;
  std::size_t tid_count_;
  std::vector<Bits> occurrences_;
  std::vector<Bits> rows_;
};

}  // namespace

void MiningConfig::validate() const {
  if (min_support < 1) throw Error(ErrorKind::InvalidConfig, "min-support must be >= 1");
  if (min_pattern_size < 1) throw Error(ErrorKind::InvalidConfig, "min-size must be >= 1");
  if (min_confidence.den == 0 || min_confidence.num == 0 ||
      min_confidence.num > min_confidence.den) {
    throw Error(ErrorKind::InvalidConfig, "min-confidence must lie in (0, 1]");
  }
}

PropertyIndex::PropertyIndex(const std::vector<PropertySet>& sets) {
  std::set<TemporalProperty> universe;
  for (const auto& s : sets) universe.insert(s.properties.begin(), s.properties.end());
  properties_.assign(universe.begin(), universe.end());
  for (Id id = 0; id < properties_.size(); ++id) ids_.emplace(properties_[id], id);
  transactions_.reserve(sets.size());
  for (const auto& s : sets) {
    std::vector<Id> row;
    row.reserve(s.properties.size());
    // std::set iteration is sorted, and ids follow that order.
    for (const auto& p : s.properties) row.push_back(ids_.at(p));
    transactions_.push_back(std::move(row));
  }
}

PropertyIndex::Id PropertyIndex::find(const TemporalProperty& property) const {
  auto it = ids_.find(property);
  return it == ids_.end() ? static_cast<Id>(properties_.size()) : it->second;
}

std::size_t support(const std::set<TemporalProperty>& pattern,
                    const std::vector<PropertySet>& property_sets) {
  return static_cast<std::size_t>(
      std::count_if(property_sets.begin(), property_sets.end(), [&](const PropertySet& s) {
        return std::includes(s.properties.begin(), s.properties.end(), pattern.begin(),
                             pattern.end());
      }));
}

bool pattern_order(const Pattern& a, const Pattern& b) {
  if (a.support != b.support) return a.support > b.support;
  if (a.size() != b.size()) return a.size() > b.size();
  return a.properties < b.properties;
}

std::vector<Pattern> mine_closed_patterns(const std::vector<PropertySet>& property_sets,
                                          std::size_t min_support, unsigned threads) {
  PropertyIndex index(property_sets);
  ClosedMiner miner(index, std::max<std::size_t>(min_support, 1));

  std::vector<Pattern> patterns;
  for (const auto& found : miner.run(threads)) {
    Pattern p;
    for (auto i = found.items.find_first(); i != Bits::npos; i = found.items.find_next(i)) {
      p.properties.push_back(index.property(static_cast<PropertyIndex::Id>(i)));
    }
    for (auto t = found.tids.find_first(); t != Bits::npos; t = found.tids.find_next(t)) {
      p.supporters.push_back(t);
    }
    p.support = p.supporters.size();
    patterns.push_back(std::move(p));
  }
  std::sort(patterns.begin(), patterns.end(), pattern_order);
  return patterns;
}

}  // namespace blockpat
