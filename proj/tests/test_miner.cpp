#include <doctest.h>

#include <random>

#include "blockpat/error.hpp"
#include "blockpat/miner.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace blockpat;
using fixtures::kFlag;
using fixtures::kForever;
using fixtures::kIf;

namespace {

std::set<TemporalProperty> as_set(const Pattern& p) {
  return {p.properties.begin(), p.properties.end()};
}

std::vector<PropertySet> random_sets(std::mt19937_64& rng, std::size_t& k) {
  std::size_t n = 1 + rng() % 10;
  std::size_t universe = 3 + rng() % 6;
  std::vector<PropertySet> sets;
  for (std::size_t i = 0; i < n; ++i) {
    std::set<TemporalProperty> s;
    for (std::size_t a = 0; a < universe; ++a) {
      if (rng() % 2) s.insert(fixtures::prop("p" + std::to_string(a), "q"));
    }
    sets.push_back(fixtures::property_set(s, "r" + std::to_string(i)));
  }
  k = 1 + rng() % n;
  return sets;
}

std::map<std::set<TemporalProperty>, std::size_t> oracle_patterns(const std::vector<PropertySet>& sets,
                                                                  std::size_t k) {
  std::map<TemporalProperty, int> ids;
  std::vector<TemporalProperty> back;
  for (const auto& s : sets) {
    for (const auto& p : s.properties) {
      if (ids.emplace(p, static_cast<int>(back.size())).second) back.push_back(p);
    }
  }
  std::vector<oracles::Itemset> transactions;
  for (const auto& s : sets) {
    oracles::Itemset t;
    for (const auto& p : s.properties) t.insert(ids[p]);
    transactions.push_back(t);
  }
  std::map<std::set<TemporalProperty>, std::size_t> out;
  for (const auto& [items, support] : oracles::brute_force_closed(transactions, k)) {
    std::set<TemporalProperty> ps;
    for (int i : items) ps.insert(back[i]);
    out.emplace(ps, support);
  }
  return out;
}

}  // namespace

TEST_SUITE("miner") {
  TEST_CASE("closed patterns of the two loop sensing scripts") {
    std::vector<PropertySet> sets{fixtures::property_set(fixtures::correct_properties(), "a"),
                                  fixtures::property_set(fixtures::properties_with(fixtures::kGoTo), "b")};
    auto patterns = mine_closed_patterns(sets, 1);
    REQUIRE(patterns.size() == 3);
    CHECK(as_set(patterns[0]) ==
          fixtures::props_of({{kFlag, kForever}, {kFlag, kIf}, {kForever, kIf}, {kIf, kIf}}));
    CHECK(patterns[0].support == 2);
    CHECK(patterns[0].supporters == std::vector<std::size_t>{0, 1});
    CHECK(patterns[1].support == 1);
    CHECK(patterns[2].support == 1);
    std::set<std::set<TemporalProperty>> nines{as_set(patterns[1]), as_set(patterns[2])};
    CHECK(nines == std::set<std::set<TemporalProperty>>{
                       fixtures::correct_properties(), fixtures::properties_with(fixtures::kGoTo)});

    CHECK(mine_closed_patterns(sets, 2).size() == 1);
    CHECK(mine_closed_patterns(sets, 3).empty());
  }

  TEST_CASE("support counting") {
    std::vector<PropertySet> sets{fixtures::property_set(fixtures::correct_properties(), "a"),
                                  fixtures::property_set(fixtures::properties_with(fixtures::kGoTo), "b")};
    CHECK(support({}, sets) == 2);
    CHECK(support(fixtures::correct_properties(), sets) == 1);
    CHECK(support(fixtures::props_of({{"x", "y"}}), sets) == 0);
  }

  TEST_CASE("unanimous transactions") {
    std::vector<PropertySet> sets;
    for (int i = 0; i < 7; ++i) {
      sets.push_back(fixtures::property_set(fixtures::correct_properties(), "p" + std::to_string(i)));
    }
    auto patterns = mine_closed_patterns(sets, 7);
    REQUIRE(patterns.size() == 1);
    CHECK(as_set(patterns[0]) == fixtures::correct_properties());
    CHECK(patterns[0].support == 7);
  }

  TEST_CASE("agrees with brute force on random instances") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
      std::size_t k = 1;
      auto sets = random_sets(rng, k);
      auto expected = oracle_patterns(sets, k);
      auto mined = mine_closed_patterns(sets, k, 1 + i % 4);
      std::map<std::set<TemporalProperty>, std::size_t> got;
      for (const auto& p : mined) {
        got.emplace(as_set(p), p.support);
        CHECK(p.supporters.size() == p.support);
        for (std::size_t s : p.supporters) {
          CHECK(std::includes(sets[s].properties.begin(), sets[s].properties.end(),
                              p.properties.begin(), p.properties.end()));
        }
      }
      CHECK(got.size() == mined.size());
      CHECK(got == expected);
      CHECK(std::is_sorted(mined.begin(), mined.end(), pattern_order));
    }
  }

  TEST_CASE("duplicating the dataset doubles supports") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
      std::size_t k = 1;
      auto sets = random_sets(rng, k);
      auto doubled = sets;
      doubled.insert(doubled.end(), sets.begin(), sets.end());
      auto a = mine_closed_patterns(sets, k);
      auto b = mine_closed_patterns(doubled, 2 * k);
      REQUIRE(a.size() == b.size());
      for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a[j].properties == b[j].properties);
        CHECK(2 * a[j].support == b[j].support);
      }
    }
  }

  TEST_CASE("thread count does not change the result") {
    auto sets = fixtures::classroom_sets(30);
    auto one = mine_closed_patterns(sets, 1, 1);
    auto many = mine_closed_patterns(sets, 1, 8);
    REQUIRE(one.size() == many.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
      CHECK(one[i].properties == many[i].properties);
      CHECK(one[i].supporters == many[i].supporters);
    }
  }

  TEST_CASE("property ids follow sorted order") {
    std::vector<PropertySet> sets{fixtures::property_set(fixtures::props_of({{"b", "b"}, {"a", "a"}}), "x")};
    PropertyIndex index(sets);
    REQUIRE(index.size() == 2);
    CHECK(index.property(0) == fixtures::prop("a", "a"));
    CHECK(index.find(fixtures::prop("b", "b")) == 1);
    CHECK(index.find(fixtures::prop("c", "c")) == 2);
  }

  TEST_CASE("configuration validation") {
    MiningConfig c;
    CHECK_NOTHROW(c.validate());
    c.min_confidence = {0, 1};
    CHECK_THROWS_AS(c.validate(), Error);
    c.min_confidence = {11, 10};
    CHECK_THROWS_AS(c.validate(), Error);
    c = MiningConfig{};
    c.min_support = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = MiningConfig{};
    c.min_pattern_size = 0;
    CHECK_THROWS_AS(c.validate(), Error);
  }
}
