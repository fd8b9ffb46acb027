#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace blockpat {

/// Non-negative exact fraction; compared by cross-multiplication.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Ratio reduced() const;

  /// Decimal rendering rounded half-up, e.g. 30/31 -> "0.9677".
  std::string to_fixed(int places = 4) const;
  /// "30/31"
  std::string to_fraction() const;

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    return static_cast<unsigned __int128>(a.num) * b.den <=>
           static_cast<unsigned __int128>(b.num) * a.den;
  }
};

/// Parses "0.9", ".75", "1" or "9/10". Throws Error(InvalidConfig).
Ratio parse_ratio(const std::string& text);

}  // namespace blockpat
