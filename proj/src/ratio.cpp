#include "blockpat/ratio.hpp"

#include <charconv>
#include <numeric>
#include <string_view>

#include "blockpat/error.hpp"

namespace blockpat {
namespace {

std::uint64_t parse_uint(std::string_view digits, const std::string& original) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw Error(ErrorKind::InvalidConfig, "not a fraction: " + original);
  }
  return value;
}

}  // namespace

Ratio Ratio::reduced() const {
  std::uint64_t g = std::gcd(num, den);
  return g == 0 ? *this : Ratio{num / g, den / g};
}

std::string Ratio::to_fixed(int places) const {
  unsigned __int128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  unsigned __int128 scaled = (static_cast<unsigned __int128>(num) * scale * 2 + den) / (2 * den);
  auto whole = static_cast<std::uint64_t>(scaled / scale);
  auto frac = static_cast<std::uint64_t>(scaled % scale);
  std::string digits = std::to_string(frac);
  std::string out = std::to_string(whole);
  if (places > 0) out += "." + std::string(static_cast<std::size_t>(places) - digits.size(), '0') + digits;
  return out;
}

std::string Ratio::to_fraction() const { return std::to_string(num) + "/" + std::to_string(den); }

Ratio parse_ratio(const std::string& text) {
  Ratio r;
  if (auto slash = text.find('/'); slash != std::string::npos) {
    r.num = parse_uint(std::string_view(text).substr(0, slash), text);
    r.den = parse_uint(std::string_view(text).substr(slash + 1), text);
  } else {
    auto dot = text.find('.');
    std::string whole = text.substr(0, dot);
    std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || frac.size() > 12) {
      throw Error(ErrorKind::InvalidConfig, "not a fraction: " + text);
    }
    for (std::size_t i = 0; i < frac.size(); ++i) r.den *= 10;
    r.num = (whole.empty() ? 0 : parse_uint(whole, text)) * r.den +
            (frac.empty() ? 0 : parse_uint(frac, text));
  }
  if (r.den == 0) throw Error(ErrorKind::InvalidConfig, "zero denominator: " + text);
  return r.reduced();
}

}  // namespace blockpat
