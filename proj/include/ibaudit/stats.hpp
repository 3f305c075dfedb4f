#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ibaudit {

/// A percentage held at one-decimal precision, rounded half-up.
///
/// Stored as an integer count of tenths so comparisons and printing are
/// exact and platform independent.
class Percentage {
 public:
  constexpr Percentage() = default;

  static Percentage from_tenths(std::int64_t tenths) {
    Percentage p;
    p.tenths_ = tenths;
    return p;
  }

  /// 100 * part / total, rounded half-up using integer arithmetic.
  static Percentage of(std::uint64_t part, std::uint64_t total) {
    if (total == 0) throw std::domain_error("percentage of an empty total");
    const std::uint64_t num = part * 2000 + total;
    return from_tenths(static_cast<std::int64_t>(num / (2 * total)));
  }

  /// Rounds a real-valued percentage half-up (away from zero for negatives).
  static Percentage round(double value) {
    // The epsilon absorbs binary representation error at exact .x5 ties.
    const double scaled = std::abs(value) * 10.0 + 0.5 + 1e-9;
    auto t = static_cast<std::int64_t>(std::floor(scaled));
    return from_tenths(value < 0 ? -t : t);
  }

  std::int64_t tenths() const { return tenths_; }
  double value() const { return static_cast<double>(tenths_) / 10.0; }

  std::string str() const {
    std::int64_t a = tenths_ < 0 ? -tenths_ : tenths_;
    std::string s = std::to_string(a / 10) + "." + std::to_string(a % 10);
    return tenths_ < 0 ? "-" + s : s;
  }

  auto operator<=>(const Percentage&) const = default;

 private:
  std::int64_t tenths_ = 0;
};

}  // namespace ibaudit
