#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

#include "ffnet/errors.hpp"

namespace ffnet {

/// Calendar day (ISO 8601, YYYY-MM-DD). Thin value wrapper around a day
/// count so ordering and day arithmetic stay trivial.
class Date {
 public:
  Date() = default;

  static Date from_ymd(int year, unsigned month, unsigned day);

  /// Parses "YYYY-MM-DD"; throws ParseError on anything else.
  static Date parse(std::string_view text);

  std::string to_string() const;

  Date plus_days(long n) const {
    Date d;
    d.days_ = days_ + std::chrono::days{n};
    return d;
  }

  /// Days from `earlier` to this date (negative if this is earlier).
  long days_since(const Date& earlier) const {
    return (days_ - earlier.days_).count();
  }

  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace ffnet
