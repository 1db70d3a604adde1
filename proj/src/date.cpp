#include "ffnet/date.hpp"

#include <cstdio>

namespace ffnet {

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
    throw ParseError(std::string("invalid calendar date ") + buf);
  }
  Date d;
  d.days_ = std::chrono::sys_days{ymd};
  return d;
}

Date Date::parse(std::string_view text) {
  // Strict YYYY-MM-DD.
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw ParseError("bad date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  }
  auto digits = [&](std::size_t pos, std::size_t len) -> unsigned {
    unsigned v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      const char c = text[i];
      if (c < '0' || c > '9') {
        throw ParseError("bad date '" + std::string(text) + "' (expected YYYY-MM-DD)");
      }
      v = v * 10 + static_cast<unsigned>(c - '0');
    }
    return v;
  };
  return from_ymd(static_cast<int>(digits(0, 4)), digits(5, 2), digits(8, 2));
}

std::string Date::to_string() const {
  const std::chrono::year_month_day ymd{days_};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace ffnet
