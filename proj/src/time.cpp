#include "revsim/time.hpp"

#include <fmt/format.h>

#include <charconv>
#include <stdexcept>

namespace revsim {

namespace {

int read_digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) {
    throw std::invalid_argument(fmt::format("truncated timestamp '{}'", text));
  }
  int value = 0;
  auto const* first = text.data() + pos;
  auto const* last = first + count;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument(fmt::format("bad digits in timestamp '{}'", text));
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw std::invalid_argument(
        fmt::format("expected '{}' at offset {} in timestamp '{}'", c, pos, text));
  }
}

}  // namespace

Instant parse_instant(std::string_view text) {
  using namespace std::chrono;

  int const y = read_digits(text, 0, 4);
  expect_char(text, 4, '-');
  int const mo = read_digits(text, 5, 2);
  expect_char(text, 7, '-');
  int const d = read_digits(text, 8, 2);

  year_month_day const date{year{y}, month{static_cast<unsigned>(mo)},
                            day{static_cast<unsigned>(d)}};
  if (!date.ok()) {
    throw std::invalid_argument(fmt::format("invalid calendar date in '{}'", text));
  }

  int hh = 0;
  int mm = 0;
  int ss = 0;
  std::size_t pos = 10;
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != ' ') {
      throw std::invalid_argument(fmt::format("expected 'T' in timestamp '{}'", text));
    }
    hh = read_digits(text, pos + 1, 2);
    expect_char(text, pos + 3, ':');
    mm = read_digits(text, pos + 4, 2);
    pos += 6;
    if (pos < text.size() && text[pos] == ':') {
      ss = read_digits(text, pos + 1, 2);
      pos += 3;
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t const frac_start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
          ++pos;
        }
        if (pos == frac_start) {
          throw std::invalid_argument(fmt::format("empty fraction in '{}'", text));
        }
      }
    }
    if (hh > 23 || mm > 59 || ss > 60) {
      throw std::invalid_argument(fmt::format("time of day out of range in '{}'", text));
    }
  }

  seconds offset{0};
  if (pos < text.size()) {
    char const zone = text[pos];
    if (zone == 'Z' || zone == 'z') {
      ++pos;
    } else if (zone == '+' || zone == '-') {
      int const oh = read_digits(text, pos + 1, 2);
      std::size_t next = pos + 3;
      if (next < text.size() && text[next] == ':') {
        ++next;
      }
      int const om = read_digits(text, next, 2);
      offset = hours{oh} + minutes{om};
      if (zone == '-') {
        offset = -offset;
      }
      pos = next + 2;
    }
  }
  if (pos != text.size()) {
    throw std::invalid_argument(fmt::format("trailing characters in timestamp '{}'", text));
  }

  return sys_days{date} + hours{hh} + minutes{mm} + seconds{ss} - offset;
}

std::string format_instant(Instant t) {
  using namespace std::chrono;
  auto const day_point = floor<days>(t);
  year_month_day const date{day_point};
  hh_mm_ss const tod{t - day_point};
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                     tod.hours().count(), tod.minutes().count(), tod.seconds().count());
}

std::int64_t utc_day(Instant t) {
  return std::chrono::floor<std::chrono::days>(t).time_since_epoch().count();
}

std::int64_t days_between(Instant from, Instant to) { return utc_day(to) - utc_day(from); }

}  // namespace revsim
