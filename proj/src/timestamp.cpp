#include "chrono_rdf/timestamp.hpp"

#include <charconv>
#include <cstdio>

#include "chrono_rdf/error.hpp"

namespace chrono_rdf {

namespace {

bool read_int(std::string_view text, std::size_t& pos, std::size_t digits,
              int& out) {
  if (pos + digits > text.size()) return false;
  auto first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + digits, out);
  if (ec != std::errc{} || ptr != first + digits) return false;
  pos += digits;
  return true;
}

bool expect(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) return false;
  ++pos;
  return true;
}

}  // namespace

std::optional<Timestamp> Timestamp::try_parse(std::string_view text) {
  using namespace std::chrono;
  std::size_t pos = 0;
  int y, mo, d, h, mi, s;
  if (!read_int(text, pos, 4, y) || !expect(text, pos, '-') ||
      !read_int(text, pos, 2, mo) || !expect(text, pos, '-') ||
      !read_int(text, pos, 2, d) || !expect(text, pos, 'T') ||
      !read_int(text, pos, 2, h) || !expect(text, pos, ':') ||
      !read_int(text, pos, 2, mi) || !expect(text, pos, ':') ||
      !read_int(text, pos, 2, s)) {
    return std::nullopt;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) return std::nullopt;
  }
  int offset_minutes = 0;
  if (pos < text.size()) {
    char c = text[pos];
    if (c == 'Z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      ++pos;
      int oh, om;
      if (!read_int(text, pos, 2, oh) || !expect(text, pos, ':') ||
          !read_int(text, pos, 2, om) || oh > 14 || om > 59) {
        return std::nullopt;
      }
      offset_minutes = (oh * 60 + om) * (c == '-' ? -1 : 1);
    }
  }
  if (pos != text.size()) return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  auto tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} -
            minutes{offset_minutes};
  return Timestamp(time_point_cast<seconds>(tp));
}

Timestamp Timestamp::parse(std::string_view text) {
  auto parsed = try_parse(text);
  if (!parsed) {
    throw SyntaxError(1, 1, "invalid xsd:dateTime '" + std::string(text) + "'");
  }
  return *parsed;
}

std::string Timestamp::to_string() const {
  using namespace std::chrono;
  auto days = floor<std::chrono::days>(tp_);
  year_month_day ymd{days};
  hh_mm_ss hms{tp_ - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

void TimeInterval::validate() const {
  if (start && end && *end < *start) {
    throw Error(ErrorCode::kConfigError,
                "interval start " + start->to_string() + " is after end " +
                    end->to_string());
  }
}

}  // namespace chrono_rdf
