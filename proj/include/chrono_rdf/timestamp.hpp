#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace chrono_rdf {

// UTC instant at one-second precision.
class Timestamp {
 public:
  using Duration = std::chrono::seconds;
  using TimePoint = std::chrono::sys_seconds;

  constexpr Timestamp() = default;
  constexpr explicit Timestamp(TimePoint tp) : tp_(tp) {}

  static Timestamp from_unix(long long seconds) {
    return Timestamp(TimePoint(Duration(seconds)));
  }

  // xsd:dateTime lexical form. A missing zone offset means UTC; fractional
  // seconds are truncated. Throws SyntaxError.
  static Timestamp parse(std::string_view text);
  static std::optional<Timestamp> try_parse(std::string_view text);

  TimePoint time_point() const { return tp_; }
  long long unix_seconds() const { return tp_.time_since_epoch().count(); }

  // "YYYY-MM-DDTHH:MM:SS", always UTC, no offset suffix.
  std::string to_string() const;

  Timestamp operator+(Duration d) const { return Timestamp(tp_ + d); }
  Timestamp operator-(Duration d) const { return Timestamp(tp_ - d); }

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;

 private:
  TimePoint tp_{};
};

// Closed interval; a missing bound is unbounded.
struct TimeInterval {
  std::optional<Timestamp> start;
  std::optional<Timestamp> end;

  static TimeInterval unbounded() { return {}; }
  static TimeInterval at(Timestamp t) { return {t, t}; }

  bool contains(Timestamp t) const {
    return (!start || *start <= t) && (!end || t <= *end);
  }
  bool is_unbounded() const { return !start && !end; }
  // Throws ConfigError when start > end.
  void validate() const;
};

}  // namespace chrono_rdf
