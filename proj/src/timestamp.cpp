#include "ochub/timestamp.hpp"

#include <chrono>
#include <cstdio>

#include "ochub/errors.hpp"

namespace ochub {
namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ == text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  // Reads exactly `width` decimal digits.
  std::optional<int> digits(int width) {
    if (pos_ + static_cast<std::size_t>(width) > text_.size()) return std::nullopt;
    int value = 0;
    for (int i = 0; i < width; ++i) {
      char c = text_[pos_ + static_cast<std::size_t>(i)];
      if (c < '0' || c > '9') return std::nullopt;
      value = value * 10 + (c - '0');
    }
    pos_ += static_cast<std::size_t>(width);
    return value;
  }

  // Reads fractional-second digits, returns milliseconds (truncated).
  int fraction_millis() {
    int millis = 0;
    int seen = 0;
    while (peek() >= '0' && peek() <= '9') {
      if (seen < 3) millis = millis * 10 + (peek() - '0');
      ++seen;
      ++pos_;
    }
    for (; seen < 3; ++seen) millis *= 10;
    return millis;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::optional<EpochMillis> parse_timestamp(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  Cursor cur(text);
  auto year = cur.digits(4);
  if (!year || !cur.eat('-')) return std::nullopt;
  auto month = cur.digits(2);
  if (!month || !cur.eat('-')) return std::nullopt;
  auto day = cur.digits(2);
  if (!day) return std::nullopt;

  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{*year}, std::chrono::month{static_cast<unsigned>(*month)},
                     std::chrono::day{static_cast<unsigned>(*day)}};
  if (!ymd.ok()) return std::nullopt;

  int hour = 0, minute = 0, second = 0, millis = 0, offset_minutes = 0;
  if (!cur.done()) {
    if (!cur.eat('T') && !cur.eat('t') && !cur.eat(' ')) return std::nullopt;
    auto h = cur.digits(2);
    if (!h || !cur.eat(':')) return std::nullopt;
    auto m = cur.digits(2);
    if (!m) return std::nullopt;
    hour = *h;
    minute = *m;
    if (cur.eat(':')) {
      auto s = cur.digits(2);
      if (!s) return std::nullopt;
      second = *s;
      if (cur.eat('.') || cur.eat(',')) {
        if (!(cur.peek() >= '0' && cur.peek() <= '9')) return std::nullopt;
        millis = cur.fraction_millis();
      }
    }
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
    if (cur.eat('Z') || cur.eat('z')) {
      // UTC
    } else if (cur.peek() == '+' || cur.peek() == '-') {
      int sign = cur.peek() == '-' ? -1 : 1;
      cur.eat(cur.peek());
      auto oh = cur.digits(2);
      if (!oh) return std::nullopt;
      cur.eat(':');
      auto om = cur.digits(2);
      if (!om || *oh > 23 || *om > 59) return std::nullopt;
      offset_minutes = sign * (*oh * 60 + *om);
    }
    if (!cur.done()) return std::nullopt;
  }

  auto days = sys_days{ymd}.time_since_epoch().count();
  EpochMillis total = static_cast<EpochMillis>(days) * 86'400'000LL +
                      (static_cast<EpochMillis>(hour) * 3600 + minute * 60 + second) * 1000LL + millis -
                      static_cast<EpochMillis>(offset_minutes) * 60'000LL;
  return total;
}

std::string format_timestamp(EpochMillis millis) {
  using namespace std::chrono;
  EpochMillis day_count = millis / 86'400'000LL;
  EpochMillis rem = millis % 86'400'000LL;
  if (rem < 0) {
    rem += 86'400'000LL;
    --day_count;
  }
  year_month_day ymd{sys_days{days{day_count}}};
  int ms = static_cast<int>(rem % 1000);
  int secs = static_cast<int>(rem / 1000);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), secs / 3600,
                (secs / 60) % 60, secs % 60, ms);
  return buf;
}

std::string normalize_timestamp(std::string_view text) {
  auto parsed = parse_timestamp(text);
  if (!parsed) throw FormatError("unparseable timestamp '" + std::string(text) + "'");
  return format_timestamp(*parsed);
}

}  // namespace ochub
