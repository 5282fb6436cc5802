#include "memeground/timestamp.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <limits>

#include "memeground/errors.hpp"

namespace memeground {

namespace {

using namespace std::chrono;

// Upper bound keeps the year within four digits.
constexpr std::int64_t kMaxEpoch = 253402300799;  // 9999-12-31T23:59:59Z

[[noreturn]] void fail(std::string_view raw, const char* why) {
  throw TimestampError("invalid timestamp '" + std::string(raw) + "': " + why);
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ == text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  void advance() { ++pos_; }

  bool digits(std::size_t count, int& out) {
    if (text_.size() - pos_ < count) return false;
    int value = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const char c = text_[pos_ + i];
      if (c < '0' || c > '9') return false;
      value = value * 10 + (c - '0');
    }
    pos_ += count;
    out = value;
    return true;
  }

  bool expect(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

bool all_digits(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

std::string normalize_timestamp(std::int64_t epoch_seconds) {
  if (epoch_seconds < 0) throw TimestampError("negative epoch seconds: " + std::to_string(epoch_seconds));
  if (epoch_seconds > kMaxEpoch) throw TimestampError("epoch seconds out of range: " + std::to_string(epoch_seconds));
  const sys_seconds instant{seconds{epoch_seconds}};
  const sys_days day = floor<days>(instant);
  const year_month_day ymd{day};
  const hh_mm_ss<seconds> tod{instant - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

std::int64_t parse_iso8601(std::string_view raw) {
  Cursor cur(raw);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!cur.digits(4, y) || !cur.expect('-') || !cur.digits(2, mo) || !cur.expect('-') ||
      !cur.digits(2, d))
    fail(raw, "expected YYYY-MM-DD");
  if (!cur.expect('T') && !cur.expect('t') && !cur.expect(' ')) fail(raw, "expected time part");
  if (!cur.digits(2, h) || !cur.expect(':') || !cur.digits(2, mi) || !cur.expect(':') ||
      !cur.digits(2, s))
    fail(raw, "expected hh:mm:ss");
  if (cur.peek() == '.' || cur.peek() == ',') {
    cur.advance();
    if (!std::isdigit(static_cast<unsigned char>(cur.peek()))) fail(raw, "empty fraction");
    while (std::isdigit(static_cast<unsigned char>(cur.peek()))) cur.advance();
  }

  int offset_seconds = 0;
  if (cur.expect('Z') || cur.expect('z')) {
  } else if (cur.peek() == '+' || cur.peek() == '-') {
    const int sign = cur.peek() == '-' ? -1 : 1;
    cur.advance();
    int oh = 0, om = 0;
    if (!cur.digits(2, oh)) fail(raw, "bad offset");
    cur.expect(':');
    if (!cur.digits(2, om)) fail(raw, "bad offset");
    if (oh > 23 || om > 59) fail(raw, "offset out of range");
    offset_seconds = sign * (oh * 3600 + om * 60);
  }
  if (!cur.done()) fail(raw, "trailing characters");

  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) fail(raw, "no such calendar date");
  if (h > 23 || mi > 59 || s > 59) fail(raw, "time of day out of range");

  const std::int64_t local = sys_days{ymd}.time_since_epoch().count() * std::int64_t{86400} +
                             h * 3600 + mi * 60 + s;
  return local - offset_seconds;
}

std::string normalize_timestamp(std::string_view raw) {
  if (all_digits(raw)) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc{} || ptr != raw.data() + raw.size()) fail(raw, "epoch out of range");
    return normalize_timestamp(value);
  }
  const std::int64_t epoch = parse_iso8601(raw);
  if (epoch < 0) fail(raw, "before the Unix epoch");
  return normalize_timestamp(epoch);
}

}  // namespace memeground
