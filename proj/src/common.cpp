#include "muxflow/common.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace muxflow {

SourceClass source_class_from_string(std::string_view s) {
  if (s == "TM") return SourceClass::TM;
  if (s == "TF") return SourceClass::TF;
  if (s == "UM") return SourceClass::UM;
  if (s == "UF") return SourceClass::UF;
  throw ParseError("unknown source class: " + std::string(s));
}

// Howard Hinnant's days-from-civil algorithm.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

namespace {

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

int parse_fixed_int(std::string_view s, size_t pos, size_t len) {
  if (pos + len > s.size()) throw ParseError("timestamp too short: " + std::string(s));
  int v = 0;
  for (size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw ParseError("bad digit in timestamp: " + std::string(s));
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

std::int64_t parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw ParseError("expected YYYY-MM-DD, got: " + std::string(s));
  int y = parse_fixed_int(s, 0, 4);
  int m = parse_fixed_int(s, 5, 2);
  int d = parse_fixed_int(s, 8, 2);
  if (m < 1 || m > 12 || d < 1 || d > 31)
    throw ParseError("date out of range: " + std::string(s));
  return days_from_civil(y, m, d);
}

std::int64_t parse_rfc3339(std::string_view s) {
  if (s.size() < 19 || (s[10] != 'T' && s[10] != 't' && s[10] != ' '))
    throw ParseError("bad timestamp: " + std::string(s));
  std::int64_t day = parse_date(s.substr(0, 10));
  int hh = parse_fixed_int(s, 11, 2);
  int mm = parse_fixed_int(s, 14, 2);
  int ss = parse_fixed_int(s, 17, 2);
  if (s[13] != ':' || s[16] != ':' || hh > 23 || mm > 59 || ss > 60)
    throw ParseError("bad time of day: " + std::string(s));
  size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  std::int64_t offset = 0;
  if (pos < s.size()) {
    char c = s[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      int oh = parse_fixed_int(s, pos + 1, 2);
      size_t mpos = pos + 3;
      if (mpos < s.size() && s[mpos] == ':') ++mpos;
      int om = parse_fixed_int(s, mpos, 2);
      offset = (c == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
      pos = mpos + 2;
    } else {
      throw ParseError("bad timezone suffix: " + std::string(s));
    }
  }
  if (pos != s.size()) throw ParseError("trailing garbage in timestamp: " + std::string(s));
  return day * 86400LL + hh * 3600LL + mm * 60LL + ss - offset;
}

std::string format_date(std::int64_t epoch_day) {
  int y;
  unsigned m, d;
  civil_from_days(epoch_day, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
  return buf;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace muxflow
