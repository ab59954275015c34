// Copyright 2026 The PyQL Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pyql/value.h"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace pyql {
namespace {

// Howard Hinnant's civil-from-days / days-from-civil.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

bool leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int kind_rank(const Value& v) {
  if (v.is_number()) return 0;
  if (v.is_date()) return 1;
  if (v.is_entity()) return 2;
  return 3;
}

}  // namespace

bool Value::is_boolean() const {
  return is_text() && (as_text() == "TRUE" || as_text() == "FALSE");
}

std::string_view Value::kind_name() const {
  if (is_number()) return "number";
  if (is_entity()) return "entity";
  if (is_date()) return "date";
  if (is_boolean()) return "boolean";
  return "text";
}

std::string Value::to_string() const {
  if (is_number()) return format_number(as_number());
  if (is_entity()) return as_entity();
  if (is_date()) return format_iso_date(as_date());
  return as_text();
}

bool Value::operator==(const Value& other) const { return v_ == other.v_; }

std::weak_ordering compare_entity_ids(std::string_view a, std::string_view b) {
  auto split = [](std::string_view s) {
    std::size_t i = s.size();
    while (i > 0 && s[i - 1] >= '0' && s[i - 1] <= '9') --i;
    return std::pair{s.substr(0, i), s.substr(i)};
  };
  auto [pa, na] = split(a);
  auto [pb, nb] = split(b);
  if (auto c = pa <=> pb; c != 0) return c;
  // Compare digit runs numerically, ignoring leading zeros.
  while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
  while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
  if (na.size() != nb.size()) return na.size() <=> nb.size();
  if (auto c = na <=> nb; c != 0) return c;
  return a <=> b;
}

std::weak_ordering compare_values(const Value& a, const Value& b) {
  const int ra = kind_rank(a), rb = kind_rank(b);
  if (ra != rb) return ra <=> rb;
  switch (ra) {
    case 0: {
      const double x = a.as_number(), y = b.as_number();
      if (x < y) return std::weak_ordering::less;
      if (x > y) return std::weak_ordering::greater;
      return std::weak_ordering::equivalent;
    }
    case 1: return a.as_date() <=> b.as_date();
    case 2: return compare_entity_ids(a.as_entity(), b.as_entity());
    default: return a.as_text() <=> b.as_text();
  }
}

std::weak_ordering compare_cells(const std::optional<Value>& a, const std::optional<Value>& b) {
  if (!a || !b) return static_cast<bool>(a) <=> static_cast<bool>(b);
  return compare_values(*a, *b);
}

std::string format_number(double x) {
  if (x == 0) x = 0;  // drop negative zero
  char buf[64];
  // integers print in full; shortest form would give 1e+06
  const bool whole = std::abs(x) < 1e15 && x == std::trunc(x);
  auto res = whole ? std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed)
                   : std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_number(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double x = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(x)) return std::nullopt;
  return x;
}

std::optional<std::int64_t> parse_iso_date(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.size() < 10) return std::nullopt;
  const std::size_t dash = text.find('-');
  if (dash == std::string_view::npos || dash < 4) return std::nullopt;
  auto num = [](std::string_view s, std::int64_t& out) {
    if (s.empty()) return false;
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
  };
  std::int64_t y = 0, m = 0, d = 0;
  if (!num(text.substr(0, dash), y)) return std::nullopt;
  if (text.size() < dash + 6 || text[dash + 3] != '-') return std::nullopt;
  if (!num(text.substr(dash + 1, 2), m) || !num(text.substr(dash + 4, 2), d)) return std::nullopt;
  const std::string_view rest = text.substr(dash + 6);
  if (!rest.empty() && rest.front() != 'T') return std::nullopt;
  if (negative) y = -y;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12 || d < 1) return std::nullopt;
  const int limit = kDays[m - 1] + (m == 2 && leap(y) ? 1 : 0);
  if (d > limit) return std::nullopt;
  return days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string format_iso_date(std::int64_t days) {
  std::int64_t y = 0;
  unsigned m = 0, d = 0;
  civil_from_days(days, y, m, d);
  char buf[32];
  if (y < 0) {
    std::snprintf(buf, sizeof(buf), "-%04lld-%02u-%02u", static_cast<long long>(-y), m, d);
  } else {
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u", static_cast<long long>(y), m, d);
  }
  return buf;
}

}  // namespace pyql
