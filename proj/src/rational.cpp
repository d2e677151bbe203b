#include "mmd/rational.hpp"

#include "mmd/errors.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace mmd {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Admissibility: return "admissibility";
    case ErrorKind::RejectedRadius: return "rejected-radius";
    case ErrorKind::UnsupportedBackend: return "unsupported-backend";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Resource: return "resource";
    case ErrorKind::Bracket: return "bracket";
    case ErrorKind::EmptyApproximation: return "empty-approximation";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

namespace {

BigInt pow10(unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 10;
  return r;
}

Rational parse_decimal(std::string_view s) {
  if (s.empty()) fail(ErrorKind::Validation, "empty number");
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  BigInt mantissa = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c >= '0' && c <= '9') {
      mantissa = mantissa * 10 + (c - '0');
      any_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c == 'e' || c == 'E') {
      break;
    } else {
      fail(ErrorKind::Validation, "malformed number '" + std::string(s) + "'");
    }
  }
  if (!any_digit) fail(ErrorKind::Validation, "malformed number '" + std::string(s) + "'");
  int exponent = 0;
  if (i < s.size()) {
    const std::string_view tail = s.substr(i + 1);
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), exponent);
    if (ec != std::errc() || ptr != tail.data() + tail.size()) {
      // from_chars rejects a leading '+'
      if (!tail.empty() && tail[0] == '+') {
        auto [p2, e2] = std::from_chars(tail.data() + 1, tail.data() + tail.size(), exponent);
        if (e2 != std::errc() || p2 != tail.data() + tail.size())
          fail(ErrorKind::Validation, "malformed exponent in '" + std::string(s) + "'");
      } else {
        fail(ErrorKind::Validation, "malformed exponent in '" + std::string(s) + "'");
      }
    }
  }
  exponent -= frac_digits;
  Rational r = exponent >= 0 ? Rational(mantissa * pow10(static_cast<unsigned>(exponent)))
                             : Rational(mantissa, pow10(static_cast<unsigned>(-exponent)));
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) fail(ErrorKind::Validation, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) fail(ErrorKind::Validation, "non-finite value has no rational form");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) fail(ErrorKind::Validation, "cannot format value");
  return parse_decimal(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

long double to_long_double(const Rational& r) { return r.convert_to<long double>(); }

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

std::string to_string(const Rational& r) { return r.str(); }

}  // namespace mmd
