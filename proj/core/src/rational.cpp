#include "ghzlab/rational.hpp"

#include <cmath>
#include <cstdio>

#include "ghzlab/errors.hpp"

namespace ghzlab {

std::string BudgetExceeded::format(double v) {
  char buf[64];
  if (v < 1e15 && v == std::floor(v)) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.6g", v);
  }
  return buf;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty rational");
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto valid = [](const std::string& t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t i = (allow_sign && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') return false;
    }
    return true;
  };
  if (!valid(num, true) || !valid(den, false)) {
    throw ParseError("malformed rational '" + s + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  BigInt n(num), d(den);
  if (d == 0) throw ParseError("zero denominator in '" + s + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

double to_double(const Rational& r) { return r.get_d(); }

Rational from_double(double v) {
  if (!std::isfinite(v)) throw DomainError("cannot convert non-finite double to rational");
  Rational r(v);
  r.canonicalize();
  return r;
}

}  // namespace ghzlab
