#include "sponge/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "sponge/error.hpp"

namespace sponge {

namespace {

BigInt pow10(long e) {
  BigInt r = 1;
  for (long k = 0; k < e; ++k) r *= 10;
  return r;
}

Rational parse_decimal(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  BigInt digits = 0;
  long frac = 0;
  bool any = false, dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any = true;
      if (dot) ++frac;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) throw ParseError("not a number: '" + s + "'");
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::size_t used = 0;
    try {
      exp10 = std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      throw ParseError("bad exponent in '" + s + "'");
    }
    if (std::labs(exp10) > 400) throw ParseError("exponent out of range in '" + s + "'");
    i += used;
  }
  if (i != s.size()) throw ParseError("trailing characters in '" + s + "'");
  long e = exp10 - frac;
  Rational r = e >= 0 ? Rational(digits * pow10(e)) : Rational(digits, pow10(-e));
  return neg ? Rational(-r) : r;
}

BigInt parse_int(const std::string& s, const std::string& whole) {
  if (s.empty()) throw ParseError("bad rational '" + whole + "'");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw ParseError("bad rational '" + whole + "'");
  for (std::size_t k = i; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k])))
      throw ParseError("bad rational '" + whole + "'");
  return BigInt(s);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string::npos) return parse_decimal(s);
  BigInt num = parse_int(trim(s.substr(0, slash)), s);
  BigInt den = parse_int(trim(s.substr(slash + 1)), s);
  if (den == 0) throw ParseError("zero denominator in '" + s + "'");
  return Rational(num, den);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value has no rational form");
  int e = 0;
  double m = std::frexp(x, &e);
  // m * 2^53 is an integer
  auto mi = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  BigInt num = mi;
  if (e >= 0) return Rational(num << e);
  BigInt den = 1;
  den <<= -e;
  return Rational(num, den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  auto n = boost::multiprecision::numerator(r);
  auto d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

Rational rational_from_shortest(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite number");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return parse_rational(std::string(buf, res.ptr));
}

}  // namespace sponge
