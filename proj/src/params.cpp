#include "sdw/params.hpp"

#include <cctype>
#include <cmath>

#include "sdw/errors.hpp"

namespace sdw {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational parse_decimal(std::string s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  auto dot = s.find('.');
  std::string whole = s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (whole.empty()) whole = "0";
  if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)) || (dot != std::string::npos && frac.empty()))
    throw InvalidInput("not a rational literal: '" + s + "'");
  Rational value{boost::multiprecision::cpp_int(whole)};
  if (!frac.empty()) {
    boost::multiprecision::cpp_int den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    value += Rational(boost::multiprecision::cpp_int(frac), den);
  }
  return negative ? Rational(-value) : value;
}

template <class T>
void validate_impl(const BasicParams<T>& p) {
  if (p.n < 1) throw InvalidInput("n must be a positive integer");
  if (!(p.m >= T(1) && p.m < T(2))) throw InvalidInput("m must lie in [1, 2)");
  if (!(p.delta1 >= T(0) && p.delta1 <= T(1) / 2)) throw InvalidInput("delta1 must lie in [0, 0.5]");
  if (!(p.delta2 >= T(0) && p.delta2 <= T(1) / 2)) throw InvalidInput("delta2 must lie in [0, 0.5]");
  if (!(p.p > T(1))) throw InvalidInput("p must be > 1");
  if (!(p.q > T(1))) throw InvalidInput("q must be > 1");
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  Rational num = parse_decimal(text.substr(0, slash));
  Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw InvalidInput("zero denominator in '" + text + "'");
  return num / den;
}

ExactParams to_exact(const SystemParams& p) {
  return ExactParams{p.n, Rational(p.m), Rational(p.delta1), Rational(p.delta2), Rational(p.p), Rational(p.q)};
}

SystemParams to_double(const ExactParams& p) {
  return SystemParams{p.n, to_double(p.m), to_double(p.delta1), to_double(p.delta2), to_double(p.p),
                      to_double(p.q)};
}

void validate(const SystemParams& p) {
  for (double v : {p.m, p.delta1, p.delta2, p.p, p.q})
    if (!std::isfinite(v)) throw InvalidInput("parameters must be finite");
  validate_impl(p);
}

void validate(const ExactParams& p) { validate_impl(p); }

}  // namespace sdw
