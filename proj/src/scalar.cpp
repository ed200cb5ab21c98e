#include "nilgeo/scalar.hpp"

#include "nilgeo/error.hpp"

#include <cctype>
#include <cstdlib>

namespace nilgeo {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidAlgebra: return "InvalidAlgebra";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::NonCentralArgument: return "NonCentralArgument";
    case ErrorCode::NonOrthogonalKernelSplit: return "NonOrthogonalKernelSplit";
    case ErrorCode::SingularJOnE2: return "SingularJOnE2";
    case ErrorCode::DegenerateCenter: return "DegenerateCenter";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::CausalInconsistency: return "CausalInconsistency";
    case ErrorCode::NonRationalStructure: return "NonRationalStructure";
    case ErrorCode::NotABasis: return "NotABasis";
    case ErrorCode::NotCanonical: return "NotCanonical";
    case ErrorCode::FlatCaseOnly: return "FlatCaseOnly";
    case ErrorCode::PerpConditionFailed: return "PerpConditionFailed";
    case ErrorCode::NoXiSolution: return "NoXiSolution";
    case ErrorCode::InconsistentRatio: return "InconsistentRatio";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::ParseError, "non-finite number");
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);
  // 53 significant bits fit exactly in an int64 after scaling.
  auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational q(scaled);
  Rational two(2);
  if (exponent > 0) {
    for (int i = 0; i < exponent; ++i) q *= two;
  } else {
    Rational den(1);
    for (int i = 0; i < -exponent; ++i) den *= two;
    q /= den;
  }
  return q;
}

namespace {

Rational parse_decimal(std::string_view s) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) negative = s[pos++] == '-';
  std::string digits;
  int frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw Error(ErrorCode::ParseError, "not a number: '" + std::string(s) + "'");
  int exponent = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    std::string exp_text(s.substr(pos + 1));
    char* end = nullptr;
    long e = std::strtol(exp_text.c_str(), &end, 10);
    if (exp_text.empty() || *end != '\0' || e > 4000 || e < -4000)
      throw Error(ErrorCode::ParseError, "bad exponent in '" + std::string(s) + "'");
    exponent = static_cast<int>(e);
    pos = s.size();
  }
  if (pos != s.size()) throw Error(ErrorCode::ParseError, "trailing characters in '" + std::string(s) + "'");
  Rational value{boost::multiprecision::mpz_int(digits)};
  int shift = exponent - frac_digits;
  Rational ten(10);
  for (int i = 0; i < std::abs(shift); ++i) {
    if (shift > 0) value *= ten;
    else value /= ten;
  }
  return negative ? Rational(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s);
  Rational num = parse_decimal(trim(s.substr(0, slash)));
  Rational den = parse_decimal(trim(s.substr(slash + 1)));
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(s) + "'");
  return num / den;
}

std::string to_string(const Rational& q) { return q.str(); }

std::optional<Rational> rationalize(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // Continued-fraction convergents.
  double r = x;
  boost::multiprecision::mpz_int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  const double scale = std::max(1.0, std::abs(x));
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(r);
    boost::multiprecision::mpz_int ai(static_cast<std::int64_t>(a));
    boost::multiprecision::mpz_int p2 = ai * p1 + p0;
    boost::multiprecision::mpz_int q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Rational candidate(p1, q1);
    if (std::abs(to_double(candidate) - x) <= tol * scale) return candidate;
    double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
    if (std::abs(r) > 1e18) break;
  }
  return std::nullopt;
}

Vec<Rational> to_exact(const Vec<double>& v) {
  Vec<Rational> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = exact_from_double(v[i]);
  return out;
}

}  // namespace nilgeo
