#include "mcf/scalar.hpp"

#include <array>
#include <charconv>

#include "mcf/errors.hpp"

namespace mcf {

std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kDomain:
      return "domain";
    case ErrorCategory::kBoundary:
      return "boundary";
    case ErrorCategory::kUnsupported:
      return "unsupported";
    case ErrorCategory::kNumeric:
      return "numeric";
    case ErrorCategory::kUsage:
      return "usage";
    case ErrorCategory::kIo:
      return "io";
  }
  return "unknown";
}

void require_finite(double v, std::string_view context) {
  if (!std::isfinite(v)) {
    throw NumericError("non-finite value in " + std::string(context));
  }
}

std::string format_scalar(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw NumericError("cannot format double");
  return std::string(buf.data(), ptr);
}

std::string format_scalar(const Rational& v) { return v.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw DomainError("empty number");
  try {
    auto dot = s.find('.');
    auto exp = s.find_first_of("eE");
    if (dot == std::string::npos && exp == std::string::npos) {
      Rational q(s, 10);
      if (q.get_den() == 0) throw DomainError("zero denominator in '" + s + "'");
      q.canonicalize();
      return q;
    }
    // Decimal literal: mantissa digits over a power of ten, then the exponent.
    std::string mantissa = exp == std::string::npos ? s : s.substr(0, exp);
    long e10 = exp == std::string::npos ? 0 : std::stol(s.substr(exp + 1));
    bool negative = !mantissa.empty() && mantissa[0] == '-';
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) mantissa.erase(0, 1);
    std::string digits;
    long frac_digits = 0;
    bool after_dot = false;
    for (char c : mantissa) {
      if (c == '.') {
        if (after_dot) throw DomainError("malformed number '" + s + "'");
        after_dot = true;
        continue;
      }
      if (c < '0' || c > '9') throw DomainError("malformed number '" + s + "'");
      digits.push_back(c);
      if (after_dot) ++frac_digits;
    }
    if (digits.empty()) throw DomainError("malformed number '" + s + "'");
    mpz_class num(digits, 10);
    long shift = e10 - frac_digits;
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational q = shift < 0 ? Rational(num, pow10) : Rational(num * pow10);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  } catch (const std::invalid_argument&) {
    throw DomainError("malformed number '" + s + "'");
  } catch (const std::out_of_range&) {
    throw DomainError("number out of range '" + s + "'");
  }
}

}  // namespace mcf
