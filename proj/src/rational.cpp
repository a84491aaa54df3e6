#include "medimax/rational.hpp"

namespace medimax {

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (text.empty() || slash == 0 || slash == text.size() - 1) {
    throw std::invalid_argument("malformed rational: " + text);
  }
  try {
    if (slash == std::string::npos) {
      return Rational(Int(text));
    }
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0) {
      throw std::invalid_argument("zero denominator in rational: " + text);
    }
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("malformed rational: " + text);
  }
}

std::string format_rational(const Rational& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

Rational rational_pow(const Rational& value, long exponent) {
  if (exponent == 0) {
    return Rational(1);
  }
  if (exponent < 0) {
    if (value == 0) {
      throw std::domain_error("negative power of zero");
    }
    return rational_pow(Rational(1) / value, -exponent);
  }
  Rational result(1);
  Rational base = value;
  unsigned long e = static_cast<unsigned long>(exponent);
  while (e > 0) {
    if (e & 1UL) {
      result *= base;
    }
    base *= base;
    e >>= 1UL;
  }
  return result;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) {
    throw std::domain_error("cannot convert non-finite double to rational");
  }
  return Rational(value);
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) {
    --q;
  }
  return q;
}

Int floor_rational(const Rational& value) {
  return floor_div(numerator(value), denominator(value));
}

Int ceil_rational(const Rational& value) {
  return -floor_div(-numerator(value), denominator(value));
}

}  // namespace medimax
