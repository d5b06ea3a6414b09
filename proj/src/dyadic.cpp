#include "splinedict/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace splinedict {

namespace {

constexpr int kMaxExponent = 60;

std::int64_t shift_left_checked(std::int64_t v, int s) {
  if (s == 0 || v == 0) return v;
  if (s >= 63) throw std::overflow_error("Dyadic: shift overflow");
  const std::int64_t limit = INT64_MAX >> s;
  if (v > limit || v < -limit) throw std::overflow_error("Dyadic: shift overflow");
  return v * (std::int64_t{1} << s);
}

}  // namespace

Dyadic::Dyadic(std::int64_t numerator, int log2_denominator)
    : num_(numerator), exp_(log2_denominator) {
  if (exp_ < 0) {
    num_ = shift_left_checked(num_, -exp_);
    exp_ = 0;
  }
  normalize();
}

void Dyadic::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while (exp_ > 0 && (num_ % 2) == 0) {
    num_ /= 2;
    --exp_;
  }
  if (exp_ > kMaxExponent) throw std::overflow_error("Dyadic: denominator too large");
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(num_), -exp_); }

std::int64_t Dyadic::scaled_to_integer(int e) const {
  if (e >= exp_) return shift_left_checked(num_, e - exp_);
  throw std::domain_error("Dyadic " + to_string() + " is not a multiple of 2^-" +
                          std::to_string(e));
}

Dyadic Dyadic::scaled(int e) const { return Dyadic(num_, exp_ - e); }

std::int64_t Dyadic::floor() const {
  if (exp_ == 0) return num_;
  // Arithmetic shift rounds toward -inf for two's complement.
  return num_ >> exp_;
}

std::int64_t Dyadic::ceil() const {
  if (exp_ == 0) return num_;
  return floor() + 1;
}

std::string Dyadic::to_string() const {
  return std::to_string(num_) + "/2^" + std::to_string(exp_);
}

Dyadic Dyadic::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Dyadic(std::stoll(text));
    const std::string den = text.substr(slash + 1);
    if (den.rfind("2^", 0) != 0) throw std::invalid_argument("bad denominator");
    return Dyadic(std::stoll(text.substr(0, slash)), std::stoi(den.substr(2)));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("Dyadic::parse: malformed '" + text + "'");
  }
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  const int e = std::max(a.exp_, b.exp_);
  return Dyadic(shift_left_checked(a.num_, e - a.exp_) + shift_left_checked(b.num_, e - b.exp_), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const int e = std::max(a.exp_, b.exp_);
  return shift_left_checked(a.num_, e - a.exp_) <=> shift_left_checked(b.num_, e - b.exp_);
}

}  // namespace splinedict
