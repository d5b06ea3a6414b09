#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace splinedict {

/// Exact dyadic rational numerator / 2^log2_denominator.
///
/// Always kept in normal form: the numerator is odd unless the exponent is 0.
/// Knots and translations of every atom are dyadic, so all breakpoint
/// arithmetic stays exact.
class Dyadic {
public:
  constexpr Dyadic() = default;
  constexpr Dyadic(std::int64_t integer) : num_(integer), exp_(0) {}  // NOLINT(implicit)
  Dyadic(std::int64_t numerator, int log2_denominator);

  std::int64_t numerator() const { return num_; }
  int log2_denominator() const { return exp_; }

  double to_double() const;
  bool is_integer() const { return exp_ == 0; }

  /// value * 2^e as an integer; throws std::domain_error if not integral.
  std::int64_t scaled_to_integer(int e) const;
  /// value * 2^e (e may be negative).
  Dyadic scaled(int e) const;

  std::int64_t floor() const;
  std::int64_t ceil() const;

  /// "num/2^e", e.g. "-13/2^2".
  std::string to_string() const;
  static Dyadic parse(const std::string& text);

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  Dyadic operator-() const { return Dyadic(-num_, exp_); }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.num_ == b.num_ && a.exp_ == b.exp_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

private:
  void normalize();

  std::int64_t num_ = 0;
  int exp_ = 0;
};

}  // namespace splinedict
