#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace brlab {

/// Exact rational number with 64-bit numerator and denominator, always kept
/// in lowest terms with a positive denominator. Arithmetic that would leave
/// the 64-bit range throws OverflowError.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Parses "a/b" or "a" (optional leading sign). Decimal points and
  /// exponents are rejected so exponent contracts stay exact.
  static Rational parse(std::string_view text);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }
  int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

  Rational operator-() const;
  Rational reciprocal() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// A Lebesgue exponent p in (0, ∞], stored through its reciprocal so that
/// p = ∞ is the exact value 1/p = 0.
class Exponent {
 public:
  /// p from a rational; p ≤ 0 throws DomainError.
  Exponent(const Rational& p);  // NOLINT(google-explicit-constructor)
  Exponent(std::int64_t p) : Exponent(Rational(p)) {}  // NOLINT

  static Exponent infinity() { return Exponent(Rational(0), Tag{}); }
  static Exponent from_reciprocal(const Rational& inv);
  /// "a/b", "a", "inf" or "∞".
  static Exponent parse(std::string_view text);

  bool is_infinite() const noexcept { return inv_.is_zero(); }
  const Rational& reciprocal() const noexcept { return inv_; }
  /// The finite value of p; throws DomainError for p = ∞.
  Rational value() const;
  double to_double() const noexcept;
  std::string str() const;

  friend bool operator==(const Exponent& a, const Exponent& b) noexcept = default;

 private:
  struct Tag {};
  Exponent(Rational inv, Tag) : inv_(inv) {}
  Rational inv_{1};
};

/// (p1, p2) with the target exponent p fixed by 1/p = 1/p1 + 1/p2.
class ExponentPair {
 public:
  /// Requires p1, p2 ∈ [1, ∞]; otherwise DomainError.
  ExponentPair(Exponent p1, Exponent p2);

  const Exponent& p1() const noexcept { return p1_; }
  const Exponent& p2() const noexcept { return p2_; }
  Exponent p() const { return Exponent::from_reciprocal(p1_.reciprocal() + p2_.reciprocal()); }
  ExponentPair swapped() const { return {p2_, p1_}; }

  friend bool operator==(const ExponentPair& a, const ExponentPair& b) noexcept = default;

 private:
  Exponent p1_;
  Exponent p2_;
};

}  // namespace brlab
