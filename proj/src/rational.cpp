#include "brlab/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>

#include "brlab/errors.hpp"

namespace brlab {
namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError("rational", "cannot parse '" + std::string(whole) + "' as a/b");
  }
  return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr auto lo = std::numeric_limits<std::int64_t>::min();
  constexpr auto hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) throw OverflowError("rational arithmetic overflow");
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text, text));
  const auto den = parse_int(text.substr(slash + 1), text);
  if (den == 0) throw ValidationError("rational", "zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash), text), den);
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return from_wide(-static_cast<__int128>(num_), den_); }

Rational Rational::reciprocal() const {
  if (num_ == 0) throw DomainError("reciprocal of zero");
  return from_wide(den_, num_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) { return a * b.reciprocal(); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

// ---------------------------------------------------------------------------

Exponent::Exponent(const Rational& p) {
  if (p.sign() <= 0) throw DomainError("Lebesgue exponent must be positive, got " + p.str());
  inv_ = p.reciprocal();
}

Exponent Exponent::from_reciprocal(const Rational& inv) {
  if (inv.sign() < 0) throw DomainError("negative reciprocal exponent " + inv.str());
  return Exponent(inv, Tag{});
}

Exponent Exponent::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "∞") return infinity();
  return Exponent(Rational::parse(text));
}

Rational Exponent::value() const {
  if (is_infinite()) throw DomainError("exponent is infinite");
  return inv_.reciprocal();
}

double Exponent::to_double() const noexcept {
  return is_infinite() ? std::numeric_limits<double>::infinity() : 1.0 / inv_.to_double();
}

std::string Exponent::str() const { return is_infinite() ? "inf" : value().str(); }

ExponentPair::ExponentPair(Exponent p1, Exponent p2) : p1_(p1), p2_(p2) {
  const Rational one(1);
  if (p1_.reciprocal() > one) throw DomainError("p1 = " + p1_.str() + " is below 1");
  if (p2_.reciprocal() > one) throw DomainError("p2 = " + p2_.str() + " is below 1");
}

}  // namespace brlab
