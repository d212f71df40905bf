#pragma once

#include <compare>
#include <concepts>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace shiftlap {

/// Arithmetic mode of a computation. A run picks one and never mixes them.
enum class Arith { exact, float64 };

std::string_view arith_name(Arith a) noexcept;
Arith parse_arith(std::string_view name);

/// A number that is either an exact reduced rational or a binary64 double.
///
/// Binary operations between two Scalars require the same mode and throw
/// `ErrorCode::mode_mismatch` otherwise. Integer operands adopt the mode of
/// the Scalar they are combined with, so `s * 2` or `s >= 1` just work.
class Scalar {
 public:
  Scalar() : value_(mpq_class(0)) {}
  Scalar(long n, Arith a);
  explicit Scalar(mpq_class q);
  explicit Scalar(double d) : value_(d) {}

  static Scalar ratio(long num, long den, Arith a);
  static Scalar zero(Arith a) { return Scalar(0L, a); }
  static Scalar one(Arith a) { return Scalar(1L, a); }

  /// Parses "p/q", an integer, or a decimal literal ("0.25", "-1e-3").
  /// Decimals are converted exactly in exact mode.
  static Scalar parse(std::string_view text, Arith a);

  Arith arith() const noexcept {
    return value_.index() == 0 ? Arith::exact : Arith::float64;
  }
  bool is_exact() const noexcept { return value_.index() == 0; }

  /// The exact value; throws mode_mismatch in float mode.
  const mpq_class& rational() const;
  double to_double() const;

  /// Same-mode constant.
  Scalar like(long n) const { return Scalar(n, arith()); }
  Scalar like_ratio(long num, long den) const { return ratio(num, den, arith()); }

  /// "p/q" (or "p" for integers) in exact mode; shortest round-trip decimal
  /// in float mode.
  std::string str() const;

  bool is_zero() const;
  int sign() const;
  Scalar abs() const;
  /// this^k for integer k (k may be negative for nonzero values).
  Scalar pow(int k) const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  template <std::integral I>
  friend Scalar operator+(Scalar a, I b) { return a += a.like(static_cast<long>(b)); }
  template <std::integral I>
  friend Scalar operator-(Scalar a, I b) { return a -= a.like(static_cast<long>(b)); }
  template <std::integral I>
  friend Scalar operator*(Scalar a, I b) { return a *= a.like(static_cast<long>(b)); }
  template <std::integral I>
  friend Scalar operator/(Scalar a, I b) { return a /= a.like(static_cast<long>(b)); }
  template <std::integral I>
  friend Scalar operator*(I b, Scalar a) { return a *= a.like(static_cast<long>(b)); }

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

  template <std::integral I>
  friend bool operator==(const Scalar& a, I b) { return a == a.like(static_cast<long>(b)); }
  template <std::integral I>
  friend std::partial_ordering operator<=>(const Scalar& a, I b) {
    return a <=> a.like(static_cast<long>(b));
  }

 private:
  std::variant<mpq_class, double> value_;
};

inline Scalar max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }
inline Scalar min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }

}  // namespace shiftlap
