#include "shiftlap/scalar.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "shiftlap/error.hpp"

namespace shiftlap {

namespace {

[[noreturn]] void mixed_modes() {
  throw Error(ErrorCode::mode_mismatch, "exact and float64 scalars cannot be mixed");
}

[[noreturn]] void bad_literal(std::string_view text) {
  throw Error(ErrorCode::spec, "malformed number literal '" + std::string(text) + "'");
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// Exact value of a decimal literal such as "-12.5e-3".
mpq_class parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) bad_literal(text);
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      bad_literal(text);
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) bad_literal(text);
    digits = std::string(s);
  }
  mpz_class num(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  mpq_class q = exponent >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

}  // namespace

std::string_view arith_name(Arith a) noexcept {
  return a == Arith::exact ? "rational" : "float64";
}

Arith parse_arith(std::string_view name) {
  if (name == "rational" || name == "exact") return Arith::exact;
  if (name == "float64" || name == "float") return Arith::float64;
  throw Error(ErrorCode::usage, "unknown arithmetic mode '" + std::string(name) + "'");
}

Scalar::Scalar(long n, Arith a) {
  if (a == Arith::exact)
    value_ = mpq_class(n);
  else
    value_ = static_cast<double>(n);
}

Scalar::Scalar(mpq_class q) {
  q.canonicalize();
  value_ = std::move(q);
}

Scalar Scalar::ratio(long num, long den, Arith a) {
  if (den == 0) throw Error(ErrorCode::domain, "zero denominator");
  if (a == Arith::float64) return Scalar(static_cast<double>(num) / static_cast<double>(den));
  return Scalar(mpq_class(num, den));
}

Scalar Scalar::parse(std::string_view text, Arith a) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) bad_literal(text);

  mpq_class q;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+'))
      num_digits.remove_prefix(1);
    if (!all_digits(num_digits) || !all_digits(den)) bad_literal(text);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw Error(ErrorCode::spec, "zero denominator in '" + std::string(text) + "'");
    mpz_class n(std::string(num_digits), 10);
    if (num.front() == '-') n = -n;
    q = mpq_class(n, d);
    q.canonicalize();
    if (a == Arith::float64) return Scalar(n.get_d() / d.get_d());
  } else {
    q = parse_decimal(text);
    if (a == Arith::float64) {
      // Validated above; from_chars rounds correctly where get_d truncates.
      std::string_view digits = text.front() == '+' ? text.substr(1) : text;
      double d = 0;
      std::from_chars(digits.data(), digits.data() + digits.size(), d);
      return Scalar(d);
    }
  }
  if (a == Arith::exact) return Scalar(std::move(q));
  return Scalar(q.get_d());
}

const mpq_class& Scalar::rational() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return *q;
  mixed_modes();
}

double Scalar::to_double() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return q->get_d();
  return std::get<double>(value_);
}

std::string Scalar::str() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return q->get_str(10);
  double d = std::get<double>(value_);
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

bool Scalar::is_zero() const { return sign() == 0; }

int Scalar::sign() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q);
  double d = std::get<double>(value_);
  return (d > 0) - (d < 0);
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

Scalar Scalar::pow(int k) const {
  if (k < 0) return like(1) / pow(-k);
  Scalar result = like(1);
  Scalar base = *this;
  for (unsigned e = static_cast<unsigned>(k); e != 0; e >>= 1) {
    if (e & 1U) result *= base;
    if (e > 1) base *= base;
  }
  return result;
}

Scalar Scalar::operator-() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return Scalar(mpq_class(-*q));
  return Scalar(-std::get<double>(value_));
}

#define SHIFTLAP_SCALAR_OP(op)                                      \
  Scalar& Scalar::operator op##=(const Scalar& o) {                 \
    if (value_.index() != o.value_.index()) mixed_modes();          \
    if (auto* q = std::get_if<mpq_class>(&value_))                  \
      *q op## = std::get<mpq_class>(o.value_);                      \
    else                                                            \
      std::get<double>(value_) op## = std::get<double>(o.value_);   \
    return *this;                                                   \
  }

SHIFTLAP_SCALAR_OP(+)
SHIFTLAP_SCALAR_OP(-)
SHIFTLAP_SCALAR_OP(*)
#undef SHIFTLAP_SCALAR_OP

Scalar& Scalar::operator/=(const Scalar& o) {
  if (value_.index() != o.value_.index()) mixed_modes();
  if (auto* q = std::get_if<mpq_class>(&value_)) {
    const auto& d = std::get<mpq_class>(o.value_);
    if (sgn(d) == 0) throw Error(ErrorCode::domain, "division by zero");
    *q /= d;
  } else {
    std::get<double>(value_) /= std::get<double>(o.value_);
  }
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.value_.index() != b.value_.index()) mixed_modes();
  if (const auto* q = std::get_if<mpq_class>(&a.value_)) return *q == std::get<mpq_class>(b.value_);
  return std::get<double>(a.value_) == std::get<double>(b.value_);
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (a.value_.index() != b.value_.index()) mixed_modes();
  if (const auto* q = std::get_if<mpq_class>(&a.value_)) {
    int c = cmp(*q, std::get<mpq_class>(b.value_));
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return std::get<double>(a.value_) <=> std::get<double>(b.value_);
}

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::level_too_small: return "LevelTooSmall";
    case ErrorCode::level_mismatch: return "LevelMismatch";
    case ErrorCode::level_order: return "LevelOrderError";
    case ErrorCode::resource_limit: return "ResourceLimit";
    case ErrorCode::alphabet_mismatch: return "AlphabetMismatch";
    case ErrorCode::mode_mismatch: return "ModeMismatch";
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::same_point: return "SamePoint";
    case ErrorCode::boundary_mismatch: return "BoundaryMismatch";
    case ErrorCode::arity: return "ArityError";
    case ErrorCode::incompatible: return "Incompatible";
    case ErrorCode::not_integrable: return "NotIntegrable";
    case ErrorCode::spec: return "SpecError";
    case ErrorCode::usage: return "UsageError";
  }
  return "Error";
}

}  // namespace shiftlap
