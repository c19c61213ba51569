#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>

#include "mdgs/error.hpp"

namespace mdgs {

/// Extended real: a finite double, +inf or -inf.
///
/// Messages pinned to +inf mean "this edge may never be a dimer". Subtraction
/// saturates (w - (+inf) = -inf) and no operation produces NaN; the one
/// undefined case, (+inf) + (-inf), throws.
class ExtReal {
 public:
  enum class Kind : std::uint8_t { finite, pos_inf, neg_inf };

  constexpr ExtReal() = default;
  constexpr ExtReal(double v)  // NOLINT(google-explicit-constructor)
      : kind_(v == std::numeric_limits<double>::infinity()    ? Kind::pos_inf
              : v == -std::numeric_limits<double>::infinity() ? Kind::neg_inf
                                                              : Kind::finite),
        value_(kind_ == Kind::finite ? v : 0.0) {}

  static constexpr ExtReal pos_inf() { return ExtReal(Kind::pos_inf); }
  static constexpr ExtReal neg_inf() { return ExtReal(Kind::neg_inf); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::finite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

  /// IEEE view; infinite kinds map to +-infinity.
  constexpr double to_double() const {
    switch (kind_) {
      case Kind::pos_inf: return std::numeric_limits<double>::infinity();
      case Kind::neg_inf: return -std::numeric_limits<double>::infinity();
      case Kind::finite: break;
    }
    return value_;
  }

  /// Finite value; throws on infinite kinds.
  double value() const {
    if (!is_finite()) throw Error(ErrorKind::domain, "ExtReal::value on an infinite value");
    return value_;
  }

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.kind_ == b.kind_ && a.value_ == b.value_;
  }

  friend constexpr std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (a.kind_ == b.kind_) {
      if (a.kind_ != Kind::finite) return std::partial_ordering::equivalent;
      return a.value_ <=> b.value_;
    }
    return rank(a.kind_) <=> rank(b.kind_);
  }

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    if (a.is_finite() && b.is_finite()) return ExtReal(a.value_ + b.value_);
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
      throw Error(ErrorKind::domain, "ExtReal: (+inf) + (-inf) is undefined");
    return (a.is_pos_inf() || b.is_pos_inf()) ? pos_inf() : neg_inf();
  }

  ExtReal operator-() const {
    switch (kind_) {
      case Kind::pos_inf: return neg_inf();
      case Kind::neg_inf: return pos_inf();
      case Kind::finite: break;
    }
    return ExtReal(-value_);
  }

  /// Saturating subtraction.
  friend ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }

 private:
  constexpr explicit ExtReal(Kind k) : kind_(k) {}

  static constexpr int rank(Kind k) {
    return k == Kind::neg_inf ? 0 : k == Kind::finite ? 1 : 2;
  }

  Kind kind_ = Kind::finite;
  double value_ = 0.0;
};

inline ExtReal max(const ExtReal& a, const ExtReal& b) { return (a < b) ? b : a; }
inline ExtReal min(const ExtReal& a, const ExtReal& b) { return (b < a) ? b : a; }

/// |a - b| with infinite operands: 0 when both are the same infinity, +inf
/// when exactly one is infinite.
inline double abs_diff(const ExtReal& a, const ExtReal& b) {
  if (a.is_finite() && b.is_finite()) return std::abs(a.value() - b.value());
  if (a.kind() == b.kind()) return 0.0;
  return std::numeric_limits<double>::infinity();
}

inline std::ostream& operator<<(std::ostream& os, const ExtReal& v) {
  if (v.is_pos_inf()) return os << "+inf";
  if (v.is_neg_inf()) return os << "-inf";
  return os << v.value();
}

}  // namespace mdgs
