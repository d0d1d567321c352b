#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "iaf/error.hpp"

namespace iaf {

/// Exact fraction with a positive denominator, always kept in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw DomainError("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& l, const Rational& r) {
    __extension__ using wide = __int128;
    return static_cast<wide>(l.num_) * r.den_ < static_cast<wide>(r.num_) * l.den_;
  }
  friend bool operator>(const Rational& l, const Rational& r) { return r < l; }
  friend bool operator<=(const Rational& l, const Rational& r) { return !(r < l); }
  friend bool operator>=(const Rational& l, const Rational& r) { return !(l < r); }

  friend Rational operator-(const Rational& l, const Rational& r) {
    return Rational(l.num_ * r.den_ - r.num_ * l.den_, l.den_ * r.den_);
  }
  friend Rational operator+(const Rational& l, const Rational& r) {
    return Rational(l.num_ * r.den_ + r.num_ * l.den_, l.den_ * r.den_);
  }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace iaf
