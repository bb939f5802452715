#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ssmc/integer.hpp"

namespace ssmc {

inline constexpr int kMinPrecision = 1;
inline constexpr int kMaxPrecision = 64;

// Value m * 2^-p with an unbounded integer mantissa m and p fractional bits.
class FixedPoint {
 public:
  FixedPoint() = default;
  FixedPoint(Integer mantissa, int frac_bits) : m_(std::move(mantissa)), p_(frac_bits) {
    if (frac_bits < kMinPrecision || frac_bits > kMaxPrecision) bad_precision(frac_bits);
  }

  static FixedPoint from_int(int64_t v, int frac_bits);
  // num/den rounded to the grid, ties to even.
  static FixedPoint from_ratio(const Integer& num, const Integer& den, int frac_bits);
  // Exact decimal literal such as "-1.25"; throws if the value is not on the grid.
  static FixedPoint parse(std::string_view text, int frac_bits);
  static FixedPoint ulp(int frac_bits) { return FixedPoint(Integer(1), frac_bits); }

  const Integer& mantissa() const noexcept { return m_; }
  int frac_bits() const noexcept { return p_; }
  int sign() const noexcept { return m_.sign(); }
  bool is_zero() const noexcept { return m_.is_zero(); }

  std::string to_string() const;  // exact decimal
  double to_double() const;

  friend bool operator==(const FixedPoint& a, const FixedPoint& b) noexcept {
    return a.p_ == b.p_ && a.m_ == b.m_;
  }
  friend std::strong_ordering operator<=>(const FixedPoint& a, const FixedPoint& b);

 private:
  friend void fp_mul_add_into(FixedPoint& h, const FixedPoint& gate, const FixedPoint& inc);
  [[noreturn]] static void bad_precision(int frac_bits);
  Integer m_;
  int p_ = 8;
};

void check_precision(int frac_bits);

FixedPoint fp_add(const FixedPoint& a, const FixedPoint& b);
FixedPoint fp_sub(const FixedPoint& a, const FixedPoint& b);
FixedPoint fp_neg(const FixedPoint& a);
FixedPoint fp_mul(const FixedPoint& a, const FixedPoint& b);
FixedPoint fp_div(const FixedPoint& a, const FixedPoint& b);
FixedPoint fp_sqrt(const FixedPoint& a);
// Logistic function, correctly rounded to the grid.
FixedPoint fp_sigmoid(const FixedPoint& a);

inline FixedPoint operator+(const FixedPoint& a, const FixedPoint& b) { return fp_add(a, b); }
inline FixedPoint operator-(const FixedPoint& a, const FixedPoint& b) { return fp_sub(a, b); }
inline FixedPoint operator-(const FixedPoint& a) { return fp_neg(a); }
inline FixedPoint operator*(const FixedPoint& a, const FixedPoint& b) { return fp_mul(a, b); }
inline FixedPoint operator/(const FixedPoint& a, const FixedPoint& b) { return fp_div(a, b); }

using FixedVector = std::vector<FixedPoint>;

// In-place variants used by the simulation hot loop.
void fp_mul_add_into(FixedPoint& h, const FixedPoint& gate, const FixedPoint& inc);

// RMS normalization: v / sqrt(mean(v^2)), every intermediate rounded.
// Throws std::domain_error when the rounded norm is zero.
FixedVector rms_norm(const FixedVector& v);
void rms_norm_inplace(FixedPoint* first, size_t count);

FixedVector parse_vector(const std::vector<std::string>& items, int frac_bits);
std::string to_string(const FixedVector& v);

}  // namespace ssmc
