#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace ssmc {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary precision integer that stays on an int64 fast path until an
// operation overflows.
class Integer {
 public:
  Integer() noexcept = default;
  Integer(int64_t v) noexcept : small_(v) {}
  explicit Integer(const BigInt& v);
  static Integer from_int128(__int128 v);

  Integer(const Integer& o) : small_(o.small_) {
    if (o.big_) copy_big(o);
  }
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& o) {
    if (this != &o) {
      small_ = o.small_;
      if (o.big_ || big_) copy_big(o);
    }
    return *this;
  }
  Integer& operator=(Integer&&) noexcept = default;

  bool is_small() const noexcept { return !big_; }
  int64_t small_value() const noexcept { return small_; }
  BigInt to_big() const;
  double to_double() const;

  int sign() const noexcept;
  bool is_odd() const noexcept;
  bool is_zero() const noexcept { return !big_ && small_ == 0; }

  Integer operator-() const;
  friend Integer operator+(const Integer& a, const Integer& b) {
    int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_add_overflow(a.small_, b.small_, &r)) return Integer(r);
    return add_slow(a, b);
  }
  friend Integer operator-(const Integer& a, const Integer& b) {
    int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_sub_overflow(a.small_, b.small_, &r)) return Integer(r);
    return sub_slow(a, b);
  }
  friend Integer operator*(const Integer& a, const Integer& b) {
    int64_t r;
    if (!a.big_ && !b.big_ && !__builtin_mul_overflow(a.small_, b.small_, &r)) return Integer(r);
    return mul_slow(a, b);
  }
  Integer& operator+=(const Integer& o) { return *this = *this + o; }
  Integer& operator-=(const Integer& o) { return *this = *this - o; }

  Integer shl(unsigned bits) const;

  friend bool operator==(const Integer& a, const Integer& b) noexcept {
    if (!a.big_ && !b.big_) return a.small_ == b.small_;
    return eq_slow(a, b);
  }
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) noexcept {
    if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
    return cmp_slow(a, b);
  }

  std::string to_string() const;
  static Integer parse(std::string_view s);

 private:
  void normalize();
  void copy_big(const Integer& o);
  static Integer add_slow(const Integer& a, const Integer& b);
  static Integer sub_slow(const Integer& a, const Integer& b);
  static Integer mul_slow(const Integer& a, const Integer& b);
  static bool eq_slow(const Integer& a, const Integer& b) noexcept;
  static std::strong_ordering cmp_slow(const Integer& a, const Integer& b) noexcept;
  int64_t small_ = 0;
  std::unique_ptr<BigInt> big_;
};

// v / 2^s rounded to nearest, ties to even.
Integer round_shift_right(const Integer& v, unsigned s);
// n / d rounded to nearest, ties to even. Throws on d == 0.
Integer div_round_even(const Integer& n, const Integer& d);
// floor(sqrt(n)) for n >= 0.
Integer isqrt_floor(const Integer& n);
// sqrt(n) rounded to nearest integer (ties cannot occur).
Integer isqrt_round(const Integer& n);

}  // namespace ssmc
