#include "ssmc/integer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssmc {

namespace {

BigInt big_from_int128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt r = static_cast<uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<uint64_t>(u);
  return neg ? BigInt(-r) : r;
}

bool fits_int64(__int128 v) {
  return v >= INT64_MIN && v <= INT64_MAX;
}

}  // namespace

Integer::Integer(const BigInt& v) : big_(std::make_unique<BigInt>(v)) { normalize(); }

Integer Integer::from_int128(__int128 v) {
  if (fits_int64(v)) return Integer(static_cast<int64_t>(v));
  return Integer(big_from_int128(v));
}

void Integer::copy_big(const Integer& o) {
  if (o.big_) {
    if (big_) *big_ = *o.big_;
    else big_ = std::make_unique<BigInt>(*o.big_);
  } else {
    big_.reset();
  }
}

void Integer::normalize() {
  if (big_ && *big_ >= INT64_MIN && *big_ <= INT64_MAX) {
    small_ = static_cast<int64_t>(*big_);
    big_.reset();
  }
}

BigInt Integer::to_big() const { return big_ ? *big_ : BigInt(small_); }

double Integer::to_double() const {
  return big_ ? big_->convert_to<double>() : static_cast<double>(small_);
}

int Integer::sign() const noexcept {
  if (big_) return big_->sign();
  return (small_ > 0) - (small_ < 0);
}

bool Integer::is_odd() const noexcept {
  if (big_) return bit_test(*big_, 0);
  return (small_ & 1) != 0;
}

Integer Integer::operator-() const {
  if (!big_ && small_ != INT64_MIN) return Integer(-small_);
  return Integer(BigInt(-to_big()));
}

Integer Integer::add_slow(const Integer& a, const Integer& b) {
  return Integer(BigInt(a.to_big() + b.to_big()));
}

Integer Integer::sub_slow(const Integer& a, const Integer& b) {
  return Integer(BigInt(a.to_big() - b.to_big()));
}

Integer Integer::mul_slow(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_)
    return Integer::from_int128(static_cast<__int128>(a.small_) * b.small_);
  return Integer(BigInt(a.to_big() * b.to_big()));
}

Integer Integer::shl(unsigned bits) const {
  if (!big_ && bits < 63) {
    __int128 v = static_cast<__int128>(small_) << bits;
    return from_int128(v);
  }
  return Integer(BigInt(to_big() << bits));
}

bool Integer::eq_slow(const Integer& a, const Integer& b) noexcept {
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // normalized: a big value never fits int64
}

std::strong_ordering Integer::cmp_slow(const Integer& a, const Integer& b) noexcept {
  int c = a.to_big().compare(b.to_big());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string Integer::to_string() const {
  return big_ ? big_->str() : std::to_string(small_);
}

Integer Integer::parse(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("malformed integer literal");
  for (size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9') throw std::invalid_argument("malformed integer literal: " + std::string(s));
  bool neg = s[0] == '-';
  std::string digits(s.substr(i));
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));  // not octal
  BigInt v(digits);
  return Integer(BigInt(neg ? -v : v));
}

Integer round_shift_right(const Integer& v, unsigned s) {
  if (s == 0) return v;
  if (v.is_small() && s < 63) {
    int64_t x = v.small_value();
    int64_t q = x >> s;
    int64_t r = x - (q << s);
    int64_t half = int64_t{1} << (s - 1);
    if (r > half || (r == half && (q & 1))) ++q;
    return Integer(q);
  }
  BigInt x = v.to_big();
  BigInt q = x >> s;  // floor for negative values too
  BigInt r = x - (q << s);
  BigInt half = BigInt(1) << (s - 1);
  if (r > half || (r == half && bit_test(q, 0))) ++q;
  return Integer(q);
}

Integer div_round_even(const Integer& n, const Integer& d) {
  if (d.is_zero()) throw std::domain_error("division by zero");
  if (n.is_small() && d.is_small() && d.small_value() != -1) {
    int64_t a = n.small_value(), b = d.small_value();
    int64_t q = a / b, r = a % b;
    // q truncates toward zero; |r| < |b|
    uint64_t ar = r < 0 ? -static_cast<uint64_t>(r) : static_cast<uint64_t>(r);
    uint64_t ab = b < 0 ? -static_cast<uint64_t>(b) : static_cast<uint64_t>(b);
    if (ar != 0) {
      int dir = ((a < 0) != (b < 0)) ? -1 : 1;
      if (2 * ar > ab || (2 * ar == ab && (q & 1))) q += dir;
    }
    return Integer(q);
  }
  BigInt a = n.to_big(), b = d.to_big();
  BigInt aa = abs(a), ab = abs(b);
  BigInt q = aa / ab, r = aa % ab;
  if (2 * r > ab || (2 * r == ab && bit_test(q, 0))) ++q;
  if (a.sign() * b.sign() < 0) q = -q;
  return Integer(q);
}

Integer isqrt_floor(const Integer& n) {
  if (n.sign() < 0) throw std::domain_error("square root of negative value");
  if (n.is_small()) {
    uint64_t v = static_cast<uint64_t>(n.small_value());
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<long double>(v)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > v) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= v) ++r;
    return Integer(static_cast<int64_t>(r));
  }
  return Integer(BigInt(boost::multiprecision::sqrt(n.to_big())));
}

Integer isqrt_round(const Integer& n) {
  Integer r = isqrt_floor(n);
  // sqrt(n) >= r + 1/2  <=>  n >= r^2 + r + 1/4  <=>  n - r^2 > r
  if (n - r * r > r) return r + Integer(1);
  return r;
}

}  // namespace ssmc
