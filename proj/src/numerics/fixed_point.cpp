#include "ssmc/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace ssmc {

namespace {

void check_same(const FixedPoint& a, const FixedPoint& b) {
  if (a.frac_bits() != b.frac_bits())
    throw std::invalid_argument("fixed-point precision mismatch: " + std::to_string(a.frac_bits()) +
                                " vs " + std::to_string(b.frac_bits()));
}

Integer mul_mantissa(const Integer& a, const Integer& b, int p) {
  if (a.is_small() && b.is_small()) {
    __int128 prod = static_cast<__int128>(a.small_value()) * b.small_value();
    if (p < 127) {
      __int128 q = prod >> p;
      __int128 r = prod - (q << p);
      __int128 half = static_cast<__int128>(1) << (p - 1);
      if (r > half || (r == half && (q & 1))) ++q;
      return Integer::from_int128(q);
    }
  }
  return round_shift_right(a * b, static_cast<unsigned>(p));
}

}  // namespace

void check_precision(int frac_bits) {
  if (frac_bits < kMinPrecision || frac_bits > kMaxPrecision)
    throw std::invalid_argument("precision must be in [1, 64], got " + std::to_string(frac_bits));
}

void FixedPoint::bad_precision(int frac_bits) {
  check_precision(frac_bits);
  throw std::logic_error("unreachable");
}

FixedPoint FixedPoint::from_int(int64_t v, int frac_bits) {
  return FixedPoint(Integer(v).shl(static_cast<unsigned>(frac_bits)), frac_bits);
}

FixedPoint FixedPoint::from_ratio(const Integer& num, const Integer& den, int frac_bits) {
  check_precision(frac_bits);
  return FixedPoint(div_round_even(num.shl(static_cast<unsigned>(frac_bits)), den), frac_bits);
}

FixedPoint FixedPoint::parse(std::string_view text, int frac_bits) {
  check_precision(frac_bits);
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty fixed-point literal");
  bool neg = false;
  size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  std::string digits;
  int frac_digits = -1;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (frac_digits >= 0) throw std::invalid_argument("malformed fixed-point literal: " + s);
      frac_digits = 0;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (frac_digits >= 0) ++frac_digits;
    } else {
      throw std::invalid_argument("malformed fixed-point literal: " + s);
    }
  }
  if (digits.empty()) throw std::invalid_argument("malformed fixed-point literal: " + s);
  if (frac_digits < 0) frac_digits = 0;
  // a leading zero would make boost read the digits as octal
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  BigInt n(digits);
  BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac_digits));
  BigInt scaled = n << frac_bits;
  if (scaled % den != 0)
    throw std::invalid_argument("literal " + s + " is not representable with " +
                                std::to_string(frac_bits) + " fractional bits");
  BigInt m = scaled / den;
  if (neg) m = -m;
  return FixedPoint(Integer(m), frac_bits);
}

std::string FixedPoint::to_string() const {
  BigInt m = m_.to_big();
  bool neg = m < 0;
  if (neg) m = -m;
  BigInt ip = m >> p_;
  BigInt fp = m - (ip << p_);
  std::string out = (neg ? "-" : "") + ip.str();
  if (fp != 0) {
    // fp / 2^p == fp * 5^p / 10^p
    BigInt dec = fp * boost::multiprecision::pow(BigInt(5), static_cast<unsigned>(p_));
    std::string frac = dec.str();
    frac = std::string(static_cast<size_t>(p_) - frac.size(), '0') + frac;
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    out += "." + frac;
  }
  return out;
}

double FixedPoint::to_double() const { return std::ldexp(m_.to_double(), -p_); }

std::strong_ordering operator<=>(const FixedPoint& a, const FixedPoint& b) {
  check_same(a, b);
  return a.m_ <=> b.m_;
}

FixedPoint fp_add(const FixedPoint& a, const FixedPoint& b) {
  check_same(a, b);
  return FixedPoint(a.mantissa() + b.mantissa(), a.frac_bits());
}

FixedPoint fp_sub(const FixedPoint& a, const FixedPoint& b) {
  check_same(a, b);
  return FixedPoint(a.mantissa() - b.mantissa(), a.frac_bits());
}

FixedPoint fp_neg(const FixedPoint& a) { return FixedPoint(-a.mantissa(), a.frac_bits()); }

FixedPoint fp_mul(const FixedPoint& a, const FixedPoint& b) {
  check_same(a, b);
  return FixedPoint(mul_mantissa(a.mantissa(), b.mantissa(), a.frac_bits()), a.frac_bits());
}

void fp_mul_add_into(FixedPoint& h, const FixedPoint& gate, const FixedPoint& inc) {
  int p = h.p_;
  if (gate.p_ == p && inc.p_ == p && h.m_.is_small() && gate.m_.is_small() && inc.m_.is_small() && p < 63) {
    __int128 prod = static_cast<__int128>(gate.m_.small_value()) * h.m_.small_value();
    __int128 q = prod >> p;
    __int128 r = prod - (q << p);
    __int128 half = static_cast<__int128>(1) << (p - 1);
    if (r > half || (r == half && (q & 1))) ++q;
    q += inc.m_.small_value();
    if (q >= INT64_MIN && q <= INT64_MAX) {
      h.m_ = Integer(static_cast<int64_t>(q));
      return;
    }
  }
  h = fp_add(fp_mul(gate, h), inc);
}

FixedPoint fp_div(const FixedPoint& a, const FixedPoint& b) {
  check_same(a, b);
  if (b.is_zero()) throw std::domain_error("fixed-point division by zero");
  int p = a.frac_bits();
  const Integer& x = a.mantissa();
  const Integer& y = b.mantissa();
  if (x.is_small() && y.is_small() && p < 63) {
    __int128 n = static_cast<__int128>(x.small_value()) << p;
    __int128 d = y.small_value();
    __int128 q = n / d, r = n % d;
    if (r != 0) {
      __int128 ar = r < 0 ? -r : r, ad = d < 0 ? -d : d;
      int dir = ((n < 0) != (d < 0)) ? -1 : 1;
      if (2 * ar > ad || (2 * ar == ad && (q & 1))) q += dir;
    }
    return FixedPoint(Integer::from_int128(q), p);
  }
  return FixedPoint(div_round_even(x.shl(static_cast<unsigned>(p)), y), p);
}

FixedPoint fp_sqrt(const FixedPoint& a) {
  if (a.sign() < 0) throw std::domain_error("square root of negative fixed-point value");
  int p = a.frac_bits();
  return FixedPoint(isqrt_round(a.mantissa().shl(static_cast<unsigned>(p))), p);
}

FixedPoint fp_sigmoid(const FixedPoint& a) {
  using Float = boost::multiprecision::cpp_bin_float_100;
  int p = a.frac_bits();
  Float x = Float(a.mantissa().to_big()) / boost::multiprecision::pow(Float(2), p);
  Float s = Float(1) / (Float(1) + boost::multiprecision::exp(-x));
  Float scaled = s * boost::multiprecision::pow(Float(2), p);
  Float fl = boost::multiprecision::floor(scaled);
  Float frac = scaled - fl;
  BigInt m = fl.convert_to<BigInt>();
  if (frac > Float(0.5) || (frac == Float(0.5) && bit_test(m, 0))) ++m;
  return FixedPoint(Integer(m), p);
}

void rms_norm_inplace(FixedPoint* v, size_t d) {
  if (d == 0) throw std::invalid_argument("rms_norm of empty vector");
  int p = v[0].frac_bits();
  Integer sum(0);
  for (size_t i = 0; i < d; ++i) {
    if (v[i].frac_bits() != p) throw std::invalid_argument("fixed-point precision mismatch in rms_norm");
    sum += fp_mul(v[i], v[i]).mantissa();
  }
  FixedPoint mean(div_round_even(sum, Integer(static_cast<int64_t>(d))), p);
  FixedPoint rms = fp_sqrt(mean);
  if (rms.is_zero()) throw std::domain_error("rms_norm: norm rounds to zero");
  for (size_t i = 0; i < d; ++i) v[i] = fp_div(v[i], rms);
}

FixedVector rms_norm(const FixedVector& v) {
  FixedVector out = v;
  rms_norm_inplace(out.data(), out.size());
  return out;
}

FixedVector parse_vector(const std::vector<std::string>& items, int frac_bits) {
  FixedVector out;
  out.reserve(items.size());
  for (const auto& s : items) out.push_back(FixedPoint::parse(s, frac_bits));
  return out;
}

std::string to_string(const FixedVector& v) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].to_string();
  os << ']';
  return os.str();
}

}  // namespace ssmc
