#include "ssmc/rotation.hpp"

#include <numeric>
#include <stdexcept>

namespace ssmc {

UnitRotation::UnitRotation(uint64_t num, uint64_t den) {
  if (den == 0) throw std::invalid_argument("rotation denominator must be positive");
  num %= den;
  uint64_t g = std::gcd(num, den);
  if (g == 0) g = den;
  a_ = num / g;
  b_ = den / g;
  if (a_ == 0) b_ = 1;
}

UnitRotation UnitRotation::parse(std::string_view text) {
  auto slash = text.find('/');
  std::string s(text);
  try {
    if (slash == std::string_view::npos) return UnitRotation(std::stoull(s), 1);
    return UnitRotation(std::stoull(s.substr(0, slash)), std::stoull(s.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("malformed rotation literal: " + s);
  }
}

std::string UnitRotation::to_string() const { return std::to_string(a_) + "/" + std::to_string(b_); }

UnitRotation rot_mul(const UnitRotation& x, const UnitRotation& y) {
  if (x.is_identity()) return y;
  if (y.is_identity()) return x;
  if (x.den() == y.den()) {
    uint64_t a = x.num() + y.num();
    if (a >= x.den()) a -= x.den();
    return UnitRotation(a, x.den());
  }
  unsigned __int128 g = std::gcd(x.den(), y.den());
  unsigned __int128 l = static_cast<unsigned __int128>(x.den()) / g * y.den();
  unsigned __int128 a = static_cast<unsigned __int128>(x.num()) * (l / x.den()) +
                        static_cast<unsigned __int128>(y.num()) * (l / y.den());
  a %= l;
  unsigned __int128 u = a, v = l;
  while (v != 0) {
    unsigned __int128 t = u % v;
    u = v;
    v = t;
  }
  unsigned __int128 na = a / u, nb = l / u;
  if (nb > UINT64_MAX) throw std::overflow_error("rotation denominator overflow");
  return UnitRotation(static_cast<uint64_t>(na), static_cast<uint64_t>(nb));
}

UnitRotation rot_pow(const UnitRotation& x, uint64_t n) {
  unsigned __int128 a = static_cast<unsigned __int128>(x.num()) * n % x.den();
  return UnitRotation(static_cast<uint64_t>(a), x.den());
}

}  // namespace ssmc
