#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ssmc {

// exp(2*pi*i*a/b) kept as the exact angle a/b in lowest terms, 0 <= a < b.
class UnitRotation {
 public:
  UnitRotation() = default;
  UnitRotation(uint64_t num, uint64_t den);

  static UnitRotation identity() { return {}; }
  static UnitRotation parse(std::string_view text);

  uint64_t num() const noexcept { return a_; }
  uint64_t den() const noexcept { return b_; }
  bool is_identity() const noexcept { return a_ == 0; }
  // True when the rotation equals -1 or +1, i.e. a real gate value.
  bool is_real() const noexcept { return b_ <= 2; }

  std::string to_string() const;

  friend bool operator==(const UnitRotation&, const UnitRotation&) = default;

 private:
  uint64_t a_ = 0;
  uint64_t b_ = 1;
};

UnitRotation rot_mul(const UnitRotation& x, const UnitRotation& y);
UnitRotation rot_pow(const UnitRotation& x, uint64_t n);

}  // namespace ssmc
