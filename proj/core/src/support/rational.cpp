#include "visforge/support/rational.hpp"

#include <vector>

namespace visforge::support {

std::string Rational::to_string() const {
  // A reduced fraction terminates in decimal iff den = 2^a * 5^b.
  std::int64_t d = den;
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  if (d != 1) return std::to_string(num) + "/" + std::to_string(den);

  std::int64_t n = num;
  bool neg = n < 0;
  if (neg) n = -n;
  std::int64_t whole = n / den;
  std::int64_t rem = n % den;
  std::string out = (neg ? "-" : "") + std::to_string(whole);
  if (rem == 0) {
    out += ".0";
    return out;
  }
  out.push_back('.');
  while (rem != 0) {
    rem *= 10;
    out += std::to_string(rem / den);
    rem %= den;
  }
  return out;
}

Rational mean_of(const std::vector<int>& values) {
  if (values.empty()) return Rational{0, 1};
  std::int64_t sum = 0;
  for (int v : values) sum += v;
  return Rational::of(sum, static_cast<std::int64_t>(values.size()));
}

}  // namespace visforge::support
