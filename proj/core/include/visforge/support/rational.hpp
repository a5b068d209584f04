#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace visforge::support {

/// Exact rational on int64, always kept reduced with positive denominator.
/// Scorecard means are tiny (sum of 1..5 scores over a handful of criteria),
/// so overflow is not a practical concern.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational of(std::int64_t n, std::int64_t d = 1) {
    Rational r{n, d};
    r.reduce();
    return r;
  }

  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  bool operator==(const Rational& o) const {
    return num == o.num && den == o.den;
  }

  double to_double() const { return static_cast<double>(num) / den; }

  /// Exact decimal when the expansion terminates, else "num/den".
  std::string to_string() const;
};

Rational mean_of(const std::vector<int>& values);

}  // namespace visforge::support
