#pragma once

#include <cmath>

namespace mnlb::detail {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    comp_ += std::fabs(sum_) >= std::fabs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// a*b - c*d without the cancellation of the naive form (Kahan's fma trick).
inline double difference_of_products(double a, double b, double c, double d) noexcept {
  const double cd = c * d;
  const double err = std::fma(-c, d, cd);
  return std::fma(a, b, -cd) + err;
}

}  // namespace mnlb::detail
