#pragma once

#include <cstdint>

namespace polarity {

enum class Method { Exact, MonteCarlo };

const char* method_name(Method m);

// A nonnegative numeric result with the method that produced it. Monte Carlo errors are
// 3-sigma; exact results carry abs_error == 0.
struct Estimate {
  double value = 0.0;
  double abs_error = 0.0;
  Method method = Method::Exact;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  static Estimate exact(double v) { return Estimate{v, 0.0, Method::Exact, 0, 0}; }
  bool is_exact() const { return method == Method::Exact; }
};

using VolumeEstimate = Estimate;
using MeasureEstimate = Estimate;

// First-order error propagation. The result is exact only when every input is.
Estimate operator*(const Estimate& a, const Estimate& b);
Estimate operator+(const Estimate& a, const Estimate& b);
Estimate scaled(const Estimate& a, double c);
Estimate power(const Estimate& a, double exponent);
Estimate quotient(const Estimate& a, const Estimate& b);

}  // namespace polarity
