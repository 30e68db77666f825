#include "polarity/estimate.hpp"

#include <cmath>

namespace polarity {

const char* method_name(Method m) { return m == Method::Exact ? "exact" : "monte_carlo"; }

namespace {

Estimate combine(const Estimate& a, const Estimate& b, double value, double err) {
  Estimate r;
  r.value = value;
  r.abs_error = err;
  r.method = (a.is_exact() && b.is_exact()) ? Method::Exact : Method::MonteCarlo;
  r.samples = a.samples + b.samples;
  r.seed = a.is_exact() ? b.seed : a.seed;
  if (r.method == Method::Exact) r.abs_error = 0.0;
  return r;
}

}  // namespace

Estimate operator*(const Estimate& a, const Estimate& b) {
  double err = std::abs(a.value) * b.abs_error + std::abs(b.value) * a.abs_error +
               a.abs_error * b.abs_error;
  return combine(a, b, a.value * b.value, err);
}

Estimate operator+(const Estimate& a, const Estimate& b) {
  return combine(a, b, a.value + b.value, a.abs_error + b.abs_error);
}

Estimate scaled(const Estimate& a, double c) {
  Estimate r = a;
  r.value = a.value * c;
  r.abs_error = a.abs_error * std::abs(c);
  return r;
}

Estimate power(const Estimate& a, double exponent) {
  Estimate r = a;
  r.value = std::pow(a.value, exponent);
  if (a.is_exact() || a.value <= 0.0) {
    r.abs_error = a.is_exact() ? 0.0 : std::pow(a.value + a.abs_error, exponent) - r.value;
    if (r.abs_error < 0.0) r.abs_error = -r.abs_error;
    return r;
  }
  r.abs_error = std::abs(exponent) * r.value * (a.abs_error / a.value);
  return r;
}

Estimate quotient(const Estimate& a, const Estimate& b) {
  double v = a.value / b.value;
  double err = 0.0;
  if (!(a.is_exact() && b.is_exact())) {
    double rel = (a.value != 0.0 ? a.abs_error / std::abs(a.value) : 0.0) +
                 b.abs_error / std::abs(b.value);
    err = std::abs(v) * rel;
    if (a.value == 0.0) err = a.abs_error / std::abs(b.value);
  }
  return combine(a, b, v, err);
}

}  // namespace polarity
