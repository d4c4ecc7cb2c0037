#pragma once

#include <cmath>

namespace anisofrac {

// pow with fast paths for the exponents that dominate the pair loops.
// base >= 0 assumed.
inline double pow_fast(double base, double expo) {
  if (expo == 2.0) return base * base;
  if (expo == 1.0) return base;
  if (expo == 0.0) return 1.0;
  if (expo == 0.5) return std::sqrt(base);
  if (expo == 1.5) return base * std::sqrt(base);
  if (expo == 2.5) return base * base * std::sqrt(base);
  if (expo == 3.0) return base * base * base;
  return std::pow(base, expo);
}

// |t|^{p-2} t written as sign(t) |t|^{p-1}: finite for every p > 1, with the
// correct limit 0 at t = 0 (the naive form is inf * 0 when p < 2).
inline double odd_power(double t, double p) {
  if (t == 0.0) return 0.0;
  return std::copysign(pow_fast(std::fabs(t), p - 1.0), t);
}

}  // namespace anisofrac
