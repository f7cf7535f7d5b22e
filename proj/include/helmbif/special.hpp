#pragma once

#include <vector>

namespace helmbif {

// Integer-order Bessel functions of the first kind.
//
// The operating envelope is k <= 64, 0 <= x <= 60, where values carry an
// absolute error below 1e-12. Arguments up to k <= 256, x <= 1e4 are
// accepted; anything else raises DomainError.

inline constexpr int kMaxOrder = 256;
inline constexpr double kMaxArgument = 1.0e4;

struct BesselEval {
  int order = 0;
  double x = 0.0;
  double value = 0.0;
  double derivative = 0.0;
};

struct BesselRoot {
  int order = 0;
  int index = 0;
  double value = 0.0;
};

/// J_k(x). Evaluated from the Bessel integral with a periodic trapezoid rule;
/// values in the evanescent tail (|J_k| < 1e-6) are taken from a
/// normalized backward recurrence so they keep full relative accuracy.
double bessel_j(int k, double x);

/// J_k'(x) = J_{k-1}(x) - (k/x) J_k(x), with J_0' = -J_1 and the series
/// limits at x = 0.
double bessel_j_prime(int k, double x);

/// J_k''(x) = (J_{k-2} - 2 J_k + J_{k+2}) / 4, using J_{-n} = (-1)^n J_n.
double bessel_j_second(int k, double x);

BesselEval bessel_eval(int k, double x);

/// J_0(x), ..., J_{n_max}(x) from Miller's backward recurrence, normalized
/// with J_0 + 2 sum J_{2k} = 1. Relative accuracy is kept for tiny values;
/// results below the double range underflow to zero.
std::vector<double> bessel_j_orders(int n_max, double x);

/// n-th positive root of J_k: sign scan with step 0.05 over [k/2, k + 20n],
/// then bisection to a bracket of width <= 1e-13.
BesselRoot bessel_root(int k, int n);

}  // namespace helmbif
