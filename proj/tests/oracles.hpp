#pragma once

// Reference implementations that share no code with the library: a plain
// power series for J_k, a sign-scan root finder built on it, and central
// finite differences.

#include <cmath>
#include <functional>

namespace oracle {

/// J_k(x) = sum_s (-1)^s (x/2)^{2s+k} / (s! (s+k)!), 40 terms, long double.
/// Accurate to ~1e-15 absolute for 0 <= x <= 12.
inline double series_j(int k, double x) {
  const long double half = 0.5L * x;
  long double term = 1.0L;
  for (int i = 1; i <= k; ++i) term *= half / i;
  long double sum = term;
  for (int s = 1; s < 40; ++s) {
    term *= -half * half / (static_cast<long double>(s) * (s + k));
    sum += term;
  }
  return static_cast<double>(sum);
}

inline double series_j_prime(int k, double x) {
  if (k == 0) return -series_j(1, x);
  return 0.5 * (series_j(k - 1, x) - series_j(k + 1, x));
}

inline double series_wronskian(int k, int l, double mu) {
  return series_j(k, mu) * series_j_prime(l, mu) - series_j(l, mu) * series_j_prime(k, mu);
}

/// n-th sign change of f on (lo, hi), scanned at `step`, refined by bisection.
inline double scan_root(const std::function<double(double)>& f, double lo, double hi, int n,
                        double step = 1e-3) {
  double a = lo;
  double fa = f(a);
  int found = 0;
  for (double b = lo + step; b <= hi; b += step) {
    const double fb = f(b);
    if ((fa < 0.0) != (fb < 0.0) && ++found == n) {
      for (int i = 0; i < 200 && b - a > 1e-15 * b; ++i) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    a = b;
    fa = fb;
  }
  return std::nan("");
}

inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double second_diff(const std::function<double(double)>& f, double x, double h = 1e-4) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

}  // namespace oracle
