#include "helmbif/special.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "helmbif/errors.hpp"

namespace helmbif {
namespace {

constexpr double kTailThreshold = 1.0e-6;
constexpr double kScanStep = 0.05;
constexpr double kRootWidth = 1.0e-13;

void check_envelope(int k, double x, const char* who) {
  if (k < 0 || k > kMaxOrder || !(x >= 0.0) || x > kMaxArgument) {
    std::ostringstream os;
    os << who << ": (k=" << k << ", x=" << x
       << ") outside envelope 0 <= k <= " << kMaxOrder << ", 0 <= x <= "
       << kMaxArgument;
    throw DomainError(os.str());
  }
}

// (1/pi) int_0^pi cos(k t - x sin t) dt on N+1 equispaced nodes. The
// integrand extends to a smooth 2pi-periodic function, so the trapezoid rule
// converges geometrically once N exceeds roughly (x + k) / 2.
double bessel_integral(int k, double x) {
  const int nodes = std::max(64, 4 * static_cast<int>(std::ceil(x)) + 4 * k);
  const long double pi = std::numbers::pi_v<long double>;
  const long double h = pi / nodes;
  const long long period = 2LL * nodes;
  long double sum = 0.5L * (1.0L + ((k % 2 == 0) ? 1.0L : -1.0L));
  for (int j = 1; j < nodes; ++j) {
    // k*t_j reduced modulo 2pi in integer arithmetic before scaling.
    const long long q = (static_cast<long long>(k) * j) % period;
    const long double angle =
        static_cast<long double>(q) * h - static_cast<long double>(x) * std::sin(j * h);
    sum += std::cos(angle);
  }
  return static_cast<double>(sum / nodes);
}

}  // namespace

std::vector<double> bessel_j_orders(int n_max, double x) {
  check_envelope(n_max, x, "bessel_j_orders");
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }

  const int top = std::max(n_max, static_cast<int>(std::ceil(x)));
  int start = top + 30 + static_cast<int>(std::ceil(std::sqrt(40.0 * top)));
  start += start % 2;

  // ratio[k] = J_k / J_{k-1}, recurred downward from J_{start+1} = 0.
  std::vector<double> ratio(static_cast<std::size_t>(start) + 2, 0.0);
  for (int k = start; k >= 1; --k) {
    double denom = 2.0 * k / x - ratio[k + 1];
    if (denom == 0.0) denom = 1e-300;
    ratio[k] = 1.0 / denom;
  }

  // p = J_k / J_0; normalization J_0 + 2 sum_{k>=1} J_{2k} = 1.
  double p = 1.0;
  double norm = 1.0;
  for (int k = 1; k <= start; ++k) {
    p *= ratio[k];
    if (k <= n_max) out[k] = p;
    if (k % 2 == 0) norm += 2.0 * p;
    if (p == 0.0) break;
  }
  out[0] = 1.0;
  for (double& v : out) v /= norm;
  return out;
}

double bessel_j(int k, double x) {
  check_envelope(k, x, "bessel_j");
  if (x == 0.0) return k == 0 ? 1.0 : 0.0;
  const double value = bessel_integral(k, x);
  if (std::abs(value) >= kTailThreshold) return value;
  return bessel_j_orders(k, x)[k];
}

double bessel_j_prime(int k, double x) {
  check_envelope(k, x, "bessel_j_prime");
  if (x == 0.0) return k == 1 ? 0.5 : 0.0;
  if (k == 0) return -bessel_j(1, x);
  return bessel_j(k - 1, x) - (k / x) * bessel_j(k, x);
}

double bessel_j_second(int k, double x) {
  check_envelope(k, x, "bessel_j_second");
  // J_{-n} = (-1)^n J_n
  auto signed_j = [x](int n) {
    if (n >= 0) return bessel_j(n, x);
    return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(-n, x);
  };
  return 0.25 * (signed_j(k - 2) - 2.0 * bessel_j(k, x) + bessel_j(k + 2, x));
}

BesselEval bessel_eval(int k, double x) {
  return {k, x, bessel_j(k, x), bessel_j_prime(k, x)};
}

BesselRoot bessel_root(int k, int n) {
  if (k < 0 || k > 64 || n < 1 || n > 8) {
    std::ostringstream os;
    os << "bessel_root: (k=" << k << ", n=" << n
       << ") outside envelope 0 <= k <= 64, 1 <= n <= 8";
    throw DomainError(os.str());
  }
  const double lo = 0.5 * k;
  const double hi = k + 20.0 * n;
  int found = 0;
  double a = lo;
  double fa = bessel_j(k, a);
  for (double b = lo + kScanStep; b <= hi + 0.5 * kScanStep; b += kScanStep) {
    const double fb = bessel_j(k, b);
    if ((fa > 0.0 && fb <= 0.0) || (fa < 0.0 && fb >= 0.0)) {
      if (++found == n) {
        double left = a;
        double right = b;
        double fl = fa;
        if (fb == 0.0) return {k, n, b};
        while (right - left > kRootWidth) {
          const double mid = 0.5 * (left + right);
          if (mid <= left || mid >= right) break;
          const double fm = bessel_j(k, mid);
          if (fm == 0.0) return {k, n, mid};
          if ((fm > 0.0) == (fl > 0.0)) {
            left = mid;
            fl = fm;
          } else {
            right = mid;
          }
        }
        return {k, n, 0.5 * (left + right)};
      }
    }
    a = b;
    fa = fb;
  }
  std::ostringstream os;
  os << "bessel_root: root " << n << " of J_" << k << " not bracketed in ["
     << lo << ", " << hi << "]";
  throw SearchError(os.str());
}

}  // namespace helmbif
