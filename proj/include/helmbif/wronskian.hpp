#pragma once

#include <string>
#include <utility>
#include <vector>

namespace helmbif {

/// Bifurcation value mu_m: smallest positive root of W_{1,m} = J_1 J_m' - J_m J_1'.
struct WronskianRoot {
  int m = 0;
  double mu = 0.0;
  std::pair<double, double> bracket;  // sign change of W_{1,m}, inside (j_{1,1}, j_{1,2})
  double slope = 0.0;                 // (mu W_{1,m})' at mu; negative for a simple root
  double j0 = 0.0;                    // J_0(mu)
  double j1 = 0.0;                    // J_1(mu)
  double jm = 0.0;                    // J_m(mu)
};

/// The interval (j_{1,1}, j_{0,2}) on which the trivial branch is studied,
/// plus j_{1,2}. Computed once.
struct OperatingInterval {
  double j11 = 0.0;
  double j02 = 0.0;
  double j12 = 0.0;
};
const OperatingInterval& operating_interval();

/// W_{k,l}(mu) = J_k(mu) J_l'(mu) - J_l(mu) J_k'(mu).
double wronskian(int k, int l, double mu);

/// d/dmu (mu W_{k,l}(mu)) = ((l^2 - k^2) / mu) J_k(mu) J_l(mu).
double mu_wronskian_derivative(int k, int l, double mu);

/// Bisection on (j_{1,1}, j_{1,2}) followed by one Newton polish step.
/// Results are memoized per m. Requires 4 <= m <= 64.
WronskianRoot find_mu(int m);

struct CheckItem {
  std::string name;
  int m = 0;  // 0 for global items
  bool passed = false;
  double value = 0.0;   // the checked quantity
  double margin = 0.0;  // signed distance to failure; positive when passing
};

struct Lemma1Report {
  int m_max = 0;
  std::vector<WronskianRoot> roots;
  std::vector<CheckItem> items;
  double identity_max_residual = 0.0;
  bool all_passed() const;
};

/// Checks, for 4 <= m <= m_max: bracket and bounds, simplicity, strict
/// decrease of mu_m, the sign pattern J_0 < 0, J_1 < 0, J_m > 0 at mu_m,
/// W_{1,m+1}(mu_m) < 0, and the three-term Wronskian identity at 100
/// pseudo-random (k, m, mu) triples (fixed seed).
Lemma1Report verify_lemma1(int m_max);

}  // namespace helmbif
