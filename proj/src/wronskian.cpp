#include "helmbif/wronskian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <sstream>

#include "helmbif/errors.hpp"
#include "helmbif/special.hpp"

namespace helmbif {

const OperatingInterval& operating_interval() {
  static const OperatingInterval interval{bessel_root(1, 1).value,
                                          bessel_root(0, 2).value,
                                          bessel_root(1, 2).value};
  return interval;
}

double wronskian(int k, int l, double mu) {
  if (k == l) return 0.0;
  return bessel_j(k, mu) * bessel_j_prime(l, mu) - bessel_j(l, mu) * bessel_j_prime(k, mu);
}

double mu_wronskian_derivative(int k, int l, double mu) {
  if (!(mu > 0.0)) throw DomainError("mu_wronskian_derivative: mu must be positive");
  if (k == l) return 0.0;
  const double kk = static_cast<double>(k) * k;
  const double ll = static_cast<double>(l) * l;
  return (ll - kk) / mu * bessel_j(k, mu) * bessel_j(l, mu);
}

namespace {

constexpr double kBracketWidth = 1.0e-13;

WronskianRoot compute_mu(int m) {
  const auto& iv = operating_interval();
  double lo = iv.j11;
  double hi = iv.j12;
  const double w_lo = wronskian(1, m, lo);
  const double w_hi = wronskian(1, m, hi);
  if (!(w_lo > 0.0) || !(w_hi < 0.0)) {
    std::ostringstream os;
    os << "find_mu(" << m << "): expected W_{1,m}(j11) > 0 > W_{1,m}(j12), got "
       << w_lo << ", " << w_hi;
    throw ConsistencyError(os.str());
  }
  while (hi - lo > kBracketWidth) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double w = wronskian(1, m, mid);
    if (w > 0.0) {
      lo = mid;
    } else if (w < 0.0) {
      hi = mid;
    } else {
      lo = hi = mid;
    }
  }

  double mu = 0.5 * (lo + hi);
  // Newton polish: W' = ((mu W)' - W) / mu.
  const double w = wronskian(1, m, mu);
  const double dw = (mu_wronskian_derivative(1, m, mu) - w) / mu;
  if (dw != 0.0) {
    const double polished = mu - w / dw;
    if (polished >= lo && polished <= hi) mu = polished;
  }

  WronskianRoot root;
  root.m = m;
  root.mu = mu;
  root.bracket = {lo, hi};
  root.slope = mu_wronskian_derivative(1, m, mu);
  root.j0 = bessel_j(0, mu);
  root.j1 = bessel_j(1, mu);
  root.jm = bessel_j(m, mu);
  return root;
}

}  // namespace

WronskianRoot find_mu(int m) {
  if (m < 4 || m > 64) {
    std::ostringstream os;
    os << "find_mu: m = " << m << " outside 4 <= m <= 64";
    throw DomainError(os.str());
  }
  static std::shared_mutex mutex;
  static std::map<int, WronskianRoot> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
  }
  WronskianRoot root = compute_mu(m);
  std::unique_lock lock(mutex);
  // first writer wins; the computation is deterministic so later ones agree
  return cache.try_emplace(m, root).first->second;
}

bool Lemma1Report::all_passed() const {
  for (const auto& item : items) {
    if (!item.passed) return false;
  }
  return !items.empty();
}

Lemma1Report verify_lemma1(int m_max) {
  if (m_max < 4 || m_max > 64) {
    std::ostringstream os;
    os << "verify_lemma1: m_max = " << m_max << " outside 4 <= m_max <= 64";
    throw DomainError(os.str());
  }
  const auto& iv = operating_interval();
  Lemma1Report report;
  report.m_max = m_max;

  auto add = [&report](std::string name, int m, double value, double margin) {
    report.items.push_back({std::move(name), m, margin > 0.0, value, margin});
  };

  for (int m = 4; m <= m_max; ++m) {
    WronskianRoot root;
    try {
      root = find_mu(m);
    } catch (const ConsistencyError&) {
      add("existence", m, 0.0, -1.0);
      continue;
    }
    report.roots.push_back(root);
    const auto [lo, hi] = root.bracket;
    const bool contained = lo <= root.mu && root.mu <= hi && hi - lo <= 1e-12;
    add("bracket", m, root.mu,
        contained ? std::min(root.mu - iv.j11, iv.j12 - root.mu) : -1.0);
    add("below_j02", m, root.mu, iv.j02 - root.mu);
    add("residual", m, wronskian(1, m, root.mu),
        1e-12 - std::abs(wronskian(1, m, root.mu)));
    add("simple", m, root.slope, -root.slope);
    add("signs", m, root.j0, std::min({-root.j0, -root.j1, root.jm}));
    add("W1_next_negative", m, wronskian(1, m + 1, root.mu),
        -wronskian(1, m + 1, root.mu));
  }
  for (std::size_t i = 1; i < report.roots.size(); ++i) {
    const auto& prev = report.roots[i - 1];
    const auto& cur = report.roots[i];
    add("decreasing", prev.m, cur.mu, prev.mu - cur.mu);
  }

  // J_1 W_{k,m} - J_k W_{1,m} + J_m W_{1,k} = 0
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> order(0, 64);
  std::uniform_real_distribution<double> arg(0.5, 8.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int k = order(rng);
    const int m = order(rng);
    const double mu = arg(rng);
    const double r = bessel_j(1, mu) * wronskian(k, m, mu) -
                     bessel_j(k, mu) * wronskian(1, m, mu) +
                     bessel_j(m, mu) * wronskian(1, k, mu);
    worst = std::max(worst, std::abs(r));
  }
  report.identity_max_residual = worst;
  add("wronskian_identity", 0, worst, 1e-12 - worst);
  return report;
}

}  // namespace helmbif
