#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace tlink::stats {

// Ranks starting at 1, tied values share their average rank.
inline std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("pearson: need two equal-length samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// Spearman's rho.
inline double rank_correlation(std::span<const double> x, std::span<const double> y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

// One-sided p-value for H1: p1 > p2, pooled two-proportion z test.
inline double two_proportion_p(double wins1, double n1, double wins2, double n2) {
  const double p1 = wins1 / n1, p2 = wins2 / n2;
  const double pooled = (wins1 + wins2) / (n1 + n2);
  const double se = std::sqrt(pooled * (1 - pooled) * (1 / n1 + 1 / n2));
  if (se == 0) return p1 > p2 ? 0.0 : 1.0;
  const double z = (p1 - p2) / se;
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

// One-sided binomial test p-value for H1: rate > p0 (normal approximation).
inline double binomial_greater_p(double wins, double n, double p0) {
  const double se = std::sqrt(p0 * (1 - p0) / n);
  const double z = (wins / n - p0) / se;
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace tlink::stats
