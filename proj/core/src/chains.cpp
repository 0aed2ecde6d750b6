#include "rotrate/chains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rotrate/errors.hpp"

namespace rotrate {
namespace {

double signed_displacement_norm(const TorusPoint& a, const TorusPoint& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double c = circle_distance(a[i], b[i]);
    sum += c * c;
  }
  return std::sqrt(sum);
}

}  // namespace

ChainReport near_return_chain(const std::vector<TorusPoint>& theta, double delta1,
                              std::size_t n) {
  if (!(delta1 > 0.0)) throw UsageError("near_return_chain: delta1 must be positive");
  if (n < 2 || theta.size() < n) {
    throw UsageError("near_return_chain: need at least N >= 2 theta samples");
  }
  ChainReport report;
  for (std::size_t s = 1; s < n; ++s) {
    if (torus_distance(theta[s], theta[0]) < delta1) report.returns.push_back(s);
  }
  if (report.returns.empty()) return report;

  const std::size_t sigma1 = report.returns.front();
  report.sigmas.push_back(sigma1);
  std::size_t g = sigma1;

  auto pick = [&](auto&& eligible) {
    std::size_t best = 0;
    double best_norm = std::numeric_limits<double>::infinity();
    for (const std::size_t s : report.returns) {
      if (s == sigma1 || sigma1 + s >= n || !eligible(s)) continue;
      const double norm = signed_displacement_norm(theta[s], theta[0]);
      if (norm < best_norm) {
        best_norm = norm;
        best = s;
      }
    }
    return best;
  };

  if (const std::size_t s2 = pick([&](std::size_t s) { return std::gcd(s, sigma1) == 1; })) {
    report.sigmas.push_back(s2);
    g = 1;
  } else {
    while (g > 1) {
      const std::size_t s = pick([&](std::size_t c) { return std::gcd(c, g) < g; });
      if (s == 0) break;
      report.sigmas.push_back(s);
      g = std::gcd(g, s);
    }
  }
  report.gcd = g;

  std::vector<char> reached(n, 0);
  reached[0] = 1;
  if (report.sigmas.size() >= 2) {
    const std::size_t s2 = report.sigmas[1];
    // A1: step down by sigma_1 while the subscript stays >= 0, otherwise up
    // by sigma_2. Subscripts stay below sigma_1 + sigma_2 < N and the walk
    // is back at 0 after sigma_2 / g downs and sigma_1 / g ups.
    std::vector<std::size_t> chain{0};
    std::size_t s = 0;
    do {
      s = (s >= sigma1) ? s - sigma1 : s + s2;
      chain.push_back(s);
      reached[s] = 1;
    } while (s != 0);
    // A2: extend each chain point upward by sigma_2.
    for (const std::size_t c : chain) {
      for (std::size_t t = c + s2; t < n; t += s2) reached[t] = 1;
    }
    // A_j: add and subtract the remaining generators.
    for (std::size_t j = 2; j < report.sigmas.size(); ++j) {
      const std::size_t sj = report.sigmas[j];
      std::vector<std::size_t> found;
      for (std::size_t i = 0; i < n; ++i) {
        if (reached[i]) found.push_back(i);
      }
      for (const std::size_t f : found) {
        for (std::size_t t = f + sj; t < n; t += sj) reached[t] = 1;
        for (std::size_t t = f; t >= sj;) {
          t -= sj;
          reached[t] = 1;
        }
      }
    }
  }
  report.reached_count = static_cast<std::size_t>(std::count(reached.begin(), reached.end(), 1));
  report.reachable = report.reached_count == n;
  return report;
}

}  // namespace rotrate
