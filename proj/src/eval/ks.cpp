#include "gestauth/eval/ks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gestauth/error.hpp"

namespace gestauth::eval {

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double kTermFloor = 1e-10;
  if (lambda < 1.18) {
    // The alternating series converges slowly for small lambda; use the
    // equivalent theta-function form 1 - sqrt(2 pi)/lambda sum exp(-(2k-1)^2 pi^2 / (8 lambda^2)).
    const double scale = std::sqrt(2.0 * std::numbers::pi) / lambda;
    double sum = 0.0;
    for (int k = 1; k < 1000; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
      sum += term;
      if (scale * term < kTermFloor) break;
    }
    return std::clamp(1.0 - scale * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k < 1000; ++k) {
    const double term = 2.0 * sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < kTermFloor) break;
    sign = -sign;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw Error(ErrorKind::invalid_value, "K-S test needs non-empty samples");
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());

  // Merge walk; ties advance both ECDFs before comparing.
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }

  KsResult r;
  r.statistic = d;
  const double effective = na * nb / (na + nb);
  r.p_value = kolmogorov_q(std::sqrt(effective) * d);
  return r;
}

}  // namespace gestauth::eval
