#pragma once

#include <span>

namespace gestauth::eval {

struct KsResult {
  double statistic = 0.0;  // D = sup |F_x - F_y|
  double p_value = 1.0;
};

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

/// Two-sample K-S test; p from the asymptotic distribution with effective
/// size n_x n_y / (n_x + n_y).
KsResult ks_two_sample(std::span<const double> x, std::span<const double> y);

}  // namespace gestauth::eval
