#pragma once

#include <cstdint>
#include <vector>

#include "specem/errors.hpp"

namespace specem {

// Univariate Gaussian mixture, components kept sorted by mean.
struct Gmm1dModel {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> variances;
  double loglik = 0.0;
  double bic = 0.0;

  std::size_t components() const { return means.size(); }
};

inline constexpr double kGmmVarianceFloor = 1e-6;

// EM fit with k-quantile initialization plus per-restart jitter; the restart
// with the highest likelihood wins. Deterministic for a given seed. When
// `traces` is given it receives the per-iteration likelihood of every
// restart.
Gmm1dModel fit_gmm1d(const std::vector<double>& x, std::size_t k, std::size_t restarts = 100,
                     std::uint64_t seed = 0,
                     std::vector<std::vector<double>>* traces = nullptr);

// 2 * loglik - p * ln(n) with p = 3K - 1 free parameters; higher is better.
double gmm_bic(const Gmm1dModel& model, std::size_t n);

// Maximum-a-posteriori component per point, ties to the smaller index.
std::vector<std::size_t> gmm_assign(const Gmm1dModel& model, const std::vector<double>& x);

}  // namespace specem
