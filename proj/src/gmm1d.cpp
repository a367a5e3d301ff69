#include "specem/gmm1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "specem/rng.hpp"

namespace specem {

namespace {

constexpr double kMassFloor = 1e-8;
constexpr std::size_t kMaxRescues = 3;
constexpr std::size_t kMaxIter = 500;
constexpr double kTol = 1e-8;

double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

struct Fit {
  std::vector<double> w, mu, var;
  double loglik = -std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  bool ok = false;
};

Fit run_restart(const std::vector<double>& x, const std::vector<double>& sorted, std::size_t k,
                std::uint64_t restart_seed) {
  const std::size_t n = x.size();
  auto eng = std::mt19937_64(restart_seed);

  // k-quantile means, pooled variance, uniform weights, jittered per restart.
  double pooled_mean = 0.0;
  for (double v : x) pooled_mean += v;
  pooled_mean /= static_cast<double>(n);
  double pooled_var = 0.0;
  for (double v : x) pooled_var += (v - pooled_mean) * (v - pooled_mean);
  pooled_var = std::max(pooled_var / static_cast<double>(n), kGmmVarianceFloor);
  const double pooled_sd = std::sqrt(pooled_var);

  Fit f;
  f.w.assign(k, 1.0 / static_cast<double>(k));
  f.mu.resize(k);
  f.var.assign(k, pooled_var);
  std::normal_distribution<double> jitter(0.0, 0.1 * pooled_sd);
  for (std::size_t c = 0; c < k; ++c) {
    const double q = (static_cast<double>(c) + 0.5) / static_cast<double>(k);
    const std::size_t idx = std::min(
        static_cast<std::size_t>(q * static_cast<double>(n)), n - 1);
    f.mu[c] = sorted[idx] + jitter(eng);
  }

  std::vector<std::vector<double>> gamma(n, std::vector<double>(k));
  std::vector<double> a(k), log_w(k), half_inv_var(k), log_norm(k);
  std::size_t rescues = 0;
  double prev_ll = -std::numeric_limits<double>::infinity();

  auto refresh_constants = [&]() {
    for (std::size_t c = 0; c < k; ++c) {
      log_w[c] = f.w[c] > 0.0 ? std::log(f.w[c]) : -std::numeric_limits<double>::infinity();
      half_inv_var[c] = 0.5 / f.var[c];
      log_norm[c] = -0.5 * std::log(2.0 * std::numbers::pi * f.var[c]);
    }
  };

  for (std::size_t iter = 0; iter < kMaxIter; ++iter) {
    // E-step.
    refresh_constants();
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = x[i] - f.mu[c];
        a[c] = log_w[c] + log_norm[c] - d * d * half_inv_var[c];
        m = std::max(m, a[c]);
      }
      double s = 0.0;
      for (std::size_t c = 0; c < k; ++c) s += std::exp(a[c] - m);
      for (std::size_t c = 0; c < k; ++c) gamma[i][c] = std::exp(a[c] - m) / s;
      ll += m + std::log(s);
    }

    // Dead components get re-seeded at the worst-explained point.
    bool rescued = false;
    for (std::size_t c = 0; c < k; ++c) {
      double mass = 0.0;
      for (std::size_t i = 0; i < n; ++i) mass += gamma[i][c];
      if (mass >= kMassFloor) continue;
      if (rescues >= kMaxRescues) {
        throw DegenerateComponent("fit_gmm1d: component " + std::to_string(c) +
                                  " lost all responsibility mass");
      }
      ++rescues;
      std::size_t worst = 0;
      double worst_max = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const double row_max = *std::max_element(gamma[i].begin(), gamma[i].end());
        if (row_max < worst_max) {
          worst_max = row_max;
          worst = i;
        }
      }
      f.mu[c] = x[worst];
      f.var[c] = pooled_var;
      f.w.assign(k, 1.0 / static_cast<double>(k));
      rescued = true;
      break;
    }
    if (rescued) {
      prev_ll = -std::numeric_limits<double>::infinity();
      f.trace.clear();
      continue;
    }
    f.trace.push_back(ll);

    // M-step.
    for (std::size_t c = 0; c < k; ++c) {
      double mass = 0.0, mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        mass += gamma[i][c];
        mean += gamma[i][c] * x[i];
      }
      mean /= mass;
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        var += gamma[i][c] * d * d;
      }
      var = std::max(var / mass, kGmmVarianceFloor);
      f.w[c] = mass / static_cast<double>(n);
      f.mu[c] = mean;
      f.var[c] = var;
    }

    f.loglik = ll;
    if (std::isfinite(prev_ll) &&
        std::fabs(ll - prev_ll) <= kTol * std::max(1.0, std::fabs(prev_ll))) {
      break;
    }
    prev_ll = ll;
  }

  // Final likelihood under the last parameter update.
  refresh_constants();
  double ll = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double d = x[i] - f.mu[c];
      a[c] = log_w[c] + log_norm[c] - d * d * half_inv_var[c];
      m = std::max(m, a[c]);
    }
    double s = 0.0;
    for (std::size_t c = 0; c < k; ++c) s += std::exp(a[c] - m);
    ll += m + std::log(s);
  }
  f.loglik = ll;
  f.trace.push_back(ll);
  f.ok = true;
  return f;
}

}  // namespace

Gmm1dModel fit_gmm1d(const std::vector<double>& x, std::size_t k, std::size_t restarts,
                     std::uint64_t seed, std::vector<std::vector<double>>* traces) {
  if (k < 1) throw std::invalid_argument("fit_gmm1d: k must be >= 1");
  if (restarts < 1) throw std::invalid_argument("fit_gmm1d: restarts must be >= 1");
  if (x.size() < 2 * k) throw std::invalid_argument("fit_gmm1d: need at least 2k points");
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("fit_gmm1d: non-finite value");
  }

  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());

  Fit best;
  std::size_t failures = 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    try {
      Fit f = run_restart(x, sorted, k, mix_seed(seed, r));
      if (traces) traces->push_back(f.trace);
      if (!best.ok || f.loglik > best.loglik) best = std::move(f);
    } catch (const DegenerateComponent&) {
      ++failures;
    }
  }
  if (!best.ok) {
    throw DegenerateComponent("fit_gmm1d: all " + std::to_string(failures) +
                              " restarts degenerated");
  }

  // Canonical order: means ascending.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a_i, std::size_t b_i) { return best.mu[a_i] < best.mu[b_i]; });

  Gmm1dModel model;
  model.weights.reserve(k);
  model.means.reserve(k);
  model.variances.reserve(k);
  for (std::size_t c : order) {
    model.weights.push_back(best.w[c]);
    model.means.push_back(best.mu[c]);
    model.variances.push_back(best.var[c]);
  }
  model.loglik = best.loglik;
  model.bic = gmm_bic(model, x.size());
  return model;
}

double gmm_bic(const Gmm1dModel& model, std::size_t n) {
  const double p = 3.0 * static_cast<double>(model.components()) - 1.0;
  return 2.0 * model.loglik - p * std::log(static_cast<double>(n));
}

std::vector<std::size_t> gmm_assign(const Gmm1dModel& model, const std::vector<double>& x) {
  const std::size_t k = model.components();
  std::vector<std::size_t> out(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double score =
          (model.weights[c] > 0.0 ? std::log(model.weights[c])
                                  : -std::numeric_limits<double>::infinity()) +
          log_normal_pdf(x[i], model.means[c], model.variances[c]);
      if (score > best) {
        best = score;
        out[i] = c;
      }
    }
  }
  return out;
}

}  // namespace specem
