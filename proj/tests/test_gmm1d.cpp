#include <doctest.h>

#include <cmath>
#include <random>

#include "specem/gmm1d.hpp"
#include "specem/rng.hpp"

using namespace specem;

namespace {

std::vector<double> gaussian_sample(double mean, double sd, std::size_t n, std::mt19937_64& eng) {
  std::normal_distribution<double> g(mean, sd);
  std::vector<double> out(n);
  for (auto& v : out) v = g(eng);
  return out;
}

}  // namespace

TEST_CASE("fit_gmm1d: K=1 is the closed-form gaussian fit") {
  std::mt19937_64 eng(30);
  const auto x = gaussian_sample(3.0, 2.0, 500, eng);
  const Gmm1dModel m = fit_gmm1d(x, 1, 3, 0);

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= x.size();
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= x.size();

  CHECK(m.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.means[0] == doctest::Approx(mean).epsilon(1e-12));
  CHECK(m.variances[0] == doctest::Approx(var).epsilon(1e-10));
}

TEST_CASE("fit_gmm1d: well-separated clouds recover the cloud proportions") {
  std::mt19937_64 eng(31);
  auto x = gaussian_sample(0.0, 0.3, 3000, eng);
  const auto hi = gaussian_sample(10.0, 0.3, 1000, eng);
  x.insert(x.end(), hi.begin(), hi.end());
  const Gmm1dModel m = fit_gmm1d(x, 2, 5, 0);
  CHECK(m.weights[0] == doctest::Approx(0.75).epsilon(1e-3));
  CHECK(m.weights[1] == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(m.means[0] == doctest::Approx(0.0).epsilon(0.05));
  CHECK(m.means[1] == doctest::Approx(10.0).epsilon(0.05));
  CHECK(m.means[0] < m.means[1]);  // canonical order
}

TEST_CASE("fit_gmm1d: translating the data translates the means only") {
  std::mt19937_64 eng(32);
  auto x = gaussian_sample(0.0, 1.0, 400, eng);
  const auto hi = gaussian_sample(4.0, 0.5, 400, eng);
  x.insert(x.end(), hi.begin(), hi.end());
  std::vector<double> shifted = x;
  for (auto& v : shifted) v += 7.25;

  const Gmm1dModel a = fit_gmm1d(x, 2, 5, 9);
  const Gmm1dModel b = fit_gmm1d(shifted, 2, 5, 9);
  for (int c = 0; c < 2; ++c) {
    CHECK(b.means[c] == doctest::Approx(a.means[c] + 7.25).epsilon(1e-8));
    CHECK(b.weights[c] == doctest::Approx(a.weights[c]).epsilon(1e-8));
    CHECK(b.variances[c] == doctest::Approx(a.variances[c]).epsilon(1e-8));
  }
}

TEST_CASE("fit_gmm1d: per-restart likelihood traces never decrease") {
  std::mt19937_64 eng(33);
  auto x = gaussian_sample(-1.0, 0.4, 300, eng);
  const auto hi = gaussian_sample(1.5, 0.6, 300, eng);
  x.insert(x.end(), hi.begin(), hi.end());
  std::vector<std::vector<double>> traces;
  fit_gmm1d(x, 3, 6, 1, &traces);
  CHECK(traces.size() == 6);
  for (const auto& trace : traces) {
    for (std::size_t t = 1; t < trace.size(); ++t) {
      CHECK(trace[t] >= trace[t - 1] - 1e-9);
    }
  }
}

TEST_CASE("fit_gmm1d: deterministic and input-validating") {
  std::mt19937_64 eng(34);
  const auto x = gaussian_sample(0.0, 1.0, 100, eng);
  const Gmm1dModel a = fit_gmm1d(x, 2, 4, 5);
  const Gmm1dModel b = fit_gmm1d(x, 2, 4, 5);
  CHECK(a.loglik == b.loglik);
  CHECK(a.means == b.means);
  CHECK_THROWS_AS(fit_gmm1d({1.0, 2.0, 3.0}, 2, 1, 0), std::invalid_argument);
}

TEST_CASE("gmm_bic: penalizes extra components on null data") {
  std::mt19937_64 eng(35);
  const auto x = gaussian_sample(0.0, 1.0, 500, eng);
  const Gmm1dModel m1 = fit_gmm1d(x, 1, 5, 0);
  const Gmm1dModel m5 = fit_gmm1d(x, 5, 5, 0);
  CHECK(m1.bic > m5.bic);
}

TEST_CASE("gmm_bic: penalty grows with log n at fixed per-point likelihood") {
  Gmm1dModel m;
  m.weights = {0.5, 0.5};
  m.means = {0.0, 1.0};
  m.variances = {1.0, 1.0};
  m.loglik = -100.0;
  const double p = 3.0 * 2 - 1;
  CHECK(gmm_bic(m, 1000) - gmm_bic(m, 2000) == doctest::Approx(p * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("gmm_assign: posterior argmax with ties to the smaller index") {
  Gmm1dModel m;
  m.weights = {0.5, 0.5};
  m.means = {-2.0, 2.0};
  m.variances = {0.25, 0.25};

  const auto at_mean = gmm_assign(m, {-2.0, 2.0});
  CHECK(at_mean[0] == 0);
  CHECK(at_mean[1] == 1);

  const auto mid = gmm_assign(m, {0.0});
  CHECK(mid[0] == 0);  // exact tie

  Gmm1dModel single;
  single.weights = {1.0};
  single.means = {0.0};
  single.variances = {1.0};
  const auto all = gmm_assign(single, {-1.0, 0.0, 5.0});
  for (auto a : all) CHECK(a == 0);
}
