#include <doctest.h>

#include <cmath>

#include "specem/simulation.hpp"
#include "specem/spectral.hpp"

using namespace specem;

namespace {

// pooled lag-1 autocorrelation across a labeled set
double pooled_lag1(const TimeSeriesSet& set) {
  double num = 0.0, den = 0.0;
  for (const auto& s : set.series) {
    const auto& v = s.values;
    const double mu = sample_mean(v);
    for (std::size_t t = 1; t < v.size(); ++t) num += (v[t] - mu) * (v[t - 1] - mu);
    for (double x : v) den += (x - mu) * (x - mu);
  }
  return num / den;
}

SimSpec one_class(SimClass cls, std::size_t n, std::size_t t_len, std::uint64_t seed) {
  SimSpec spec;
  spec.classes = {cls};
  spec.n_per_class = n;
  spec.length = t_len;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("generate: deterministic for a fixed spec") {
  const SimSpec spec = five_class_benchmark(5, 50, 123);
  const LabeledSet a = generate(spec);
  const LabeledSet b = generate(spec);
  REQUIRE(a.set.size() == b.set.size());
  for (std::size_t i = 0; i < a.set.size(); ++i) {
    CHECK(a.set.series[i].values == b.set.series[i].values);
  }
  CHECK(a.labels == b.labels);
}

TEST_CASE("generate: phi = 0 behaves like white noise") {
  const LabeledSet data =
      generate(one_class({SimClassType::ar1, 0.0, 0, -1, "ar0"}, 1000, 200, 7));
  CHECK(std::fabs(pooled_lag1(data.set)) < 0.05);
}

TEST_CASE("generate: AR(1) autocorrelation matches phi") {
  const LabeledSet data =
      generate(one_class({SimClassType::ar1, 0.75, 0, -1, "ar75"}, 1000, 200, 8));
  CHECK(pooled_lag1(data.set) == doctest::Approx(0.75).epsilon(0.07));
}

TEST_CASE("generate: AR(1) stationary variance before standardization") {
  SimSpec spec = one_class({SimClassType::ar1, 0.75, 0, -1, "ar75"}, 1000, 200, 9);
  spec.standardize = false;
  const LabeledSet data = generate(spec);
  double pooled = 0.0;
  for (const auto& s : data.set.series) pooled += population_variance(s.values);
  pooled /= data.set.size();
  const double theory = 1.0 / (1.0 - 0.75 * 0.75);
  CHECK(std::fabs(pooled - theory) < 0.10 * theory);
}

TEST_CASE("generate: sine class peaks at the frequency-matched bin") {
  const LabeledSet data =
      generate(one_class({SimClassType::noisy_sine, 0, 0.1, -1, "sine"}, 200, 50, 10));
  std::vector<double> mean(half_spectrum_bins(50), 0.0);
  for (const auto& s : data.set.series) {
    const Spectrum p = periodogram(s);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += p.power[j];
  }
  std::size_t peak = 0;
  for (std::size_t j = 1; j < mean.size(); ++j) {
    if (mean[j] > mean[peak]) peak = j;
  }
  CHECK(peak == 4);  // bin j = 5 (0-based index 4): omega = 5/50 = 0.1
}

TEST_CASE("generate: invalid specs are rejected") {
  CHECK_THROWS_AS(generate(one_class({SimClassType::ar1, 1.0, 0, -1, ""}, 10, 50, 0)),
                  InvalidSpec);
  CHECK_THROWS_AS(generate(one_class({SimClassType::noisy_sine, 0, 0.6, -1, ""}, 10, 50, 0)),
                  InvalidSpec);
  CHECK_THROWS_AS(generate(one_class({SimClassType::white_noise, 0, 0, -1, ""}, 0, 50, 0)),
                  InvalidSpec);
  CHECK_THROWS_AS(generate(one_class({SimClassType::white_noise, 0, 0, -1, ""}, 10, 4, 0)),
                  InvalidSpec);
  CHECK_THROWS_AS(generate(SimSpec{}), InvalidSpec);
}

TEST_CASE("synth_recording: noiseless embedding reproduces the template exactly") {
  TimeSeries tpl;
  for (int t = 0; t < 20; ++t) tpl.values.push_back(std::sin(0.3 * t));
  const auto synth = synth_recording({tpl}, {100}, {0}, 0.0, 400, 0);
  REQUIRE(synth.recording.length() == 400);
  REQUIRE(synth.truth.size() == 1);
  CHECK(synth.truth[0].onset == 100);
  for (int t = 0; t < 20; ++t) {
    CHECK(synth.recording.samples[100 + t] == tpl.values[t]);
  }
  CHECK(synth.recording.samples[99] == 0.0);
  CHECK(synth.recording.samples[120] == 0.0);
}

TEST_CASE("synth_recording: zero templates give pure noise") {
  const auto synth = synth_recording({}, {}, {}, 1.0, 256, 5);
  CHECK(synth.recording.length() == 256);
  CHECK(synth.truth.empty());
  CHECK(population_variance(synth.recording.samples) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("synth_recording: overlaps and overruns are rejected") {
  TimeSeries tpl;
  tpl.values.assign(55, 1.0);
  CHECK_THROWS_AS(synth_recording({tpl}, {100, 120}, {0, 0}, 0.1, 1000, 0), OverlapError);
  CHECK_THROWS_AS(synth_recording({tpl}, {980}, {0}, 0.1, 1000, 0), OverlapError);
}
