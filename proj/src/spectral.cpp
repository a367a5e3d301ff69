#include "specem/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace specem {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, decimation in time. Forward sign
// convention (exp(-i...)), no scaling; the caller applies 1/sqrt(T).
void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

double sample_mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double population_variance(const std::vector<double>& x) {
  const double mu = sample_mean(x);
  double s = 0.0;
  for (double v : x) {
    const double d = v - mu;
    s += d * d;
  }
  return s / static_cast<double>(x.size());
}

TimeSeries standardize(const TimeSeries& x) {
  const std::size_t n = x.length();
  if (n < 4) throw std::invalid_argument("standardize: need at least 4 observations");
  for (double v : x.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("standardize: non-finite value");
  }
  const double mu = sample_mean(x.values);
  const double var = population_variance(x.values);
  if (var <= kVarianceFloor) {
    throw ZeroVarianceSeries("standardize: series is constant (variance <= 1e-14)");
  }
  const double inv_sd = 1.0 / std::sqrt(var);
  TimeSeries out;
  out.values.resize(n);
  for (std::size_t t = 0; t < n; ++t) out.values[t] = (x.values[t] - mu) * inv_sd;
  out.standardized = true;
  return out;
}

std::vector<std::complex<double>> dft_direct(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    double re = 0.0, im = 0.0;
    const double w = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = w * static_cast<double>(t);
      re += x[t] * std::cos(ang);
      im += x[t] * std::sin(ang);
    }
    out[k] = std::complex<double>(re * scale, im * scale);
  }
  return out;
}

std::vector<std::complex<double>> dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  if (!is_power_of_two(n)) return dft_direct(x);
  std::vector<std::complex<double>> a(n);
  for (std::size_t t = 0; t < n; ++t) a[t] = std::complex<double>(x[t], 0.0);
  fft_radix2(a);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : a) v *= scale;
  return a;
}

Spectrum periodogram(const TimeSeries& x) {
  const TimeSeries tmp = x.standardized ? TimeSeries{} : standardize(x);
  const std::vector<double>& vals = x.standardized ? x.values : tmp.values;
  const std::size_t t_len = vals.size();
  const auto coeffs = dft(vals);
  Spectrum s;
  s.time_len = t_len;
  s.kind = SpectrumKind::raw;
  const std::size_t b = half_spectrum_bins(t_len);
  s.power.resize(b);
  for (std::size_t j = 1; j <= b; ++j) s.power[j - 1] = std::norm(coeffs[j]);
  return s;
}

std::vector<Spectrum> periodograms(const TimeSeriesSet& data) {
  std::vector<Spectrum> out;
  out.reserve(data.size());
  for (const auto& x : data.series) out.push_back(periodogram(x));
  return out;
}

Spectrum to_pmf(const Spectrum& s) {
  if (s.kind == SpectrumKind::pmf) return s;
  bool any_positive = false;
  for (double v : s.power) {
    if (v > 0.0) {
      any_positive = true;
      break;
    }
  }
  if (!any_positive) throw EmptySpectrum("to_pmf: no positive bin");
  Spectrum out;
  out.time_len = s.time_len;
  out.kind = SpectrumKind::pmf;
  out.power.resize(s.power.size());
  double total = 0.0;
  for (std::size_t j = 0; j < s.power.size(); ++j) {
    out.power[j] = std::max(s.power[j], kPmfFloor);
    total += out.power[j];
  }
  for (double& v : out.power) v /= total;
  return out;
}

Spectrum average_spectra(const std::vector<Spectrum>& spectra, const std::vector<double>& weights) {
  if (spectra.empty()) throw std::invalid_argument("average_spectra: no spectra");
  if (spectra.size() != weights.size()) {
    throw std::invalid_argument("average_spectra: weight count mismatch");
  }
  const Spectrum& first = spectra.front();
  for (const auto& s : spectra) {
    if (!s.same_grid(first)) throw MixedGrids("average_spectra: spectra on different grids");
    if (s.kind != first.kind) throw MixedGrids("average_spectra: mixed raw/pmf inputs");
  }
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("average_spectra: negative weight");
    wsum += w;
  }
  if (wsum <= 0.0) throw ZeroTotalWeight("average_spectra: weights sum to zero");

  Spectrum out;
  out.time_len = first.time_len;
  out.kind = first.kind;
  out.power.assign(first.bins(), 0.0);
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const double w = weights[i];
    const auto& p = spectra[i].power;
    for (std::size_t j = 0; j < p.size(); ++j) out.power[j] += w * p[j];
  }
  for (double& v : out.power) v /= wsum;
  return out;
}

std::vector<Spectrum> pmf_spectra(const TimeSeriesSet& data) {
  std::vector<Spectrum> out;
  out.reserve(data.size());
  for (const auto& x : data.series) out.push_back(to_pmf(periodogram(x)));
  return out;
}

}  // namespace specem
