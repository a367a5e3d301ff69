#pragma once

#include <complex>
#include <vector>

#include "specem/errors.hpp"
#include "specem/types.hpp"

namespace specem {

// Floor applied to pmf bins before any log / KL computation.
inline constexpr double kPmfFloor = 1e-12;
// A series whose population variance falls below this is treated as constant.
inline constexpr double kVarianceFloor = 1e-14;

double sample_mean(const std::vector<double>& x);
// Population (1/n) variance.
double population_variance(const std::vector<double>& x);

// Scale to zero mean and unit population variance.
// Throws ZeroVarianceSeries for (numerically) constant input.
TimeSeries standardize(const TimeSeries& x);

// Unitary-style DFT: X(omega_k) = T^{-1/2} * sum_t x_t exp(-2*pi*i*k*t/T),
// t = 0..T-1. Radix-2 FFT when T is a power of two, direct transform
// otherwise. Under this scaling sum_k |X_k|^2 = sum_t x_t^2.
std::vector<std::complex<double>> dft(const std::vector<double>& x);

// O(T^2) evaluation of the same transform; the reference the FFT path is
// checked against.
std::vector<std::complex<double>> dft_direct(const std::vector<double>& x);

// |X(omega_j)|^2 on bins j = 1..floor(T/2). Standardizes the input first if
// it is not already standardized (hence may throw ZeroVarianceSeries).
Spectrum periodogram(const TimeSeries& x);

// Periodograms for every member of a set.
std::vector<Spectrum> periodograms(const TimeSeriesSet& data);

// Floor every bin at kPmfFloor and renormalize to sum 1. A pmf input is
// returned unchanged. Throws EmptySpectrum when no bin is positive.
Spectrum to_pmf(const Spectrum& s);

// Weighted per-bin average: out[j] = sum_i w_i s_i[j] / sum_i w_i.
// All spectra must share one grid and one kind.
// Throws MixedGrids / ZeroTotalWeight.
Spectrum average_spectra(const std::vector<Spectrum>& spectra, const std::vector<double>& weights);

// Convenience: standardize -> periodogram -> to_pmf for a whole set. This is
// the cached representation the EM works on.
std::vector<Spectrum> pmf_spectra(const TimeSeriesSet& data);

}  // namespace specem
