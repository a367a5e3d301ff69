#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace specem {

// One real-valued series. `standardized` records whether the values have
// already been scaled to zero mean and unit (population) variance.
struct TimeSeries {
  std::vector<double> values;
  bool standardized = false;

  std::size_t length() const { return values.size(); }
};

// A family of series sharing one length T. Labels are optional identifiers;
// when present there is one per series.
struct TimeSeriesSet {
  std::vector<TimeSeries> series;
  std::vector<std::string> labels;

  std::size_t size() const { return series.size(); }
  std::size_t length() const { return series.empty() ? 0 : series.front().length(); }
};

enum class SpectrumKind { raw, pmf };

// Power values on the Fourier-frequency grid of a length-T series, restricted
// to bins j = 1..floor(T/2). The DC bin is dropped (it is exactly zero for
// standardized input) and bins above T/2 are redundant for real input.
struct Spectrum {
  std::vector<double> power;
  std::size_t time_len = 0;  // the T the bins refer to; omega_j = j / T
  SpectrumKind kind = SpectrumKind::raw;

  std::size_t bins() const { return power.size(); }
  // Frequency of power[i], on the [0, 0.5] cycles-per-sample scale.
  double frequency(std::size_t i) const {
    return static_cast<double>(i + 1) / static_cast<double>(time_len);
  }
  bool same_grid(const Spectrum& other) const {
    return time_len == other.time_len && power.size() == other.power.size();
  }
};

inline std::size_t half_spectrum_bins(std::size_t time_len) { return time_len / 2; }

}  // namespace specem
