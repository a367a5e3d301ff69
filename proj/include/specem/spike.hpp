#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "specem/errors.hpp"
#include "specem/types.hpp"

namespace specem {

// A long single-channel recording spikes are extracted from. The sample rate
// is carried as metadata only.
struct Recording {
  std::vector<double> samples;
  std::optional<double> sample_rate;

  std::size_t length() const { return samples.size(); }
};

struct DetectorConfig {
  std::size_t window_len = 55;
  double tol = 0.25;
  // Minimum gap between accepted onsets; 0 means window_len / 2.
  std::size_t min_separation = 0;
  // Where the spike peak is placed inside the window; negative means
  // floor(window_len / 2).
  std::ptrdiff_t align_index = -1;
  // Align on |x - mean| instead of x - mean, for negative-going spikes.
  bool use_abs_peak = false;

  std::size_t separation() const { return min_separation ? min_separation : window_len / 2; }
  std::size_t peak_index() const {
    return align_index >= 0 ? static_cast<std::size_t>(align_index) : window_len / 2;
  }
};

struct SpikeCatalog {
  std::vector<std::size_t> onsets;  // strictly increasing
  TimeSeriesSet windows;            // standardized, length window_len each
  std::vector<double> slowness;     // slowness of each aligned window

  std::size_t size() const { return onsets.size(); }
};

struct RollingSlowness {
  std::vector<double> values;
  // Marks windows where the lag-1 correlation is undefined (constant window
  // or constant margin); such positions carry the sentinel value 2.0 and are
  // never detected as spikes.
  std::vector<bool> degenerate;
};

// Slowness of a signal: the variance of the differenced, unit-variance
// signal, V(x_t - x_{t-1}) = 2 (1 - rho_1). Estimated through the Pearson
// correlation of the lagged pairs, which keeps the value inside [0, 4] and is
// exactly scale invariant. 2 for iid noise, 0 for a ramp, 4 for a sign
// alternation.
double slowness(const TimeSeries& x);

// Slowness over every length-T window of the recording; result i covers
// samples [i, i+T). Throws RecordingTooShort when the recording is shorter
// than one window.
RollingSlowness rolling_slowness(const Recording& rec, std::size_t window_len);

// Slowness-threshold detection: windows slower than cfg.tol become candidate
// onsets, runs of contiguous candidates reduce to their slowness minimum,
// nearby survivors are suppressed keeping the slower one, and each kept
// window is shifted so its peak lands on cfg.peak_index(). An empty catalog
// is a valid outcome.
SpikeCatalog detect_spikes(const Recording& rec, const DetectorConfig& cfg);

}  // namespace specem
