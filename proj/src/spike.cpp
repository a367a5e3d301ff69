#include "specem/spike.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specem/spectral.hpp"

namespace specem {

namespace {

constexpr double kFastSentinel = 2.0;

struct LagStats {
  double value = kFastSentinel;
  bool degenerate = true;
};

// 2 * (1 - corr(x_t, x_{t-1})) over one window. Degenerate when either margin
// of the lagged pairs is constant.
LagStats window_slowness(const double* x, std::size_t t_len) {
  const std::size_t n = t_len - 1;  // number of lagged pairs
  double su = 0.0, sv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    su += x[i];
    sv += x[i + 1];
  }
  const double mu = su / static_cast<double>(n);
  const double mv = sv / static_cast<double>(n);
  double cuv = 0.0, cuu = 0.0, cvv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double du = x[i] - mu;
    const double dv = x[i + 1] - mv;
    cuv += du * dv;
    cuu += du * du;
    cvv += dv * dv;
  }
  if (cuu <= kVarianceFloor * static_cast<double>(n) ||
      cvv <= kVarianceFloor * static_cast<double>(n)) {
    return {};
  }
  double rho = cuv / std::sqrt(cuu * cvv);
  rho = std::clamp(rho, -1.0, 1.0);
  return {2.0 * (1.0 - rho), false};
}

struct Candidate {
  std::size_t onset = 0;
  double slow = 0.0;
};

// Keep candidates apart by at least `gap`, preferring the slower window when
// two collide. Input must be sorted by onset.
std::vector<Candidate> suppress(const std::vector<Candidate>& sorted, std::size_t gap) {
  std::vector<Candidate> kept;
  for (const auto& c : sorted) {
    if (!kept.empty() && c.onset < kept.back().onset + gap) {
      if (c.slow < kept.back().slow) kept.back() = c;
      continue;
    }
    kept.push_back(c);
  }
  return kept;
}

}  // namespace

double slowness(const TimeSeries& x) {
  if (x.length() < 4) throw std::invalid_argument("slowness: need at least 4 observations");
  if (population_variance(x.values) <= kVarianceFloor) {
    throw ZeroVarianceSeries("slowness: series is constant");
  }
  return window_slowness(x.values.data(), x.length()).value;
}

RollingSlowness rolling_slowness(const Recording& rec, std::size_t window_len) {
  if (window_len < 8) throw std::invalid_argument("rolling_slowness: window_len must be >= 8");
  if (rec.length() < window_len) {
    throw RecordingTooShort("rolling_slowness: recording shorter than one window");
  }
  const std::size_t count = rec.length() - window_len + 1;
  RollingSlowness out;
  out.values.resize(count);
  out.degenerate.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const LagStats s = window_slowness(rec.samples.data() + i, window_len);
    out.values[i] = s.value;
    out.degenerate[i] = s.degenerate;
  }
  return out;
}

SpikeCatalog detect_spikes(const Recording& rec, const DetectorConfig& cfg) {
  const std::size_t t_len = cfg.window_len;
  if (t_len < 8) throw std::invalid_argument("detect_spikes: window_len must be >= 8");
  if (!(cfg.tol > 0.0 && cfg.tol < 2.0)) {
    throw std::invalid_argument("detect_spikes: tol must lie in (0, 2)");
  }
  if (rec.length() < 2 * t_len) {
    throw RecordingTooShort("detect_spikes: recording shorter than two windows");
  }

  const RollingSlowness roll = rolling_slowness(rec, t_len);

  // One candidate per run of below-threshold windows: its slowness minimum.
  std::vector<Candidate> candidates;
  std::size_t i = 0;
  while (i < roll.values.size()) {
    if (roll.degenerate[i] || roll.values[i] >= cfg.tol) {
      ++i;
      continue;
    }
    Candidate best{i, roll.values[i]};
    while (i < roll.values.size() && !roll.degenerate[i] && roll.values[i] < cfg.tol) {
      if (roll.values[i] < best.slow) best = {i, roll.values[i]};
      ++i;
    }
    candidates.push_back(best);
  }
  candidates = suppress(candidates, cfg.separation());

  // Shift each window until its peak sits at the alignment position; give up
  // on candidates that walk off the recording or fail to settle.
  const std::size_t align = cfg.peak_index();
  if (align >= t_len) throw std::invalid_argument("detect_spikes: align_index out of window");
  std::vector<Candidate> aligned;
  for (const auto& c : candidates) {
    std::ptrdiff_t onset = static_cast<std::ptrdiff_t>(c.onset);
    bool ok = false;
    for (int pass = 0; pass < 64; ++pass) {
      const double* w = rec.samples.data() + onset;
      double mean = 0.0;
      for (std::size_t t = 0; t < t_len; ++t) mean += w[t];
      mean /= static_cast<double>(t_len);
      std::size_t peak = 0;
      double peak_val = -1.0;
      for (std::size_t t = 0; t < t_len; ++t) {
        const double v = cfg.use_abs_peak ? std::fabs(w[t] - mean) : (w[t] - mean);
        if (v > peak_val) {
          peak_val = v;
          peak = t;
        }
      }
      if (peak == align) {
        ok = true;
        break;
      }
      onset += static_cast<std::ptrdiff_t>(peak) - static_cast<std::ptrdiff_t>(align);
      if (onset < 0 || static_cast<std::size_t>(onset) + t_len > rec.length()) break;
    }
    if (!ok) continue;
    const LagStats s = window_slowness(rec.samples.data() + onset, t_len);
    if (s.degenerate) continue;
    aligned.push_back({static_cast<std::size_t>(onset), s.value});
  }

  // Alignment can move windows together or reorder them; settle again.
  std::sort(aligned.begin(), aligned.end(),
            [](const Candidate& a, const Candidate& b) { return a.onset < b.onset; });
  aligned.erase(std::unique(aligned.begin(), aligned.end(),
                            [](const Candidate& a, const Candidate& b) {
                              return a.onset == b.onset;
                            }),
                aligned.end());
  aligned = suppress(aligned, cfg.separation());

  SpikeCatalog catalog;
  for (const auto& c : aligned) {
    TimeSeries w;
    w.values.assign(rec.samples.begin() + static_cast<std::ptrdiff_t>(c.onset),
                    rec.samples.begin() + static_cast<std::ptrdiff_t>(c.onset + t_len));
    catalog.onsets.push_back(c.onset);
    catalog.windows.series.push_back(standardize(w));
    catalog.slowness.push_back(c.slow);
  }
  return catalog;
}

}  // namespace specem
