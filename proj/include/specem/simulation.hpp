#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specem/errors.hpp"
#include "specem/spike.hpp"
#include "specem/types.hpp"

namespace specem {

enum class SimClassType { white_noise, ar1, noisy_sine };

struct SimClass {
  SimClassType type = SimClassType::white_noise;
  double phi = 0.0;       // ar1: |phi| < 1
  double freq = 0.0;      // noisy_sine: cycles per sample on (0, 0.5)
  double noise_sd = -1.0; // noisy_sine: < 0 means "sine RMS" (signal-to-noise 1)
  std::string name;
};

struct SimSpec {
  std::vector<SimClass> classes;
  std::size_t n_per_class = 100;
  std::size_t length = 50;
  std::uint64_t seed = 0;
  bool standardize = true;
};

struct LabeledSet {
  TimeSeriesSet set;
  std::vector<std::size_t> labels;  // class index per series
  std::vector<std::string> class_names;
};

// The five-class benchmark: white noise, AR(1) 0.5, AR(1) 0.75, noisy sines
// at 0.1 and 0.2.
SimSpec five_class_benchmark(std::size_t n_per_class = 100, std::size_t length = 50,
                             std::uint64_t seed = 0);

// Draw the whole family. AR(1) series get a 100-sample burn-in; each series
// has its own engine derived from (seed, series index), so output does not
// depend on generation order. Throws InvalidSpec.
LabeledSet generate(const SimSpec& spec);

struct SpikeTruth {
  std::size_t onset = 0;
  std::size_t template_id = 0;
};

struct SyntheticRecording {
  Recording recording;
  std::vector<SpikeTruth> truth;
};

// Embed template copies into iid gaussian noise. Onsets must be strictly
// increasing with gaps of at least the template length and stay inside the
// recording; violations raise OverlapError. template_ids picks the template
// per onset.
SyntheticRecording synth_recording(const std::vector<TimeSeries>& templates,
                                   const std::vector<std::size_t>& onsets,
                                   const std::vector<std::size_t>& template_ids, double noise_sd,
                                   std::size_t length, std::uint64_t seed = 0);

}  // namespace specem
