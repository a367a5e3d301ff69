#include "specem/simulation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "specem/rng.hpp"
#include "specem/spectral.hpp"

namespace specem {

namespace {

constexpr std::size_t kBurnIn = 100;

void validate(const SimSpec& spec) {
  if (spec.classes.empty()) throw InvalidSpec("simulation: no classes");
  if (spec.n_per_class < 1) throw InvalidSpec("simulation: n_per_class must be >= 1");
  if (spec.length < 8) throw InvalidSpec("simulation: series length must be >= 8");
  for (const auto& c : spec.classes) {
    switch (c.type) {
      case SimClassType::white_noise:
        break;
      case SimClassType::ar1:
        if (!(std::fabs(c.phi) < 1.0)) throw InvalidSpec("simulation: ar1 needs |phi| < 1");
        break;
      case SimClassType::noisy_sine:
        if (!(c.freq > 0.0 && c.freq < 0.5)) {
          throw InvalidSpec("simulation: sine frequency must lie in (0, 0.5)");
        }
        break;
    }
  }
}

TimeSeries draw_series(const SimClass& cls, std::size_t t_len, std::mt19937_64& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  TimeSeries out;
  out.values.resize(t_len);
  switch (cls.type) {
    case SimClassType::white_noise: {
      for (auto& v : out.values) v = gauss(eng);
      break;
    }
    case SimClassType::ar1: {
      double x = 0.0;
      for (std::size_t t = 0; t < kBurnIn; ++t) x = cls.phi * x + gauss(eng);
      for (auto& v : out.values) {
        x = cls.phi * x + gauss(eng);
        v = x;
      }
      break;
    }
    case SimClassType::noisy_sine: {
      double rms_sq = 0.0;
      for (std::size_t t = 0; t < t_len; ++t) {
        const double s =
            std::sin(2.0 * std::numbers::pi * cls.freq * static_cast<double>(t));
        out.values[t] = s;
        rms_sq += s * s;
      }
      const double sd =
          cls.noise_sd >= 0.0 ? cls.noise_sd : std::sqrt(rms_sq / static_cast<double>(t_len));
      for (auto& v : out.values) v += sd * gauss(eng);
      break;
    }
  }
  return out;
}

std::string default_name(const SimClass& cls) {
  switch (cls.type) {
    case SimClassType::white_noise:
      return "white_noise";
    case SimClassType::ar1:
      return "ar1_" + std::to_string(cls.phi);
    case SimClassType::noisy_sine:
      return "sine_" + std::to_string(cls.freq);
  }
  return "class";
}

}  // namespace

SimSpec five_class_benchmark(std::size_t n_per_class, std::size_t length, std::uint64_t seed) {
  SimSpec spec;
  spec.n_per_class = n_per_class;
  spec.length = length;
  spec.seed = seed;
  spec.classes = {
      {SimClassType::white_noise, 0.0, 0.0, -1.0, "white_noise"},
      {SimClassType::ar1, 0.5, 0.0, -1.0, "ar1_0.50"},
      {SimClassType::ar1, 0.75, 0.0, -1.0, "ar1_0.75"},
      {SimClassType::noisy_sine, 0.0, 0.1, -1.0, "sine_0.10"},
      {SimClassType::noisy_sine, 0.0, 0.2, -1.0, "sine_0.20"},
  };
  return spec;
}

LabeledSet generate(const SimSpec& spec) {
  validate(spec);
  LabeledSet out;
  out.class_names.reserve(spec.classes.size());
  for (const auto& c : spec.classes) {
    out.class_names.push_back(c.name.empty() ? default_name(c) : c.name);
  }
  std::size_t stream = 0;
  for (std::size_t ci = 0; ci < spec.classes.size(); ++ci) {
    for (std::size_t s = 0; s < spec.n_per_class; ++s, ++stream) {
      auto eng = make_engine(spec.seed, stream);
      TimeSeries x = draw_series(spec.classes[ci], spec.length, eng);
      out.set.series.push_back(spec.standardize ? standardize(x) : x);
      out.set.labels.push_back(out.class_names[ci] + "_" + std::to_string(s + 1));
      out.labels.push_back(ci);
    }
  }
  return out;
}

SyntheticRecording synth_recording(const std::vector<TimeSeries>& templates,
                                   const std::vector<std::size_t>& onsets,
                                   const std::vector<std::size_t>& template_ids, double noise_sd,
                                   std::size_t length, std::uint64_t seed) {
  if (onsets.size() != template_ids.size()) {
    throw std::invalid_argument("synth_recording: one template id per onset");
  }
  if (noise_sd < 0.0) throw std::invalid_argument("synth_recording: noise_sd must be >= 0");
  std::size_t t_len = 0;
  for (const auto& tpl : templates) {
    if (t_len == 0) t_len = tpl.length();
    if (tpl.length() != t_len || t_len == 0) {
      throw std::invalid_argument("synth_recording: templates must share one nonzero length");
    }
  }
  for (std::size_t i = 0; i < onsets.size(); ++i) {
    if (template_ids[i] >= templates.size()) {
      throw std::invalid_argument("synth_recording: template id out of range");
    }
    if (onsets[i] + t_len > length) {
      throw OverlapError("synth_recording: onset " + std::to_string(onsets[i]) +
                         " runs past the recording");
    }
    if (i > 0 && onsets[i] < onsets[i - 1] + t_len) {
      throw OverlapError("synth_recording: onsets " + std::to_string(onsets[i - 1]) + " and " +
                         std::to_string(onsets[i]) + " overlap");
    }
  }

  SyntheticRecording out;
  out.recording.samples.assign(length, 0.0);
  if (noise_sd > 0.0) {
    auto eng = make_engine(seed, 0);
    std::normal_distribution<double> gauss(0.0, noise_sd);
    for (auto& v : out.recording.samples) v = gauss(eng);
  }
  for (std::size_t i = 0; i < onsets.size(); ++i) {
    const auto& tpl = templates[template_ids[i]].values;
    for (std::size_t t = 0; t < t_len; ++t) out.recording.samples[onsets[i] + t] += tpl[t];
    out.truth.push_back({onsets[i], template_ids[i]});
  }
  return out;
}

}  // namespace specem
