#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "specem/em.hpp"
#include "specem/gmm1d.hpp"
#include "specem/model_selection.hpp"
#include "specem/simulation.hpp"

namespace specem {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a 64-bit digest of the file bytes, as 16 hex characters.
std::string file_digest(const std::string& path);

// Provenance block attached to every structured output. Re-running the
// recorded command with the recorded config reproduces the output
// byte-identically (timestamp aside).
struct RunManifest {
  std::string command;
  json config = json::object();
  std::vector<std::pair<std::string, std::string>> inputs;  // (path, digest)
  std::string version = kToolVersion;
  std::string timestamp;  // set at emission time

  void add_input(const std::string& path) { inputs.emplace_back(path, file_digest(path)); }
};

json manifest_to_json(const RunManifest& m);

json spectrum_to_json(const Spectrum& s);
Spectrum spectrum_from_json(const json& j);

json cluster_result_to_json(const EmResult& result, const std::vector<std::string>& labels,
                            const RunManifest& manifest);

json selection_report_to_json(const SelectionReport& report, const RunManifest& manifest);
SelectionReport selection_report_from_json(const json& j);

json gmm_result_to_json(const Gmm1dModel& model, const std::vector<double>& features,
                        const std::vector<std::size_t>& assignments,
                        const std::vector<std::pair<std::size_t, double>>& bic_scan,
                        const RunManifest& manifest);

json sim_spec_to_json(const SimSpec& spec);
SimSpec sim_spec_from_json(const json& j);

// Spec for simulate-recording: explicit onsets or evenly spaced round-robin
// placement.
struct RecordingSpec {
  std::size_t length = 0;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
  std::vector<TimeSeries> templates;
  std::vector<std::size_t> onsets;        // optional; paired with template_ids
  std::vector<std::size_t> template_ids;  // optional
  std::size_t occurrences_per_template = 0;  // used when onsets are absent
  std::size_t spacing = 0;                   // used when onsets are absent
};

RecordingSpec recording_spec_from_json(const json& j);
SyntheticRecording realize(const RecordingSpec& spec);

// Write pretty-printed JSON followed by a newline.
void write_json_file(const std::string& path, const json& j);
json read_json_file(const std::string& path);

std::string utc_timestamp();

}  // namespace specem
