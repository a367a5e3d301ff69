#include "specem/report_json.hpp"

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace specem {

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

json manifest_to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["version"] = m.version;
  j["config"] = m.config;
  j["inputs"] = json::array();
  for (const auto& [path, digest] : m.inputs) {
    j["inputs"].push_back(json{{"path", path}, {"digest", digest}});
  }
  j["timestamp"] = m.timestamp.empty() ? utc_timestamp() : m.timestamp;
  return j;
}

json spectrum_to_json(const Spectrum& s) {
  json j;
  j["time_len"] = s.time_len;
  j["kind"] = s.kind == SpectrumKind::pmf ? "pmf" : "raw";
  j["power"] = s.power;
  return j;
}

Spectrum spectrum_from_json(const json& j) {
  Spectrum s;
  s.time_len = j.at("time_len").get<std::size_t>();
  s.kind = j.at("kind").get<std::string>() == "pmf" ? SpectrumKind::pmf : SpectrumKind::raw;
  s.power = j.at("power").get<std::vector<double>>();
  return s;
}

json cluster_result_to_json(const EmResult& result, const std::vector<std::string>& labels,
                            const RunManifest& manifest) {
  json j;
  j["manifest"] = manifest_to_json(manifest);
  j["n_series"] = result.state.gamma.size();
  j["k"] = result.state.pi.size();
  j["converged"] = result.converged;
  j["best_restart"] = result.best_restart;
  j["loglik"] = result.state.loglik;
  j["loglik_trace"] = result.loglik_trace;
  j["pi"] = result.state.pi;
  j["gamma"] = result.state.gamma;
  j["hard_assignment"] = result.hard_assignment;
  if (!labels.empty()) j["labels"] = labels;
  j["cluster_spectra"] = json::array();
  for (const auto& s : result.state.cluster_spectra) {
    j["cluster_spectra"].push_back(spectrum_to_json(s));
  }
  return j;
}

json selection_report_to_json(const SelectionReport& report, const RunManifest& manifest) {
  json j;
  j["manifest"] = manifest_to_json(manifest);
  j["records"] = json::array();
  for (const auto& rec : report.records) {
    json r;
    r["k"] = rec.k;
    if (rec.loglik) r["loglik"] = *rec.loglik;
    if (rec.entropy) r["entropy"] = *rec.entropy;
    if (rec.nec) r["nec"] = *rec.nec;
    if (!rec.error.empty()) r["error"] = rec.error;
    j["records"].push_back(std::move(r));
  }
  if (report.nec_global_min) j["nec_global_min"] = *report.nec_global_min;
  j["nec_local_minima"] = report.nec_local_minima;
  if (report.elbow_k) j["elbow_k"] = *report.elbow_k;
  if (report.recommended_k) j["recommended_k"] = *report.recommended_k;
  return j;
}

SelectionReport selection_report_from_json(const json& j) {
  SelectionReport report;
  for (const auto& r : j.at("records")) {
    SelectionRecord rec;
    rec.k = r.at("k").get<std::size_t>();
    if (r.contains("loglik")) rec.loglik = r["loglik"].get<double>();
    if (r.contains("entropy")) rec.entropy = r["entropy"].get<double>();
    if (r.contains("nec")) rec.nec = r["nec"].get<double>();
    if (r.contains("error")) rec.error = r["error"].get<std::string>();
    report.records.push_back(std::move(rec));
  }
  if (j.contains("nec_global_min")) report.nec_global_min = j["nec_global_min"].get<std::size_t>();
  report.nec_local_minima = j.at("nec_local_minima").get<std::vector<std::size_t>>();
  if (j.contains("elbow_k")) report.elbow_k = j["elbow_k"].get<std::size_t>();
  if (j.contains("recommended_k")) report.recommended_k = j["recommended_k"].get<std::size_t>();
  return report;
}

json gmm_result_to_json(const Gmm1dModel& model, const std::vector<double>& features,
                        const std::vector<std::size_t>& assignments,
                        const std::vector<std::pair<std::size_t, double>>& bic_scan,
                        const RunManifest& manifest) {
  json j;
  j["manifest"] = manifest_to_json(manifest);
  j["k"] = model.components();
  j["weights"] = model.weights;
  j["means"] = model.means;
  j["variances"] = model.variances;
  j["loglik"] = model.loglik;
  j["bic"] = model.bic;
  j["bic_scan"] = json::array();
  for (const auto& [k, bic] : bic_scan) {
    j["bic_scan"].push_back(json{{"k", k}, {"bic", bic}});
  }
  j["features"] = features;
  j["assignments"] = assignments;
  return j;
}

json sim_spec_to_json(const SimSpec& spec) {
  json j;
  j["n_per_class"] = spec.n_per_class;
  j["length"] = spec.length;
  j["seed"] = spec.seed;
  j["standardize"] = spec.standardize;
  j["classes"] = json::array();
  for (const auto& c : spec.classes) {
    json cj;
    switch (c.type) {
      case SimClassType::white_noise:
        cj["type"] = "white_noise";
        break;
      case SimClassType::ar1:
        cj["type"] = "ar1";
        cj["phi"] = c.phi;
        break;
      case SimClassType::noisy_sine:
        cj["type"] = "noisy_sine";
        cj["freq"] = c.freq;
        if (c.noise_sd >= 0.0) cj["noise_sd"] = c.noise_sd;
        break;
    }
    if (!c.name.empty()) cj["name"] = c.name;
    j["classes"].push_back(std::move(cj));
  }
  return j;
}

SimSpec sim_spec_from_json(const json& j) {
  SimSpec spec;
  spec.n_per_class = j.value("n_per_class", std::size_t{100});
  spec.length = j.value("length", std::size_t{50});
  spec.seed = j.value("seed", std::uint64_t{0});
  spec.standardize = j.value("standardize", true);
  if (!j.contains("classes") || !j["classes"].is_array()) {
    throw InvalidSpec("simulation spec: missing 'classes' array");
  }
  for (const auto& cj : j["classes"]) {
    SimClass c;
    const std::string type = cj.value("type", "");
    if (type == "white_noise") {
      c.type = SimClassType::white_noise;
    } else if (type == "ar1") {
      c.type = SimClassType::ar1;
      if (!cj.contains("phi")) throw InvalidSpec("simulation spec: ar1 class needs 'phi'");
      c.phi = cj["phi"].get<double>();
    } else if (type == "noisy_sine") {
      c.type = SimClassType::noisy_sine;
      if (!cj.contains("freq")) throw InvalidSpec("simulation spec: sine class needs 'freq'");
      c.freq = cj["freq"].get<double>();
      c.noise_sd = cj.value("noise_sd", -1.0);
    } else {
      throw InvalidSpec("simulation spec: unknown class type '" + type + "'");
    }
    c.name = cj.value("name", "");
    spec.classes.push_back(std::move(c));
  }
  return spec;
}

RecordingSpec recording_spec_from_json(const json& j) {
  RecordingSpec spec;
  if (!j.contains("length")) throw InvalidSpec("recording spec: missing 'length'");
  spec.length = j["length"].get<std::size_t>();
  spec.noise_sd = j.value("noise_sd", 0.0);
  spec.seed = j.value("seed", std::uint64_t{0});
  if (!j.contains("templates") || !j["templates"].is_array() || j["templates"].empty()) {
    throw InvalidSpec("recording spec: missing 'templates' array");
  }
  for (const auto& tj : j["templates"]) {
    TimeSeries t;
    t.values = tj.get<std::vector<double>>();
    spec.templates.push_back(std::move(t));
  }
  if (j.contains("onsets")) {
    spec.onsets = j["onsets"].get<std::vector<std::size_t>>();
    if (!j.contains("template_ids")) {
      throw InvalidSpec("recording spec: explicit onsets need 'template_ids'");
    }
    spec.template_ids = j["template_ids"].get<std::vector<std::size_t>>();
  } else {
    spec.occurrences_per_template = j.value("occurrences_per_template", std::size_t{0});
    spec.spacing = j.value("spacing", std::size_t{0});
    if (spec.occurrences_per_template == 0) {
      throw InvalidSpec("recording spec: need 'onsets' or 'occurrences_per_template'");
    }
  }
  return spec;
}

SyntheticRecording realize(const RecordingSpec& spec) {
  std::vector<std::size_t> onsets = spec.onsets;
  std::vector<std::size_t> ids = spec.template_ids;
  if (onsets.empty()) {
    const std::size_t t_len = spec.templates.front().length();
    const std::size_t total = spec.occurrences_per_template * spec.templates.size();
    std::size_t spacing = spec.spacing;
    if (spacing == 0) spacing = total ? spec.length / (total + 1) : 0;
    if (spacing < t_len) {
      throw InvalidSpec("recording spec: spacing shorter than the template length");
    }
    for (std::size_t i = 0; i < total; ++i) {
      onsets.push_back((i + 1) * spacing - t_len / 2);
      ids.push_back(i % spec.templates.size());
    }
  }
  return synth_recording(spec.templates, onsets, ids, spec.noise_sd, spec.length, spec.seed);
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what(), 0, 0);
  }
  return j;
}

}  // namespace specem
