// specem - frequency-domain clustering of time series families.
//
// Subcommands wrap the library one-to-one: periodogram and cluster/select-k
// for the spectral EM, detect-spikes and gmm-slowness for the spike pipeline,
// simulate/simulate-recording for seeded synthetic data, and repro-sim4 for
// the five-class benchmark end to end.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "specem/csv.hpp"
#include "specem/em.hpp"
#include "specem/errors.hpp"
#include "specem/gmm1d.hpp"
#include "specem/model_selection.hpp"
#include "specem/report_json.hpp"
#include "specem/simulation.hpp"
#include "specem/spike.hpp"

namespace {

using specem::json;

struct EmFlags {
  std::size_t k = 1;
  std::size_t k_max = 9;
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::size_t max_iter = 500;
  std::string scale = "auto";
  bool mixing_weights = true;
};

void add_em_options(CLI::App* cmd, EmFlags& flags, bool with_k, bool with_kmax) {
  if (with_k) cmd->add_option("--k", flags.k, "Number of clusters")->required();
  if (with_kmax) {
    cmd->add_option("--k-max", flags.k_max, "Largest K to scan")->capture_default_str();
  }
  cmd->add_option("--restarts", flags.restarts, "Random restarts per run")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags.seed, "Master RNG seed")
      ->capture_default_str()
      ->envname("SPECEM_SEED");
  cmd->add_option("--tol", flags.tol, "Relative likelihood change for convergence")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", flags.max_iter, "Iteration cap per restart")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--scale", flags.scale,
                  "Likelihood scale: 'auto' (bin count) or a positive number")
      ->capture_default_str();
  cmd->add_option("--mixing-weights", flags.mixing_weights,
                  "Include mixing weights in the E-step")
      ->capture_default_str();
}

specem::EmConfig to_config(const EmFlags& flags) {
  specem::EmConfig cfg;
  cfg.k = flags.k;
  cfg.restarts = flags.restarts;
  cfg.seed = flags.seed;
  cfg.tol = flags.tol;
  cfg.max_iter = flags.max_iter;
  cfg.use_mixing_weights_in_estep = flags.mixing_weights;
  if (flags.scale != "auto") {
    char* end = nullptr;
    const double v = std::strtod(flags.scale.c_str(), &end);
    if (end != flags.scale.c_str() + flags.scale.size() || !(v > 0.0)) {
      throw CLI::ValidationError("--scale", "expected 'auto' or a positive number");
    }
    cfg.likelihood_scale = v;
  }
  return cfg;
}

json config_json(const EmFlags& flags, const specem::EmConfig& cfg, std::size_t bins) {
  json j;
  j["k"] = cfg.k;
  j["restarts"] = cfg.restarts;
  j["seed"] = cfg.seed;
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  j["scale"] = flags.scale;
  j["resolved_scale"] = specem::resolve_scale(cfg, bins);
  j["mixing_weights"] = cfg.use_mixing_weights_in_estep;
  return j;
}

void write_sibling_manifest(const std::string& out_path, const specem::RunManifest& manifest) {
  specem::write_json_file(out_path + ".manifest.json", specem::manifest_to_json(manifest));
}

// Confusion matrix: rows are true classes, columns are clusters.
std::vector<std::vector<std::size_t>> confusion(const std::vector<std::size_t>& truth,
                                                const std::vector<std::size_t>& assigned,
                                                std::size_t n_classes, std::size_t n_clusters) {
  std::vector<std::vector<std::size_t>> m(n_classes, std::vector<std::size_t>(n_clusters, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) m[truth[i]][assigned[i]]++;
  return m;
}

double class_purity(const std::vector<std::size_t>& row) {
  std::size_t total = 0, best = 0;
  for (std::size_t v : row) {
    total += v;
    best = std::max(best, v);
  }
  return total ? static_cast<double>(best) / static_cast<double>(total) : 0.0;
}

int cmd_periodogram(const std::string& input, const std::string& out) {
  const specem::TimeSeriesSet set = specem::read_series_csv(input);
  const auto spectra = specem::periodograms(set);
  specem::write_spectra_csv(out, set.labels, spectra);

  specem::RunManifest manifest;
  manifest.command = "periodogram";
  manifest.config = json{{"out", out}};
  manifest.add_input(input);
  write_sibling_manifest(out, manifest);
  std::cout << "wrote " << spectra.size() << " periodograms (" << spectra.front().bins()
            << " bins) to " << out << "\n";
  return 0;
}

int cmd_cluster(const std::string& input, const EmFlags& flags, const std::string& out) {
  const specem::EmConfig cfg = to_config(flags);
  const specem::TimeSeriesSet set = specem::read_series_csv(input);
  const auto pmfs = specem::pmf_spectra(set);
  const specem::EmResult result = specem::run_em(pmfs, cfg);

  specem::RunManifest manifest;
  manifest.command = "cluster";
  manifest.config = config_json(flags, cfg, pmfs.front().bins());
  manifest.add_input(input);
  specem::write_json_file(out, specem::cluster_result_to_json(result, set.labels, manifest));
  std::cout << "k=" << cfg.k << " loglik=" << result.state.loglik
            << (result.converged ? " (converged)" : " (iteration cap)") << " -> " << out << "\n";
  return 0;
}

int cmd_select_k(const std::string& input, const EmFlags& flags, const std::string& out,
                 const std::string& out_csv) {
  const specem::EmConfig cfg = to_config(flags);
  const specem::TimeSeriesSet set = specem::read_series_csv(input);
  const auto pmfs = specem::pmf_spectra(set);
  const specem::SelectionReport report = specem::select_k(pmfs, flags.k_max, cfg);

  specem::RunManifest manifest;
  manifest.command = "select-k";
  manifest.config = config_json(flags, cfg, pmfs.front().bins());
  manifest.config["k_max"] = flags.k_max;
  manifest.add_input(input);
  specem::write_json_file(out, specem::selection_report_to_json(report, manifest));
  if (!out_csv.empty()) {
    specem::write_selection_csv(out_csv, report);
    write_sibling_manifest(out_csv, manifest);
  }
  if (report.recommended_k) {
    std::cout << "recommended K = " << *report.recommended_k;
    if (report.elbow_k) std::cout << " (elbow " << *report.elbow_k << ")";
    if (report.nec_global_min) std::cout << " (NEC global min " << *report.nec_global_min << ")";
    std::cout << "\n";
  }
  return 0;
}

int cmd_detect_spikes(const std::string& input, const specem::DetectorConfig& det,
                      const std::string& out_catalog, const std::string& out_onsets) {
  const specem::Recording rec = specem::read_recording(input);
  specem::SpikeCatalog catalog = specem::detect_spikes(rec, det);
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "spike_%05zu", i + 1);
    catalog.windows.labels.push_back(name);
  }

  specem::RunManifest manifest;
  manifest.command = "detect-spikes";
  manifest.config = json{{"window", det.window_len},
                         {"tol", det.tol},
                         {"min_separation", det.separation()},
                         {"align_index", det.peak_index()},
                         {"abs_peak", det.use_abs_peak}};
  manifest.add_input(input);
  specem::write_series_csv(out_catalog, catalog.windows);
  write_sibling_manifest(out_catalog, manifest);
  specem::write_onsets_csv(out_onsets, catalog);
  write_sibling_manifest(out_onsets, manifest);
  std::cout << "detected " << catalog.size() << " spikes\n";
  return 0;
}

int cmd_gmm_slowness(const std::string& input, std::size_t k_max, std::size_t restarts,
                     std::uint64_t seed, const std::string& out) {
  const specem::TimeSeriesSet spikes = specem::read_series_csv(input);
  std::vector<double> features;
  features.reserve(spikes.size());
  for (const auto& w : spikes.series) features.push_back(std::log(specem::slowness(w)));

  std::optional<specem::Gmm1dModel> best;
  std::vector<std::pair<std::size_t, double>> scan;
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (features.size() < 2 * k) break;
    try {
      specem::Gmm1dModel model = specem::fit_gmm1d(features, k, restarts, seed);
      scan.emplace_back(k, model.bic);
      if (!best || model.bic > best->bic) best = std::move(model);
    } catch (const specem::DegenerateComponent&) {
      // too many components for this feature set; skip this K
    }
  }
  if (!best) throw specem::DegenerateRun("gmm-slowness: no component count could be fitted");

  specem::RunManifest manifest;
  manifest.command = "gmm-slowness";
  manifest.config =
      json{{"k_max", k_max}, {"restarts", restarts}, {"seed", seed}};
  manifest.add_input(input);
  const auto assignments = specem::gmm_assign(*best, features);
  specem::write_json_file(out,
                          specem::gmm_result_to_json(*best, features, assignments, scan, manifest));
  std::cout << "best K = " << best->components() << " (BIC " << best->bic << ") -> " << out
            << "\n";
  return 0;
}

int cmd_simulate(const std::string& spec_path, const std::string& out,
                 const std::string& labels_out, std::optional<std::uint64_t> seed_override) {
  specem::SimSpec spec = specem::sim_spec_from_json(specem::read_json_file(spec_path));
  if (seed_override) spec.seed = *seed_override;
  const specem::LabeledSet data = specem::generate(spec);
  specem::write_series_csv(out, data.set);

  specem::RunManifest manifest;
  manifest.command = "simulate";
  manifest.config = specem::sim_spec_to_json(spec);
  manifest.add_input(spec_path);
  write_sibling_manifest(out, manifest);

  if (!labels_out.empty()) {
    std::ofstream lout(labels_out);
    if (!lout) throw specem::Error("cannot write file: " + labels_out);
    lout << "series,class_index,class_name\n";
    for (std::size_t i = 0; i < data.set.size(); ++i) {
      lout << data.set.labels[i] << ',' << data.labels[i] << ','
           << data.class_names[data.labels[i]] << '\n';
    }
    write_sibling_manifest(labels_out, manifest);
  }
  std::cout << "simulated " << data.set.size() << " series of length " << data.set.length()
            << "\n";
  return 0;
}

int cmd_simulate_recording(const std::string& spec_path, const std::string& out,
                           const std::string& truth_out,
                           std::optional<std::uint64_t> seed_override) {
  specem::RecordingSpec spec =
      specem::recording_spec_from_json(specem::read_json_file(spec_path));
  if (seed_override) spec.seed = *seed_override;
  const specem::SyntheticRecording synth = specem::realize(spec);
  specem::write_recording_csv(out, synth.recording);

  specem::RunManifest manifest;
  manifest.command = "simulate-recording";
  manifest.config = json{{"length", spec.length},
                         {"noise_sd", spec.noise_sd},
                         {"seed", spec.seed},
                         {"templates", spec.templates.size()},
                         {"spikes", synth.truth.size()}};
  manifest.add_input(spec_path);
  write_sibling_manifest(out, manifest);

  if (!truth_out.empty()) {
    std::ofstream tout(truth_out);
    if (!tout) throw specem::Error("cannot write file: " + truth_out);
    tout << "onset,template_id\n";
    for (const auto& t : synth.truth) tout << t.onset << ',' << t.template_id << '\n';
    write_sibling_manifest(truth_out, manifest);
  }
  std::cout << "recording of " << synth.recording.length() << " samples with "
            << synth.truth.size() << " spikes\n";
  return 0;
}

int cmd_repro_sim4(std::uint64_t seed, std::size_t restarts, const std::string& out) {
  const specem::SimSpec spec = specem::five_class_benchmark(100, 50, seed);
  const specem::LabeledSet data = specem::generate(spec);
  const auto pmfs = specem::pmf_spectra(data.set);

  specem::EmConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;

  const specem::SelectionReport report = specem::select_k(pmfs, 6, cfg);
  cfg.k = 5;
  const specem::EmResult result = specem::run_em(pmfs, cfg);

  const std::size_t n_classes = spec.classes.size();
  const auto matrix = confusion(data.labels, result.hard_assignment, n_classes, 5);

  std::cout << "log-likelihood by K:";
  for (const auto& rec : report.records) {
    if (rec.loglik) std::cout << "  K=" << rec.k << ": " << *rec.loglik;
  }
  std::cout << "\n";
  if (report.elbow_k) std::cout << "elbow at K = " << *report.elbow_k << "\n";
  if (report.nec_global_min) {
    std::cout << "NEC global minimum at K = " << *report.nec_global_min << "\n";
  }
  std::cout << "confusion matrix at K = 5 (rows: truth, cols: clusters)\n";
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::printf("%-12s", data.class_names[c].c_str());
    for (std::size_t k = 0; k < 5; ++k) std::printf(" %5zu", matrix[c][k]);
    std::printf("   purity %.3f\n", class_purity(matrix[c]));
  }

  if (!out.empty()) {
    specem::RunManifest manifest;
    manifest.command = "repro-sim4";
    manifest.config = json{{"seed", seed}, {"restarts", restarts}, {"k", 5}, {"k_max", 6}};
    json j;
    j["manifest"] = specem::manifest_to_json(manifest);
    j["class_names"] = data.class_names;
    j["confusion"] = matrix;
    json purities = json::array();
    for (std::size_t c = 0; c < n_classes; ++c) purities.push_back(class_purity(matrix[c]));
    j["class_purity"] = purities;
    j["selection"] = specem::selection_report_to_json(report, manifest);
    j["loglik"] = result.state.loglik;
    specem::write_json_file(out, j);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-domain EM clustering of short time series"};
  app.require_subcommand(1);

  // periodogram
  std::string pg_in, pg_out;
  auto* pg = app.add_subcommand("periodogram", "Per-series raw periodogram table");
  pg->add_option("input", pg_in, "Series CSV")->required();
  pg->add_option("--out", pg_out, "Output CSV")->required();

  // cluster
  std::string cl_in, cl_out = "result.json";
  EmFlags cl_flags;
  auto* cl = app.add_subcommand("cluster", "Run the spectral EM at a fixed K");
  cl->add_option("input", cl_in, "Series CSV")->required();
  add_em_options(cl, cl_flags, true, false);
  cl->add_option("--out", cl_out, "Result JSON")->capture_default_str();

  // select-k
  std::string sk_in, sk_out = "selection.json", sk_csv;
  EmFlags sk_flags;
  auto* sk = app.add_subcommand("select-k", "Scan K = 1..k_max and score NEC / elbow");
  sk->add_option("input", sk_in, "Series CSV")->required();
  add_em_options(sk, sk_flags, false, true);
  sk->add_option("--out", sk_out, "Report JSON")->capture_default_str();
  sk->add_option("--out-csv", sk_csv, "Plot-ready K,loglik,nec CSV");

  // detect-spikes
  std::string ds_in, ds_catalog = "spikes.csv", ds_onsets = "onsets.csv";
  specem::DetectorConfig det;
  long long ds_align = -1;
  auto* ds = app.add_subcommand("detect-spikes", "Slowness-threshold spike extraction");
  ds->add_option("input", ds_in, "Recording CSV")->required();
  ds->add_option("--window", det.window_len, "Spike window length")->capture_default_str();
  ds->add_option("--tol", det.tol, "Slowness threshold")->capture_default_str();
  ds->add_option("--min-separation", det.min_separation,
                 "Minimum gap between onsets (0: window/2)")->capture_default_str();
  ds->add_option("--align-index", ds_align, "Peak position in the window (-1: window/2)")
      ->capture_default_str();
  ds->add_flag("--abs-peak", det.use_abs_peak, "Align on |x - mean| peaks");
  ds->add_option("--out-catalog", ds_catalog, "Aligned windows CSV")->capture_default_str();
  ds->add_option("--out-onsets", ds_onsets, "Onset,slowness CSV")->capture_default_str();

  // gmm-slowness
  std::string gs_in, gs_out = "gmm.json";
  std::size_t gs_kmax = 10, gs_restarts = 100;
  std::uint64_t gs_seed = 0;
  auto* gs = app.add_subcommand("gmm-slowness", "GMM + BIC scan on log-slowness features");
  gs->add_option("input", gs_in, "Spike windows CSV")->required();
  gs->add_option("--k-max", gs_kmax, "Largest component count")->capture_default_str();
  gs->add_option("--restarts", gs_restarts, "EM restarts per K")->capture_default_str();
  gs->add_option("--seed", gs_seed, "Master RNG seed")
      ->capture_default_str()
      ->envname("SPECEM_SEED");
  gs->add_option("--out", gs_out, "Result JSON")->capture_default_str();

  // simulate
  std::string sm_spec, sm_out = "data.csv", sm_labels;
  std::optional<std::uint64_t> sm_seed;
  auto* sm = app.add_subcommand("simulate", "Draw a labeled family of series");
  sm->add_option("--spec", sm_spec, "Simulation spec JSON")->required();
  sm->add_option("--out", sm_out, "Series CSV")->capture_default_str();
  sm->add_option("--labels", sm_labels, "Truth labels CSV");
  sm->add_option("--seed", sm_seed, "Override the spec seed")->envname("SPECEM_SEED");

  // simulate-recording
  std::string sr_spec, sr_out = "recording.csv", sr_truth;
  std::optional<std::uint64_t> sr_seed;
  auto* sr = app.add_subcommand("simulate-recording", "Embed spike templates into noise");
  sr->add_option("--spec", sr_spec, "Recording spec JSON")->required();
  sr->add_option("--out", sr_out, "Recording CSV")->capture_default_str();
  sr->add_option("--truth", sr_truth, "Ground-truth onsets CSV");
  sr->add_option("--seed", sr_seed, "Override the spec seed")->envname("SPECEM_SEED");

  // repro-sim4
  std::uint64_t rs_seed = 0;
  std::size_t rs_restarts = 10;
  std::string rs_out;
  auto* rs = app.add_subcommand("repro-sim4",
                                "Five-class benchmark: simulate, select K, cluster at K=5");
  rs->add_option("--seed", rs_seed, "Master RNG seed")
      ->capture_default_str()
      ->envname("SPECEM_SEED");
  rs->add_option("--restarts", rs_restarts, "EM restarts")->capture_default_str();
  rs->add_option("--out", rs_out, "Summary JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (pg->parsed()) return cmd_periodogram(pg_in, pg_out);
    if (cl->parsed()) return cmd_cluster(cl_in, cl_flags, cl_out);
    if (sk->parsed()) return cmd_select_k(sk_in, sk_flags, sk_out, sk_csv);
    if (ds->parsed()) {
      det.align_index = static_cast<std::ptrdiff_t>(ds_align);
      return cmd_detect_spikes(ds_in, det, ds_catalog, ds_onsets);
    }
    if (gs->parsed()) return cmd_gmm_slowness(gs_in, gs_kmax, gs_restarts, gs_seed, gs_out);
    if (sm->parsed()) return cmd_simulate(sm_spec, sm_out, sm_labels, sm_seed);
    if (sr->parsed()) return cmd_simulate_recording(sr_spec, sr_out, sr_truth, sr_seed);
    if (rs->parsed()) return cmd_repro_sim4(rs_seed, rs_restarts, rs_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const specem::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
