#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "specem/errors.hpp"
#include "specem/spectral.hpp"
#include "specem/types.hpp"

namespace specem {

struct EmConfig {
  std::size_t k = 1;
  std::size_t max_iter = 500;
  // Relative change of the overall spectral likelihood below which a restart
  // is declared converged.
  double tol = 1e-8;
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
  // Multiplier playing the role of the sample size in the likelihood
  // l = -scale * (KL + H); empty means "number of frequency bins". Acts as a
  // softmax temperature on the responsibilities.
  std::optional<double> likelihood_scale;
  // When false the E-step drops the pi_k factor, reproducing the bare softmax
  // of per-cluster log-likelihoods. The overall likelihood always keeps pi_k.
  bool use_mixing_weights_in_estep = true;
};

struct EmState {
  std::vector<std::vector<double>> gamma;  // N x K responsibilities
  std::vector<double> pi;                  // K mixing weights, N_k / N
  std::vector<Spectrum> cluster_spectra;   // K pmf spectra
  double loglik = 0.0;
  std::size_t iteration = 0;
};

struct EmResult {
  EmState state;
  std::vector<double> loglik_trace;
  bool converged = false;
  std::vector<std::size_t> hard_assignment;
  std::size_t best_restart = 0;
};

// log(sum_i exp(a[i])) with the usual max subtraction. Returns -inf for an
// empty input.
double log_sum_exp(const std::vector<double>& a);

// KL(p || q) = sum_j p_j ln(p_j / q_j), natural log. Both arguments must be
// pmfs on the same grid.
double kl_divergence(const Spectrum& p, const Spectrum& q);

// H(p) = -sum_j p_j ln p_j.
double entropy(const Spectrum& p);

// Spectral log-likelihood of observing `obs` under cluster model `model`:
// l = -scale * (KL(obs || model) + H(obs)), which equals the scaled
// cross-entropy scale * sum_j obs_j ln model_j.
double spectral_loglik(const Spectrum& obs, const Spectrum& model, double scale);

// Responsibility update: gamma[i][k] proportional to
// (pi_k if enabled, else 1) * exp(l_ik), rows renormalized via max
// subtraction; pi is refreshed to the new column means. Cluster spectra are
// taken from `state` and returned untouched.
EmState e_step(const std::vector<Spectrum>& spectra, const EmState& state, const EmConfig& cfg);

// Cluster spectra update: f_k = sum_i gamma[i][k] I_i / N_k. Throws
// EmptyCluster when some column mass N_k is (numerically) zero.
std::vector<Spectrum> m_step(const std::vector<Spectrum>& spectra,
                             const std::vector<std::vector<double>>& gamma);

// Overall spectral likelihood sum_i ln sum_k pi_k exp(l_ik), evaluated with
// log-sum-exp.
double total_loglik(const std::vector<Spectrum>& spectra, const EmState& state,
                    const EmConfig& cfg);

// Full algorithm on cached pmf spectra: seeded random hard initialization,
// alternate gamma/spectra updates until the likelihood settles, best restart
// wins. Deterministic for a given config.
EmResult run_em(const std::vector<Spectrum>& pmfs, const EmConfig& cfg);

// Convenience entry: standardize -> periodogram -> pmf once, then cluster.
EmResult run_em(const TimeSeriesSet& data, const EmConfig& cfg);

// Effective likelihood scale for a given bin count.
double resolve_scale(const EmConfig& cfg, std::size_t bins);

}  // namespace specem
