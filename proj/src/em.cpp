#include "specem/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "specem/rng.hpp"

namespace specem {

namespace {

constexpr double kClusterMassFloor = 1e-12;
constexpr std::size_t kMaxRescues = 3;

void require_pmf(const Spectrum& s, const char* who) {
  if (s.kind != SpectrumKind::pmf) {
    throw std::invalid_argument(std::string(who) + ": expected a pmf spectrum");
  }
}

void validate_config(const EmConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("EmConfig: k must be >= 1");
  if (cfg.max_iter < 1) throw std::invalid_argument("EmConfig: max_iter must be >= 1");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("EmConfig: tol must be > 0");
  if (cfg.restarts < 1) throw std::invalid_argument("EmConfig: restarts must be >= 1");
  if (cfg.likelihood_scale && !(*cfg.likelihood_scale > 0.0)) {
    throw std::invalid_argument("EmConfig: likelihood_scale must be > 0");
  }
}

std::vector<double> column_means(const std::vector<std::vector<double>>& gamma, std::size_t k) {
  std::vector<double> pi(k, 0.0);
  for (const auto& row : gamma) {
    for (std::size_t c = 0; c < k; ++c) pi[c] += row[c];
  }
  const double n = static_cast<double>(gamma.size());
  for (double& v : pi) v /= n;
  return pi;
}

// Random hard assignment. For K <= N every cluster receives at least one
// series: a shuffled prefix covers the clusters, the remainder is uniform.
std::vector<std::vector<double>> initial_gamma(std::size_t n, std::size_t k,
                                               std::mt19937_64& eng) {
  std::vector<std::vector<double>> gamma(n, std::vector<double>(k, 0.0));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), eng);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t cluster = (r < k) ? r : pick(eng);
    gamma[order[r]][cluster] = 1.0;
  }
  return gamma;
}

struct RestartOutcome {
  bool ok = false;
  EmState state;
  std::vector<double> trace;
  bool converged = false;
};

RestartOutcome run_restart(const std::vector<Spectrum>& pmfs, const EmConfig& cfg,
                           std::uint64_t restart_seed) {
  const std::size_t n = pmfs.size();
  const std::size_t k = cfg.k;
  auto eng = std::mt19937_64(restart_seed);

  EmState st;
  st.gamma = initial_gamma(n, k, eng);
  st.pi = column_means(st.gamma, k);

  std::size_t rescues = 0;
  std::vector<double> trace;

  // M-step with the dead-cluster rescue: hand the emptied cluster the series
  // the current solution explains worst, then retry. The trace restarts after
  // a rescue since the jump is not an EM step.
  auto m_step_rescued = [&]() -> bool {
    for (;;) {
      try {
        st.cluster_spectra = m_step(pmfs, st.gamma);
        return true;
      } catch (const EmptyCluster& dead) {
        if (rescues >= kMaxRescues) return false;
        ++rescues;
        std::size_t worst = 0;
        double worst_max = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
          const double row_max = *std::max_element(st.gamma[i].begin(), st.gamma[i].end());
          if (row_max < worst_max) {
            worst_max = row_max;
            worst = i;
          }
        }
        std::fill(st.gamma[worst].begin(), st.gamma[worst].end(), 0.0);
        st.gamma[worst][dead.cluster] = 1.0;
        st.pi = column_means(st.gamma, k);
        trace.clear();
      }
    }
  };

  if (!m_step_rescued()) return {};
  st.loglik = total_loglik(pmfs, st, cfg);
  trace.push_back(st.loglik);

  bool converged = false;
  for (std::size_t iter = 1; iter < cfg.max_iter; ++iter) {
    EmState next = e_step(pmfs, st, cfg);
    st.gamma = std::move(next.gamma);
    st.pi = std::move(next.pi);
    if (!m_step_rescued()) return {};
    const double prev = trace.empty() ? st.loglik : trace.back();
    st.loglik = total_loglik(pmfs, st, cfg);
    trace.push_back(st.loglik);
    st.iteration = iter;
    if (trace.size() > 1 &&
        std::fabs(st.loglik - prev) <= cfg.tol * std::max(1.0, std::fabs(prev))) {
      converged = true;
      break;
    }
  }

  RestartOutcome out;
  out.ok = true;
  out.state = std::move(st);
  out.trace = std::move(trace);
  out.converged = converged;
  return out;
}

}  // namespace

double log_sum_exp(const std::vector<double>& a) {
  if (a.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(a.begin(), a.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : a) s += std::exp(v - m);
  return m + std::log(s);
}

double kl_divergence(const Spectrum& p, const Spectrum& q) {
  require_pmf(p, "kl_divergence");
  require_pmf(q, "kl_divergence");
  if (!p.same_grid(q)) throw MixedGrids("kl_divergence: spectra on different grids");
  double s = 0.0;
  for (std::size_t j = 0; j < p.bins(); ++j) {
    const double pj = p.power[j];
    if (pj <= 0.0) continue;
    s += pj * (std::log(pj) - std::log(q.power[j]));
  }
  return s;
}

double entropy(const Spectrum& p) {
  require_pmf(p, "entropy");
  double h = 0.0;
  for (double pj : p.power) {
    if (pj <= 0.0) continue;
    h -= pj * std::log(pj);
  }
  return h;
}

double spectral_loglik(const Spectrum& obs, const Spectrum& model, double scale) {
  return -scale * (kl_divergence(obs, model) + entropy(obs));
}

double resolve_scale(const EmConfig& cfg, std::size_t bins) {
  return cfg.likelihood_scale ? *cfg.likelihood_scale : static_cast<double>(bins);
}

EmState e_step(const std::vector<Spectrum>& spectra, const EmState& state, const EmConfig& cfg) {
  const std::size_t n = spectra.size();
  const std::size_t k = state.cluster_spectra.size();
  if (k == 0) throw std::invalid_argument("e_step: state has no cluster spectra");
  const double scale = resolve_scale(cfg, spectra.empty() ? 0 : spectra.front().bins());

  EmState out = state;
  out.gamma.assign(n, std::vector<double>(k, 0.0));
  std::vector<double> logw(k);
  for (std::size_t c = 0; c < k; ++c) {
    logw[c] = cfg.use_mixing_weights_in_estep
                  ? (state.pi[c] > 0.0 ? std::log(state.pi[c])
                                       : -std::numeric_limits<double>::infinity())
                  : 0.0;
  }

  std::vector<double> a(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      a[c] = logw[c] + spectral_loglik(spectra[i], state.cluster_spectra[c], scale);
    }
    const double lse = log_sum_exp(a);
    double row_sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      out.gamma[i][c] = std::exp(a[c] - lse);
      row_sum += out.gamma[i][c];
    }
    for (std::size_t c = 0; c < k; ++c) out.gamma[i][c] /= row_sum;
  }
  out.pi = column_means(out.gamma, k);
  return out;
}

std::vector<Spectrum> m_step(const std::vector<Spectrum>& spectra,
                             const std::vector<std::vector<double>>& gamma) {
  if (spectra.empty()) throw std::invalid_argument("m_step: no spectra");
  if (gamma.size() != spectra.size()) throw std::invalid_argument("m_step: gamma size mismatch");
  const std::size_t k = gamma.front().size();
  std::vector<Spectrum> clusters;
  clusters.reserve(k);
  std::vector<double> weights(spectra.size());
  for (std::size_t c = 0; c < k; ++c) {
    double mass = 0.0;
    for (std::size_t i = 0; i < spectra.size(); ++i) {
      weights[i] = gamma[i][c];
      mass += weights[i];
    }
    if (mass <= kClusterMassFloor) throw EmptyCluster(c);
    clusters.push_back(average_spectra(spectra, weights));
  }
  return clusters;
}

double total_loglik(const std::vector<Spectrum>& spectra, const EmState& state,
                    const EmConfig& cfg) {
  const std::size_t k = state.cluster_spectra.size();
  const double scale = resolve_scale(cfg, spectra.empty() ? 0 : spectra.front().bins());
  std::vector<double> a(k);
  double total = 0.0;
  for (const auto& obs : spectra) {
    for (std::size_t c = 0; c < k; ++c) {
      a[c] = (state.pi[c] > 0.0 ? std::log(state.pi[c])
                                : -std::numeric_limits<double>::infinity()) +
             spectral_loglik(obs, state.cluster_spectra[c], scale);
    }
    total += log_sum_exp(a);
  }
  return total;
}

EmResult run_em(const std::vector<Spectrum>& pmfs, const EmConfig& cfg) {
  validate_config(cfg);
  const std::size_t n = pmfs.size();
  if (n == 0) throw std::invalid_argument("run_em: no series");
  for (const auto& s : pmfs) {
    require_pmf(s, "run_em");
    if (!s.same_grid(pmfs.front())) throw MixedGrids("run_em: spectra on different grids");
  }

  bool any_ok = false;
  EmResult best;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    RestartOutcome outcome = run_restart(pmfs, cfg, mix_seed(cfg.seed, r));
    if (!outcome.ok) continue;
    if (!any_ok || outcome.state.loglik > best.state.loglik) {
      best.state = std::move(outcome.state);
      best.loglik_trace = std::move(outcome.trace);
      best.converged = outcome.converged;
      best.best_restart = r;
      any_ok = true;
    }
  }
  if (!any_ok) {
    throw DegenerateRun("run_em: every restart lost a cluster (is k > N?)");
  }

  best.hard_assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = best.state.gamma[i];
    best.hard_assignment[i] =
        static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return best;
}

EmResult run_em(const TimeSeriesSet& data, const EmConfig& cfg) {
  return run_em(pmf_spectra(data), cfg);
}

}  // namespace specem
