#include "specem/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "specem/spectral.hpp"

namespace specem {

double classification_entropy(const std::vector<std::vector<double>>& gamma) {
  double e = 0.0;
  for (const auto& row : gamma) {
    for (double g : row) {
      if (g <= kPmfFloor) continue;
      e -= g * std::log(g);
    }
  }
  return std::max(e, 0.0);
}

double nec(double e_k, double loglik_k, double loglik_1) {
  const double denom = loglik_k - loglik_1;
  if (!(denom > 0.0)) {
    throw UndefinedNEC("nec: l*(K) does not exceed l(1)");
  }
  return e_k / denom;
}

std::size_t elbow(const std::vector<double>& logliks) {
  if (logliks.size() < 3) throw TooFewPoints("elbow: need at least 3 likelihood values");
  std::size_t best_k = 2;
  double best_drop = -std::numeric_limits<double>::infinity();
  // K is 1-based; interior K have both neighbours on the grid.
  for (std::size_t k = 2; k + 1 <= logliks.size(); ++k) {
    const double gain_in = logliks[k - 1] - logliks[k - 2];
    const double gain_out = logliks[k] - logliks[k - 1];
    const double drop = gain_in - gain_out;
    if (drop > best_drop) {
      best_drop = drop;
      best_k = k;
    }
  }
  return best_k;
}

SelectionReport select_k(const std::vector<Spectrum>& pmfs, std::size_t k_max,
                         const EmConfig& base) {
  if (k_max < 2) throw std::invalid_argument("select_k: k_max must be >= 2");

  SelectionReport report;
  report.records.reserve(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) {
    SelectionRecord rec;
    rec.k = k;
    EmConfig cfg = base;
    cfg.k = k;
    try {
      const EmResult res = run_em(pmfs, cfg);
      rec.loglik = res.state.loglik;
      rec.entropy = classification_entropy(res.state.gamma);
    } catch (const Error& e) {
      rec.error = e.what();
    }
    report.records.push_back(std::move(rec));
  }

  const auto& records = report.records;
  const std::optional<double> l1 = records.front().loglik;
  if (l1) {
    for (auto& rec : report.records) {
      if (rec.k < 2 || !rec.loglik || !rec.entropy) continue;
      try {
        rec.nec = nec(*rec.entropy, *rec.loglik, *l1);
      } catch (const UndefinedNEC&) {
        // left unset; a flat likelihood gives no NEC value for this K
      }
    }
  }

  std::optional<double> best_nec;
  for (const auto& rec : records) {
    if (!rec.nec) continue;
    if (!best_nec || *rec.nec < *best_nec) {
      best_nec = rec.nec;
      report.nec_global_min = rec.k;
    }
  }
  for (std::size_t idx = 1; idx + 1 < records.size(); ++idx) {
    const auto& prev = records[idx - 1];
    const auto& cur = records[idx];
    const auto& next = records[idx + 1];
    if (!prev.nec || !cur.nec || !next.nec) continue;
    if (*cur.nec < *prev.nec && *cur.nec < *next.nec) {
      report.nec_local_minima.push_back(cur.k);
    }
  }

  // Elbow over the contiguous prefix of successful runs.
  std::vector<double> curve;
  for (const auto& rec : records) {
    if (!rec.loglik) break;
    curve.push_back(*rec.loglik);
  }
  if (curve.size() >= 3) report.elbow_k = elbow(curve);

  if (report.elbow_k) {
    report.recommended_k = report.elbow_k;
    for (std::size_t k : report.nec_local_minima) {
      if (k >= *report.elbow_k) {
        report.recommended_k = k;
        break;
      }
    }
  }
  return report;
}

SelectionReport select_k(const TimeSeriesSet& data, std::size_t k_max, const EmConfig& base) {
  return select_k(pmf_spectra(data), k_max, base);
}

}  // namespace specem
