#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specem/em.hpp"
#include "specem/types.hpp"

namespace specem {

struct SelectionRecord {
  std::size_t k = 0;
  std::optional<double> loglik;   // best-of-restarts likelihood, absent on failure
  std::optional<double> entropy;  // classification entropy E(K)
  std::optional<double> nec;      // absent for K = 1 and when undefined
  std::string error;              // non-empty when the K-run failed
};

struct SelectionReport {
  std::vector<SelectionRecord> records;  // contiguous K = 1..k_max
  std::optional<std::size_t> nec_global_min;
  std::vector<std::size_t> nec_local_minima;
  std::optional<std::size_t> elbow_k;
  std::optional<std::size_t> recommended_k;
};

// E(K) = -sum_k sum_i gamma_ik ln gamma_ik; entries at or below the pmf floor
// contribute zero, so binary matrices score exactly 0.
double classification_entropy(const std::vector<std::vector<double>>& gamma);

// NEC(K) = E(K) / (l*(K) - l(1)). Throws UndefinedNEC when the denominator is
// not positive.
double nec(double e_k, double loglik_k, double loglik_1);

// Elbow of a likelihood curve indexed by K starting at 1: the interior K with
// the largest drop in incremental gain, ties to the smaller K. Throws
// TooFewPoints for fewer than 3 entries.
std::size_t elbow(const std::vector<double>& logliks);

// Run the EM for K = 1..k_max (same seed schedule for every K), collect
// likelihood / entropy / NEC per K, and combine the NEC and elbow rules into
// a recommendation. Per-K failures are recorded, not propagated.
SelectionReport select_k(const TimeSeriesSet& data, std::size_t k_max, const EmConfig& base);

SelectionReport select_k(const std::vector<Spectrum>& pmfs, std::size_t k_max,
                         const EmConfig& base);

}  // namespace specem
