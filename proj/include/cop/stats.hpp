#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cop/metrics.hpp"
#include "cop/money.hpp"

namespace cop {

/// Least-squares fit of V(t) ~ a*exp(-b*t) + c with a, b, c >= 0.
struct DecayFit {
  double a = 0;
  double b = 0;
  double c = 0;
  double residual_norm = 0;
  bool converged = false;
  std::optional<double> half_life_months;  // ln(2)/b when b > 0 and converged
};

/// Damped Gauss-Newton with analytic Jacobian; 200 iteration cap, relative
/// step tolerance 1e-9, parameters projected to stay non-negative.
/// Throws FitError on < 4 points or non-finite values.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& series);

/// Convenience wrapper that rejects INFINITY points with an instruction to
/// truncate the series to its first finite frontier value.
DecayFit fit_decay(const std::vector<std::pair<double, ExtMoney>>& series);

struct BootstrapCI {
  std::string statistic_label;
  double level = 0.95;
  ExtMoney lower;
  ExtMoney upper;
  ExtMoney point;     // statistic on the un-resampled data
  ExtMoney midpoint;  // (lower + upper) / 2
  std::uint32_t n_resamples = 0;
  std::uint64_t seed = 0;
};

/// Attempt-level observations for one cell; parallel arrays.
struct CellDraws {
  std::vector<bool> correct;
  std::vector<Money> costs;
};
using CellData = std::map<std::pair<std::string, std::string>, CellDraws>;

using Statistic = std::function<ExtMoney(const StatsTable&)>;

/// Percentile bootstrap: every resample redraws each cell's attempts with
/// replacement (cell sizes preserved) and recomputes the statistic. Resample r
/// derives its randomness from (seed, r) only, so results are deterministic
/// and order-independent.
BootstrapCI bootstrap_ci(const CellData& cells, const Statistic& statistic,
                         const std::string& label, std::uint32_t n_resamples = 10000,
                         double level = 0.95, std::uint64_t seed = 0);

/// Per-cell attempt observations for a dataset, costs priced through each
/// strategy's sheet; expert cells appear as a single deterministic attempt.
CellData collect_cell_data(const Registry& registry, const std::string& dataset_id,
                           const std::vector<std::string>& strategies,
                           RateBound expert_bound = RateBound::high);

/// SplitMix64; the deterministic RNG stream used across the project.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Stream derivation: a child seed statistically independent per (seed, key).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
  SplitMix64 rng(seed ^ (key * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL));
  return rng.next();
}

inline std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace cop
