#include "cop/stats.hpp"

#include <algorithm>
#include <cmath>

#include "cop/errors.hpp"
#include "cop/pricing.hpp"

namespace cop {

namespace {

struct Params {
  double a, b, c;
};

double model(const Params& p, double t) { return p.a * std::exp(-p.b * t) + p.c; }

double cost_of(const Params& p, const std::vector<std::pair<double, double>>& series) {
  double s = 0;
  for (const auto& [t, y] : series) {
    const double r = model(p, t) - y;
    s += r * r;
  }
  return s;
}

/// Solves the 3x3 system A x = rhs by Gaussian elimination with partial
/// pivoting. Returns false when singular.
bool solve3(double A[3][3], double rhs[3], double x[3]) {
  int idx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(A[idx[r]][col]) > std::fabs(A[idx[pivot]][col])) pivot = r;
    std::swap(idx[col], idx[pivot]);
    const double d = A[idx[col]][col];
    if (std::fabs(d) < 1e-300) return false;
    for (int r = col + 1; r < 3; ++r) {
      const double f = A[idx[r]][col] / d;
      for (int c = col; c < 3; ++c) A[idx[r]][c] -= f * A[idx[col]][c];
      rhs[idx[r]] -= f * rhs[idx[col]];
    }
  }
  for (int row = 2; row >= 0; --row) {
    double s = rhs[idx[row]];
    for (int c = row + 1; c < 3; ++c) s -= A[idx[row]][c] * x[c];
    x[row] = s / A[idx[row]][row];
  }
  return true;
}

/// One Levenberg-Marquardt run from a fixed start. Parameters are clipped to
/// the non-negative orthant after every accepted step.
DecayFit lm_run(Params p, const std::vector<std::pair<double, double>>& series) {
  constexpr int kMaxIter = 200;
  constexpr double kStepTol = 1e-9;
  const std::size_t n = series.size();

  double lambda = 1e-3;
  double current = cost_of(p, series);
  bool converged = false;

  for (int iter = 0; iter < kMaxIter; ++iter) {
    double JtJ[3][3] = {};
    double Jtr[3] = {};
    for (const auto& [t, y] : series) {
      const double e = std::exp(-p.b * t);
      const double r = p.a * e + p.c - y;
      const double J[3] = {e, -p.a * t * e, 1.0};
      for (int i = 0; i < 3; ++i) {
        Jtr[i] += J[i] * r;
        for (int j = 0; j < 3; ++j) JtJ[i][j] += J[i] * J[j];
      }
    }

    bool stepped = false;
    for (int attempt = 0; attempt < 25 && !stepped; ++attempt) {
      double A[3][3];
      double rhs[3] = {-Jtr[0], -Jtr[1], -Jtr[2]};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          A[i][j] = JtJ[i][j] + (i == j ? lambda * (JtJ[i][i] > 0 ? JtJ[i][i] : 1.0) : 0.0);
      double delta[3];
      if (!solve3(A, rhs, delta)) {
        lambda *= 10;
        continue;
      }
      Params trial{std::max(0.0, p.a + delta[0]), std::max(0.0, p.b + delta[1]),
                   std::max(0.0, p.c + delta[2])};
      const double trial_cost = cost_of(trial, series);
      if (trial_cost <= current) {
        const double step = std::sqrt(delta[0] * delta[0] + delta[1] * delta[1] +
                                      delta[2] * delta[2]);
        const double scale =
            std::sqrt(p.a * p.a + p.b * p.b + p.c * p.c) + 1e-12;
        p = trial;
        current = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (step / scale < kStepTol) converged = true;
      } else {
        lambda *= 10;
      }
    }
    if (!stepped) break;  // damping exhausted without progress: not converged
    if (converged) break;
  }

  DecayFit fit;
  fit.a = p.a;
  fit.b = p.b;
  fit.c = p.c;
  fit.residual_norm = std::sqrt(current / static_cast<double>(n));
  fit.converged = converged;
  if (fit.converged && fit.b > 0) fit.half_life_months = std::log(2.0) / fit.b;
  return fit;
}

}  // namespace

DecayFit fit_decay(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 4) throw FitError("fit_decay: need at least 4 points");
  for (const auto& [t, y] : series)
    if (!std::isfinite(t) || !std::isfinite(y))
      throw FitError("fit_decay: series contains a non-finite value");

  auto sorted = series;
  std::sort(sorted.begin(), sorted.end());

  const double y_min = std::min_element(sorted.begin(), sorted.end(), [](auto& l, auto& r) {
                         return l.second < r.second;
                       })->second;
  const double t_span = std::max(sorted.back().first - sorted.front().first, 1e-9);
  const double eps = 1e-9 + 1e-9 * std::fabs(y_min);

  const double c0 = y_min;
  const double a0 = std::max(0.0, sorted.front().second - c0);
  const double b0 = std::max(
      0.0, std::log(std::max(a0, eps) / std::max(sorted.back().second - c0, eps)) / t_span);

  DecayFit best = lm_run({a0, b0, c0}, sorted);
  // The pinned initialization can start with a degenerate decay rate when the
  // series ends at its minimum; two fixed fallback rates cover that case.
  for (double b_alt : {std::log(2.0) / (t_span / 2.0), std::log(2.0) / (t_span / 8.0)}) {
    DecayFit alt = lm_run({a0, b_alt, c0}, sorted);
    if (alt.residual_norm < best.residual_norm) best = alt;
  }
  return best;
}

DecayFit fit_decay(const std::vector<std::pair<double, ExtMoney>>& series) {
  std::vector<std::pair<double, double>> plain;
  plain.reserve(series.size());
  for (const auto& [t, v] : series) {
    if (v.is_infinite())
      throw FitError(
          "fit_decay: series contains INFINITY; truncate to the first finite frontier point");
    plain.emplace_back(t, v.to_double());
  }
  return fit_decay(plain);
}

CellData collect_cell_data(const Registry& registry, const std::string& dataset_id,
                           const std::vector<std::string>& strategies, RateBound expert_bound) {
  CellData data;
  for (const auto& r : registry.attempts) {
    if (r.dataset_id != dataset_id) continue;
    if (std::find(strategies.begin(), strategies.end(), r.strategy_id) == strategies.end())
      continue;
    const Strategy* strat = registry.find_strategy(r.strategy_id);
    if (!strat) throw ConfigError("unknown strategy '" + r.strategy_id + "'");
    const PriceSheet* sheet = registry.find_price_sheet(strat->price_sheet_id);
    if (!sheet) throw ConfigError("missing price sheet '" + strat->price_sheet_id + "'");
    auto& cell = data[{r.strategy_id, r.problem_id}];
    cell.correct.push_back(r.correct);
    cell.costs.push_back(attempt_cost(r, *sheet));
  }
  const ExpertProfile* profile = registry.expert_profile_for(dataset_id);
  for (const auto& id : strategies) {
    const Strategy* strat = registry.find_strategy(id);
    if (!strat || strat->kind != StrategyKind::expert) continue;
    if (!profile)
      throw ConfigError("expert strategy '" + id + "' has no profile for dataset '" +
                        dataset_id + "'");
    const Money c = expert_cost(*profile, expert_bound);
    for (const auto& problem : registry.problem_ids(dataset_id)) {
      auto& cell = data[{id, problem}];
      cell.correct.assign(1, true);
      cell.costs.assign(1, c);
    }
  }
  return data;
}

namespace {

/// Order statistic with exact rational interpolation; infinite neighbors
/// absorb any positive interpolation weight.
ExtMoney percentile(const std::vector<ExtMoney>& sorted, const Rational& q) {
  const std::size_t n = sorted.size();
  const Rational pos = q * Rational(static_cast<long>(n - 1));
  const BigInt lo_big = boost::multiprecision::numerator(pos) /
                        boost::multiprecision::denominator(pos);
  const std::size_t lo = static_cast<std::size_t>(lo_big);
  const Rational frac = pos - Rational(lo_big);
  if (frac == 0 || lo + 1 >= n) return sorted[lo];
  const ExtMoney& a = sorted[lo];
  const ExtMoney& b = sorted[lo + 1];
  if (a.is_infinite() || b.is_infinite()) return ExtMoney::infinity();
  return ExtMoney(a.finite() * (1 - frac) + b.finite() * frac);
}

}  // namespace

BootstrapCI bootstrap_ci(const CellData& cells, const Statistic& statistic,
                         const std::string& label, std::uint32_t n_resamples, double level,
                         std::uint64_t seed) {
  if (level <= 0.0 || level >= 1.0) throw EstimationError("bootstrap_ci: level outside (0,1)");
  if (n_resamples == 0) throw EstimationError("bootstrap_ci: need at least one resample");
  if (cells.empty()) throw EstimationError("bootstrap_ci: no cells");
  for (const auto& [key, cell] : cells)
    if (cell.correct.empty())
      throw EstimationError("bootstrap_ci: empty cell (" + key.first + ", " + key.second + ")");

  // Point estimate on the un-resampled data.
  StatsTable point_table;
  for (const auto& [key, cell] : cells) {
    CellStats s;
    s.strategy_id = key.first;
    s.problem_id = key.second;
    s.n_attempts = static_cast<std::uint32_t>(cell.correct.size());
    Money total(0);
    for (std::size_t i = 0; i < cell.correct.size(); ++i) {
      if (cell.correct[i]) ++s.n_correct;
      total += cell.costs[i];
    }
    s.mean_cost = total / Rational(s.n_attempts);
    point_table.put(std::move(s));
  }
  const ExtMoney point = statistic(point_table);

  std::vector<ExtMoney> values;
  values.reserve(n_resamples);
  for (std::uint32_t r = 0; r < n_resamples; ++r) {
    SplitMix64 rng(derive_seed(seed, r));
    StatsTable table;
    for (const auto& [key, cell] : cells) {
      const std::size_t n = cell.correct.size();
      CellStats s;
      s.strategy_id = key.first;
      s.problem_id = key.second;
      s.n_attempts = static_cast<std::uint32_t>(n);
      Money total(0);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pick = static_cast<std::size_t>(rng.below(n));
        if (cell.correct[pick]) ++s.n_correct;
        total += cell.costs[pick];
      }
      s.mean_cost = total / Rational(static_cast<long>(n));
      table.put(std::move(s));
    }
    values.push_back(statistic(table));
  }
  std::sort(values.begin(), values.end(),
            [](const ExtMoney& a, const ExtMoney& b) { return a < b; });

  const Rational level_r(level);  // exact binary value of the double
  const Rational alpha = (1 - level_r) / 2;

  BootstrapCI ci;
  ci.statistic_label = label;
  ci.level = level;
  ci.n_resamples = n_resamples;
  ci.seed = seed;
  ci.lower = percentile(values, alpha);
  ci.upper = percentile(values, 1 - alpha);
  ci.point = point;
  ci.midpoint = (ci.lower.is_infinite() || ci.upper.is_infinite())
                    ? ExtMoney::infinity()
                    : ExtMoney((ci.lower.finite() + ci.upper.finite()) / Rational(2));
  return ci;
}

}  // namespace cop
