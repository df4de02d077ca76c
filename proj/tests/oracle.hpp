#pragma once

// Brute-force reference implementations, kept independent of the library's
// computation paths. These enumerate rather than derive.

#include <stdexcept>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "cop/metrics.hpp"

namespace coptest {

using cop::CellStats;
using cop::ExtMoney;
using cop::Money;
using cop::Rational;
using cop::StatsTable;
using cop::SuccessMode;

/// pass@k by exhaustive enumeration of all k-subsets of the n attempts.
inline Rational oracle_pass_at_k(std::uint32_t n, std::uint32_t c, std::uint32_t k) {
  // attempts 0..c-1 are the correct ones; order cannot matter
  std::vector<std::uint32_t> idx(k);
  for (std::uint32_t i = 0; i < k; ++i) idx[i] = i;
  long total = 0, with_success = 0;
  while (true) {
    ++total;
    bool any = false;
    for (std::uint32_t i = 0; i < k; ++i)
      if (idx[i] < c) any = true;
    if (any) ++with_success;
    // next combination
    int pos = static_cast<int>(k) - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (std::uint32_t j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return Rational(with_success, total);
}

inline Rational oracle_success_prob(const CellStats& s, SuccessMode mode) {
  const Rational r = Rational(s.n_correct) / Rational(s.n_attempts);
  switch (mode.kind) {
    case SuccessMode::Kind::pass1:
      return r;
    case SuccessMode::Kind::pass_pow_k: {
      Rational acc = 1;
      for (std::uint32_t i = 0; i < mode.k; ++i) acc *= r;
      return acc;
    }
    case SuccessMode::Kind::pass_at_k:
      return oracle_pass_at_k(s.n_attempts, s.n_correct, mode.k);
  }
  return r;
}

inline ExtMoney oracle_cost_of_pass(const CellStats& s, SuccessMode mode, const Money& penalty) {
  const Rational r = oracle_success_prob(s, mode);
  if (r == 0) return ExtMoney::infinity();
  const Rational v = s.mean_cost.value() / r + penalty.value() * (Rational(1) / r - 1);
  return ExtMoney{Money(v)};
}

/// Per-problem exhaustive minimum, then plain mean (INFINITY-absorbing).
inline ExtMoney oracle_frontier_value(const std::vector<std::string>& problems,
                                      const std::vector<std::string>& strategies,
                                      const StatsTable& table, SuccessMode mode,
                                      const Money& penalty) {
  bool any_inf = false;
  Rational sum = 0;
  for (const auto& p : problems) {
    ExtMoney best = ExtMoney::infinity();
    for (const auto& s : strategies) {
      const CellStats* cell = table.find(s, p);
      if (cell == nullptr) throw std::logic_error("oracle: missing cell");
      const ExtMoney v = oracle_cost_of_pass(*cell, mode, penalty);
      if (v < best) best = v;
    }
    if (best.is_infinite())
      any_inf = true;
    else
      sum += best.finite().value();
  }
  if (any_inf) return ExtMoney::infinity();
  return ExtMoney{Money(sum / Rational(static_cast<long>(problems.size())))};
}

/// Gain as two independent frontier computations.
inline ExtMoney oracle_gain(const std::vector<std::string>& new_set,
                            const std::vector<std::string>& base_set,
                            const std::vector<std::string>& problems, const StatsTable& table,
                            SuccessMode mode, const Money& penalty) {
  std::vector<std::string> unioned = base_set;
  for (const auto& s : new_set)
    if (std::find(unioned.begin(), unioned.end(), s) == unioned.end()) unioned.push_back(s);
  // per-problem difference first, then mean, matching the definition
  bool any_inf = false;
  Rational sum = 0;
  for (const auto& p : problems) {
    const ExtMoney a = oracle_frontier_value({p}, base_set, table, mode, penalty);
    const ExtMoney b = oracle_frontier_value({p}, unioned, table, mode, penalty);
    if (a.is_infinite() && b.is_infinite()) continue;  // INF - INF = 0
    if (a.is_infinite()) {
      any_inf = true;
      continue;
    }
    sum += a.finite().value() - b.finite().value();
  }
  if (any_inf) return ExtMoney::infinity();
  return ExtMoney{Money(sum / Rational(static_cast<long>(problems.size())))};
}

/// 1 - V(full)/V(without) with the extended-money ratio conventions.
inline Rational oracle_relative_improvement(const ExtMoney& v_full, const ExtMoney& v_without) {
  if (v_full.is_infinite() && v_without.is_infinite()) return 0;
  if (v_without.is_infinite()) return 1;
  if (v_without.finite().is_zero()) return 0;
  return 1 - v_full.finite().value() / v_without.finite().value();
}

}  // namespace coptest
