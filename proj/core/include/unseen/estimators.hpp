#ifndef UNSEEN_ESTIMATORS_HPP
#define UNSEEN_ESTIMATORS_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unseen/estimate.hpp"
#include "unseen/frequency_table.hpp"
#include "unseen/numerics.hpp"

namespace unseen::estimators {

// ---------------------------------------------------------------------------
// Unseen-count estimators and bounds
// ---------------------------------------------------------------------------

// n1^2 / (2 n2): lower bound for the unseen count under rate heterogeneity,
// exact at expectation level under a shared rate. Requires n2 > 0.
Estimate ambartsumian_unseen(const FrequencyTable& table);

// Two-sided bounds n1^2/(2 n2) <= n0 <= n1^2/n2; the upper value is exactly
// twice the lower one.
std::pair<Estimate, Estimate> ambartsumian_bounds(const FrequencyTable& table);

// Robust family n0 = c * n_k n_l / n_{k+l} with c = 1 / C(k+l, k), the unique
// constant that makes the estimator exact under a homogeneous Poisson law.
// (1,1) reproduces ambartsumian_unseen bit for bit. Requires n_{k+l} > 0.
Estimate robust_pair(const FrequencyTable& table, int k, int l);

// Mean per-subject rate 2 n2 / n1, the MLE for a Poisson truncated to
// k in {1, 2}. Requires n1 > 0.
Estimate mean_rate(const FrequencyTable& table);

// ---------------------------------------------------------------------------
// Variance formulas for the Chao-style total and unseen count
// ---------------------------------------------------------------------------

struct VarianceEstimate {
  double value = 0.0;   // clamped at 0 when the formula goes negative
  double raw = 0.0;     // unclamped formula value
  bool out_of_range = false;
};

// Variance of N-hat = n1^2/(2 n2) + N1. The printed formula subtracts
// correction terms and can go negative on extreme tables; that case is
// flagged, not hidden. Requires n2 > 0 and N1 > 0.
VarianceEstimate chao_variance_total(const FrequencyTable& table);

// Variance of the unseen-count estimate n1^2/(2 n2).
VarianceEstimate chao_variance_unseen(const FrequencyTable& table);

// ---------------------------------------------------------------------------
// Total-population estimators
// ---------------------------------------------------------------------------

struct MleResult {
  Estimate rate;   // nu*t solving x/(1-e^{-x}) = n/N1
  Estimate total;  // N = N1 / (1 - e^{-nu t}), always >= N1
};

// Zero-truncated Poisson maximum-likelihood estimate of the rate and total.
// Requires n > N1 (at least one subject seen twice); n == N1 is degenerate.
MleResult mle_total(const FrequencyTable& table,
                    const numerics::RootConfig& config = {});

// Truncation-point-a moment estimator of the unseen count,
// n0 = n1 * (sum_{k>=a+1} n_k) / (sum_{k>=a+2} k n_k); lower bound under
// heterogeneity. a = 0 gives n1*N1/(n - n1).
Estimate plackett_unseen(const FrequencyTable& table, int a = 0);

// Companion total for a = 0: N = N1 * n / (n - n1).
Estimate plackett_total(const FrequencyTable& table);

// Occupancy-ratio total N = S(n, N1) / S(n-1, N1) built on Stirling numbers
// of the second kind. Requires integer counts and n > N1.
Estimate stirling_total(const FrequencyTable& table);

// N = N1 / (1 - e^{-<vt>}) with <vt> = 2 n2/n1 for summation_limit = 1 (the
// conventional form) or sum_{k=1..l}(k+1) n_{k+1} / sum_{k=1..l} n_k in
// general; upper bound under realistic heterogeneity conditions.
Estimate zelterman_total(const FrequencyTable& table, int summation_limit = 1);

// ---------------------------------------------------------------------------
// Good-Turing smoothing
// ---------------------------------------------------------------------------

struct GoodTuringResult {
  double unseen_mass = 0.0;            // p0 = n1 / n
  std::map<int, double> adjusted;      // pi_k = (k+1) n_{k+1} / (n n_k)
  // p0 + sum_k n_k pi_k, evaluated with the n_k factors cancelled so the
  // conservation identity survives tables with gaps in their support.
  double total_mass = 0.0;
};

// Requires n > 0. pi_k is 0 where n_k == 0 or n_{k+1} is absent.
GoodTuringResult good_turing(const FrequencyTable& table);

// ---------------------------------------------------------------------------
// Heterogeneity diagnostic
// ---------------------------------------------------------------------------

struct HeterogeneityDiagnostic {
  // (k, k * n_k / n_{k-1}) for each k >= 2 with n_{k-1} > 0, ascending k.
  std::vector<std::pair<int, double>> ratios;
  // Least-squares slope of the ratios against k. Every element estimates the
  // same rate under a shared-rate Poisson law, so a positive slope flags
  // heterogeneity. A diagnostic, not a hypothesis test.
  double trend = 0.0;
};

// Requires at least two computable elements.
HeterogeneityDiagnostic heterogeneity_sequence(const FrequencyTable& table);

// ---------------------------------------------------------------------------
// Registry and the run-everything report
// ---------------------------------------------------------------------------

struct RegisteredEstimator {
  std::string id;
  Target target;
  Bound bound;
  std::function<Estimate(const FrequencyTable&)> run;
};

// All estimators invocable by id, ascending by id. Ids are stable CLI-facing
// strings ("ambartsumian-lower", "chao-total", "mle-total", ...).
const std::vector<RegisteredEstimator>& registry();

// Resolve an id or alias ("chao", "plackett", "zelterman", "good-turing").
// Returns nullptr for unknown ids.
const RegisteredEstimator* find_estimator(std::string_view id);

std::vector<std::string> estimator_ids();

struct ApplicabilityNote {
  std::string estimator;
  std::string reason;
};

struct EstimatorReport {
  std::vector<Estimate> estimates;  // ordered by estimator id
  std::vector<ApplicabilityNote> inapplicable;
  std::optional<HeterogeneityDiagnostic> heterogeneity;
  // input echo
  double subjects = 0.0;
  double events = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
  double n3 = 0.0;
};

// Run every registered estimator (or the requested subset), recording blocked
// ones with their reasons. Never throws for table-content reasons.
EstimatorReport estimate_all(const FrequencyTable& table);
EstimatorReport estimate_all(const FrequencyTable& table,
                             const std::vector<std::string>& ids);

}  // namespace unseen::estimators

#endif
