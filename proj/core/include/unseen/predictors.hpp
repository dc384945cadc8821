#ifndef UNSEEN_PREDICTORS_HPP
#define UNSEEN_PREDICTORS_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "unseen/event_log.hpp"
#include "unseen/frequency_table.hpp"

namespace unseen::predictors {

// ---------------------------------------------------------------------------
// Binomial-thinning projection of a frequency table between horizons
// ---------------------------------------------------------------------------

struct Projection {
  // r -> expected n_r(t) for r = 0..r_max. The r = 0 entry is only the
  // increment attributable to subjects already observed at T: the true unseen
  // count at T is unobservable and its term is omitted from the sum, so
  // callers wanting an absolute n_0(t) must add their own estimate of it.
  std::map<int, double> expected;
  // Set beyond t = 2T, where the alternating extrapolation series loses
  // contraction.
  bool unstable_extrapolation = false;
};

// n_r(t) = sum_{k>=max(r,1)} n_k(T) C(k,r) (t/T)^r (1-t/T)^{k-r}.
// Thinning a Poisson process to [0, t] makes each k-event subject binomial
// with success t/T, so at t == T this returns the input table exactly.
// r_max < 0 means "maximum observed multiplicity".
// Requires T > 0 and t > 0; t > T extrapolates via the alternating form.
Projection mnatsakanian_project(const FrequencyTable& table_at_horizon,
                                double horizon, double t, int r_max = -1);

struct PredictedValue {
  double value = 0.0;
  bool unstable_extrapolation = false;
};

// The r = 0 projection on its own: sum_{k>=1} n_k(T) (1 - t/T)^k, the change
// in unseen count attributable to observed subjects. 0 at t == T, negative
// beyond T (subjects expected to leave the unseen class).
PredictedValue unseen_at(const FrequencyTable& table_at_horizon, double horizon,
                         double t);

// Expected number of new subjects in a prediction window of length tau:
// S(tau) = sum_{k>=1} (-1)^{k+1} (tau/T)^k n_k. Equals
// -unseen_at(table, T, T + tau) identically. tau > T is tagged unstable.
PredictedValue efron_thisted_new(const FrequencyTable& table, double horizon,
                                 double tau);

// ---------------------------------------------------------------------------
// Sample-size-based prediction
// ---------------------------------------------------------------------------

struct SolowPolaskyResult {
  double value = 0.0;
  // m < n*n1/(2 n2), the regime where the linear shortcut m*n1/n applies.
  bool simplification_regime = false;
  double simplified = 0.0;  // m * n1 / n
};

// S(m) = n1^2/(2 n2) * [1 - (1 - 2 n2/(n1 n))^m]: expected new subjects after
// m further events. Converges to the Ambartsumian value as m grows. Requires
// n1 > 0 and n2 > 0; m >= 0.
SolowPolaskyResult solow_polasky_new(const FrequencyTable& table, long long m);

// ---------------------------------------------------------------------------
// Replay curves
// ---------------------------------------------------------------------------

struct CurvePoint {
  double x = 0.0;
  double value = 0.0;
  std::string estimator;
};

struct PredictionCurve {
  enum class Axis { time, sample_size };
  Axis axis = Axis::time;
  double reference = 0.0;  // horizon T (time axis) or sample size n
  std::vector<CurvePoint> points;  // strictly increasing x; gaps are absent rows
};

// Rebuild the table at each grid time and apply the named estimator.
// Grid times must be strictly increasing within (0, horizon]. Grid points
// where the estimator is inapplicable become gaps, not errors.
PredictionCurve estimate_curve(const EventLog& log, const std::vector<double>& grid,
                               std::string_view estimator_id);

// CSV form: header "x,value,estimator", one row per non-gap point.
void write_curve_csv(const PredictionCurve& curve, std::ostream& out);
std::string curve_csv(const PredictionCurve& curve);

}  // namespace unseen::predictors

#endif
