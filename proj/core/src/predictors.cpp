#include "unseen/predictors.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "unseen/errors.hpp"
#include "unseen/estimators.hpp"

namespace unseen::predictors {

namespace {

void check_horizon_and_time(double horizon, double t) {
  if (!(horizon > 0) || !std::isfinite(horizon))
    throw DomainError("projection horizon must be positive and finite");
  if (!(t > 0) || !std::isfinite(t))
    throw DomainError("projection time must be positive and finite");
}

// C(k, r) q^r (1-q)^{k-r}, the thinning weight. Exact integer binomial while
// it fits a double, log-gamma with explicit sign handling beyond (the combined
// weight stays bounded long after C(k, r) alone overflows).
double thinning_weight(int k, int r, double q) {
  if (k <= 50) {
    double c = 1.0;
    for (int i = 1; i <= std::min(r, k - r); ++i)
      c = c * static_cast<double>(k - std::min(r, k - r) + i) / i;
    return c * std::pow(q, r) * std::pow(1.0 - q, k - r);
  }
  const double log_c = std::lgamma(k + 1.0) - std::lgamma(r + 1.0) -
                       std::lgamma(k - r + 1.0);
  double log_mag = log_c + r * std::log(q);
  double sign = 1.0;
  if (k > r) {
    const double rest = 1.0 - q;
    log_mag += (k - r) * std::log(std::abs(rest));
    if (rest < 0 && (k - r) % 2 != 0) sign = -1.0;
  }
  return sign * std::exp(log_mag);
}

// Shortest decimal that round-trips to the same double.
std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

}  // namespace

Projection mnatsakanian_project(const FrequencyTable& table_at_horizon,
                                double horizon, double t, int r_max) {
  check_horizon_and_time(horizon, t);
  if (r_max < 0) r_max = table_at_horizon.max_multiplicity();

  Projection out;
  out.unstable_extrapolation = t > 2.0 * horizon;

  const double q = t / horizon;
  if (q == 1.0) {
    // binomial thinning with success probability 1 is the identity
    out.expected[0] = 0.0;
    for (int r = 1; r <= r_max; ++r) out.expected[r] = table_at_horizon.count(r);
    return out;
  }

  for (int r = 0; r <= r_max; ++r) {
    double sum = 0.0;
    for (const auto& [k, count] : table_at_horizon.entries()) {
      if (k < r || count == 0.0) continue;
      sum += count * thinning_weight(k, r, q);
    }
    out.expected[r] = sum;
  }
  return out;
}

PredictedValue unseen_at(const FrequencyTable& table_at_horizon, double horizon,
                         double t) {
  check_horizon_and_time(horizon, t);
  const double rest = 1.0 - t / horizon;
  double sum = 0.0;
  for (const auto& [k, count] : table_at_horizon.entries())
    sum += count * std::pow(rest, k);
  return {sum, t > 2.0 * horizon};
}

PredictedValue efron_thisted_new(const FrequencyTable& table, double horizon,
                                 double tau) {
  if (!(tau >= 0) || !std::isfinite(tau))
    throw DomainError("prediction window must be non-negative and finite");
  if (tau == 0.0) return {0.0, false};
  // the alternating series is -unseen_at continued past the horizon
  PredictedValue at = unseen_at(table, horizon, horizon + tau);
  return {-at.value, at.unstable_extrapolation};
}

SolowPolaskyResult solow_polasky_new(const FrequencyTable& table, long long m) {
  if (m < 0) throw DomainError("number of further events must be >= 0");
  const double n1 = table.count(1);
  const double n2 = table.count(2);
  const double events = table.events();
  if (!(n1 > 0)) throw InapplicableError("solow-polasky", "n1 = 0");
  if (!(n2 > 0)) throw InapplicableError("solow-polasky", "n2 = 0");

  const double base = n1 * n1 / (2.0 * n2);
  const double x = 2.0 * n2 / (n1 * events);

  SolowPolaskyResult out;
  out.simplification_regime = static_cast<double>(m) < events * n1 / (2.0 * n2);
  out.simplified = static_cast<double>(m) * n1 / events;

  if (m <= 64) {
    // factored geometric form base * x * sum_j (1-x)^j; x cancels into n1/n,
    // which makes the m = 1 value n1/n to the last bit
    double sum = 0.0;
    for (long long j = m - 1; j >= 0; --j) sum = 1.0 + (1.0 - x) * sum;
    out.value = n1 / events * sum;
  } else if (x < 1.0) {
    out.value = base * -std::expm1(static_cast<double>(m) * std::log1p(-x));
  } else if (x <= 2.0) {
    const double mag = std::exp(static_cast<double>(m) * std::log(x - 1.0));
    const double sign = m % 2 == 0 ? 1.0 : -1.0;
    out.value = base * (1.0 - sign * mag);
  } else {
    throw DomainError("expected-new-subjects series diverges for this table");
  }
  return out;
}

PredictionCurve estimate_curve(const EventLog& log, const std::vector<double>& grid,
                               std::string_view estimator_id) {
  const estimators::RegisteredEstimator* entry =
      estimators::find_estimator(estimator_id);
  if (entry == nullptr)
    throw DomainError("unknown estimator id: " + std::string(estimator_id));
  if (grid.empty()) throw DomainError("replay grid is empty");

  double prev = 0.0;
  for (double t : grid) {
    if (!(t > prev)) throw DomainError("replay grid must be strictly increasing");
    if (!(t <= log.horizon()))
      throw DomainError("replay grid exceeds the log horizon");
    prev = t;
  }

  PredictionCurve curve;
  curve.axis = PredictionCurve::Axis::time;
  curve.reference = log.horizon();
  for (double t : grid) {
    const FrequencyTable table = from_events(log, t);
    try {
      curve.points.push_back({t, entry->run(table).value, entry->id});
    } catch (const InapplicableError&) {
    } catch (const DegenerateError&) {
    }
  }
  return curve;
}

void write_curve_csv(const PredictionCurve& curve, std::ostream& out) {
  out << "x,value,estimator\n";
  for (const auto& point : curve.points)
    out << format_double(point.x) << ',' << format_double(point.value) << ','
        << point.estimator << '\n';
}

std::string curve_csv(const PredictionCurve& curve) {
  std::ostringstream out;
  write_curve_csv(curve, out);
  return out.str();
}

}  // namespace unseen::predictors
