#include "unseen/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "unseen/errors.hpp"

namespace unseen::estimators {

namespace {

// C(k+l, k), exact in integer arithmetic for the sizes this family meets
double binomial(int k, int l) {
  if (k > l) std::swap(k, l);
  if (k + l <= 62) {
    unsigned long long c = 1;
    for (int i = 1; i <= k; ++i) c = c * static_cast<unsigned long long>(l + i) / i;
    return static_cast<double>(c);
  }
  return std::round(std::exp(std::lgamma(k + l + 1.0) - std::lgamma(k + 1.0) -
                             std::lgamma(l + 1.0)));
}

[[noreturn]] void blocked(const char* id, const std::string& reason) {
  throw InapplicableError(id, reason);
}

}  // namespace

// --- unseen-count estimators -------------------------------------------------

Estimate ambartsumian_unseen(const FrequencyTable& table) {
  const double n1 = table.count(1);
  const double n2 = table.count(2);
  if (!(n2 > 0)) blocked("ambartsumian-lower", "n2 = 0");
  return {"ambartsumian-lower", n1 * n1 / (2.0 * n2), Target::unseen, Bound::lower};
}

std::pair<Estimate, Estimate> ambartsumian_bounds(const FrequencyTable& table) {
  Estimate lower = ambartsumian_unseen(table);
  Estimate upper{"ambartsumian-upper", 2.0 * lower.value, Target::unseen, Bound::upper};
  return {std::move(lower), std::move(upper)};
}

Estimate robust_pair(const FrequencyTable& table, int k, int l) {
  if (k < 1 || l < 1) throw DomainError("robust pair needs multiplicities k, l >= 1");
  const std::string id = "robust-" + std::to_string(std::min(k, l)) + "-" +
                         std::to_string(std::max(k, l));
  const double denom = table.count(k + l);
  if (!(denom > 0)) throw InapplicableError(id, "n" + std::to_string(k + l) + " = 0");
  const double value = table.count(k) * table.count(l) / (binomial(k, l) * denom);
  return {id, value, Target::unseen, Bound::lower};
}

Estimate mean_rate(const FrequencyTable& table) {
  const double n1 = table.count(1);
  if (!(n1 > 0)) blocked("mean-rate", "n1 = 0");
  return {"mean-rate", 2.0 * table.count(2) / n1, Target::rate, Bound::point};
}

// --- variance formulas --------------------------------------------------------

VarianceEstimate chao_variance_total(const FrequencyTable& table) {
  const double n1 = table.count(1);
  const double n2 = table.count(2);
  const double subjects = table.subjects();
  if (!(n2 > 0) || !(subjects > 0)) blocked("chao-total", "n2 = 0");

  const double r = n1 / n2;
  const double r2 = r * r;
  const double n1_4 = n1 * n1 * n1 * n1;
  const double raw =
      n2 * (0.5 * r2 + r2 * r + 0.25 * r2 * r2 -
            0.25 * n1_4 / (subjects * n2 * n2 * n2) -
            0.5 * n1_4 / (n2 * n2 * (2.0 * n2 * subjects + n1 * n1)));
  if (raw < 0.0) return {0.0, raw, true};
  return {raw, raw, false};
}

VarianceEstimate chao_variance_unseen(const FrequencyTable& table) {
  const double n1 = table.count(1);
  const double n2 = table.count(2);
  const double subjects = table.subjects();
  if (!(n2 > 0) || !(subjects > 0)) blocked("ambartsumian-lower", "n2 = 0");

  const double raw = (n1 * n1 * n1) / (n2 * n2) *
                     (1.0 + 0.25 * (n1 / n2) * (1.0 - n2 / subjects));
  if (raw < 0.0) return {0.0, raw, true};
  return {raw, raw, false};
}

// --- total-population estimators ----------------------------------------------

MleResult mle_total(const FrequencyTable& table, const numerics::RootConfig& config) {
  const auto [subjects, events] = totals(table);
  if (!(subjects > 0)) blocked("mle-total", "empty table");
  if (!(events > subjects))
    throw DegenerateError(
        "mle-total: n = N1 (no repeated subjects), the rate tends to 0 and the "
        "total diverges");

  const double rate = numerics::solve_truncated_rate(events / subjects, config);
  // N = N1 / (1 - e^{-x}); by the defining equation this equals n / x
  const double total = subjects / -std::expm1(-rate);
  return {{"mle-rate", rate, Target::rate, Bound::point},
          {"mle-total", total, Target::total, Bound::point}};
}

Estimate plackett_unseen(const FrequencyTable& table, int a) {
  if (a < 0) throw DomainError("plackett truncation point must be >= 0");
  double numer = 0.0, denom = 0.0;
  for (const auto& [k, count] : table.entries()) {
    if (k >= a + 1) numer += count;
    if (k >= a + 2) denom += k * count;
  }
  if (!(denom > 0))
    throw InapplicableError("plackett-unseen",
                            a == 0 ? "n - n1 = 0" : "no subjects above multiplicity " +
                                                        std::to_string(a + 1));
  Estimate out{"plackett-unseen", table.count(1) * numer / denom, Target::unseen,
               Bound::lower};
  if (a != 0) out.note = "a = " + std::to_string(a);
  return out;
}

Estimate plackett_total(const FrequencyTable& table) {
  const auto [subjects, events] = totals(table);
  const double denom = events - table.count(1);
  if (!(denom > 0)) throw InapplicableError("plackett-total", "n - n1 = 0");
  return {"plackett-total", subjects * events / denom, Target::total, Bound::lower};
}

Estimate stirling_total(const FrequencyTable& table) {
  const auto [subjects, events] = totals(table);
  if (!(subjects > 0)) blocked("stirling-total", "empty table");
  if (!table.integral()) blocked("stirling-total", "requires integer counts");
  if (!(events > subjects))
    throw DegenerateError(
        "stirling-total: n = N1 (no repeated subjects), S(n-1, N1) = 0");

  const auto n = static_cast<unsigned>(std::llround(events));
  const auto m = static_cast<unsigned>(std::llround(subjects));
  return {"stirling-total", numerics::stirling2_ratio(n, m), Target::total,
          Bound::point};
}

Estimate zelterman_total(const FrequencyTable& table, int summation_limit) {
  if (summation_limit < 1) throw DomainError("zelterman summation limit must be >= 1");
  const double n1 = table.count(1);
  if (!(n1 > 0)) blocked("zelterman-total", "n1 = 0");

  double numer = 0.0, denom = 0.0;
  for (int k = 1; k <= summation_limit; ++k) {
    numer += (k + 1) * table.count(k + 1);
    denom += table.count(k);
  }
  const double rate = numer / denom;
  if (!(rate > 0))
    throw DegenerateError("zelterman-total: mean rate estimate is 0, total diverges");

  Estimate out{"zelterman-total", table.subjects() / -std::expm1(-rate), Target::total,
               Bound::upper};
  if (summation_limit != 1) out.note = "l = " + std::to_string(summation_limit);
  return out;
}

// --- Good-Turing ---------------------------------------------------------------

GoodTuringResult good_turing(const FrequencyTable& table) {
  const double events = table.events();
  if (!(events > 0)) blocked("good-turing-p0", "empty table");

  GoodTuringResult out;
  out.unseen_mass = table.count(1) / events;
  for (const auto& [k, count] : table.entries()) {
    const double next = table.count(k + 1);
    out.adjusted[k] = count > 0 ? (k + 1) * next / (events * count) : 0.0;
  }
  // p0 + sum_k n_k pi_k with the n_k cancelled: sum_{j>=1} j n_j / n
  double mass = 0.0;
  for (const auto& [k, count] : table.entries()) mass += k * count;
  out.total_mass = mass / events;
  return out;
}

// --- heterogeneity diagnostic ----------------------------------------------------

HeterogeneityDiagnostic heterogeneity_sequence(const FrequencyTable& table) {
  HeterogeneityDiagnostic out;
  for (int k = 2; k <= table.max_multiplicity(); ++k) {
    const double prev = table.count(k - 1);
    if (prev > 0) out.ratios.emplace_back(k, k * table.count(k) / prev);
  }
  if (out.ratios.size() < 2)
    throw InapplicableError("heterogeneity", "fewer than two computable ratios");

  double mean_k = 0.0, mean_y = 0.0;
  for (const auto& [k, y] : out.ratios) {
    mean_k += k;
    mean_y += y;
  }
  mean_k /= static_cast<double>(out.ratios.size());
  mean_y /= static_cast<double>(out.ratios.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [k, y] : out.ratios) {
    sxy += (k - mean_k) * (y - mean_y);
    sxx += (k - mean_k) * (k - mean_k);
  }
  out.trend = sxy / sxx;
  return out;
}

// --- registry --------------------------------------------------------------------

namespace {

Estimate with_variance(Estimate estimate, const VarianceEstimate& variance) {
  estimate.variance = variance.value;
  if (variance.out_of_range)
    estimate.note = "variance formula out of range, clamped to 0";
  return estimate;
}

std::vector<RegisteredEstimator> build_registry() {
  std::vector<RegisteredEstimator> out;
  out.push_back({"ambartsumian-lower", Target::unseen, Bound::lower,
                 [](const FrequencyTable& t) {
                   return with_variance(ambartsumian_unseen(t), chao_variance_unseen(t));
                 }});
  out.push_back({"ambartsumian-upper", Target::unseen, Bound::upper,
                 [](const FrequencyTable& t) { return ambartsumian_bounds(t).second; }});
  out.push_back({"ambartsumian-upper-total", Target::total, Bound::upper,
                 [](const FrequencyTable& t) {
                   Estimate upper = ambartsumian_bounds(t).second;
                   return Estimate{"ambartsumian-upper-total",
                                   upper.value + t.subjects(), Target::total,
                                   Bound::upper};
                 }});
  out.push_back({"chao-total", Target::total, Bound::lower,
                 [](const FrequencyTable& t) {
                   Estimate lower = ambartsumian_unseen(t);
                   Estimate total{"chao-total", lower.value + t.subjects(),
                                  Target::total, Bound::lower};
                   return with_variance(std::move(total), chao_variance_total(t));
                 }});
  out.push_back({"good-turing-p0", Target::probability, Bound::point,
                 [](const FrequencyTable& t) {
                   return Estimate{"good-turing-p0", good_turing(t).unseen_mass,
                                   Target::probability, Bound::point};
                 }});
  out.push_back({"mean-rate", Target::rate, Bound::point, mean_rate});
  out.push_back({"mle-rate", Target::rate, Bound::point,
                 [](const FrequencyTable& t) { return mle_total(t).rate; }});
  out.push_back({"mle-total", Target::total, Bound::point,
                 [](const FrequencyTable& t) { return mle_total(t).total; }});
  out.push_back({"plackett-total", Target::total, Bound::lower, plackett_total});
  out.push_back({"plackett-unseen", Target::unseen, Bound::lower,
                 [](const FrequencyTable& t) { return plackett_unseen(t); }});
  out.push_back({"robust-1-2", Target::unseen, Bound::lower,
                 [](const FrequencyTable& t) { return robust_pair(t, 1, 2); }});
  out.push_back({"stirling-total", Target::total, Bound::point, stirling_total});
  out.push_back({"zelterman-total", Target::total, Bound::upper,
                 [](const FrequencyTable& t) { return zelterman_total(t); }});
  return out;
}

const std::map<std::string, std::string, std::less<>>& aliases() {
  static const std::map<std::string, std::string, std::less<>> map = {
      {"chao", "ambartsumian-lower"},
      {"good-turing", "good-turing-p0"},
      {"plackett", "plackett-unseen"},
      {"zelterman", "zelterman-total"},
  };
  return map;
}

}  // namespace

const std::vector<RegisteredEstimator>& registry() {
  static const std::vector<RegisteredEstimator> table = build_registry();
  return table;
}

const RegisteredEstimator* find_estimator(std::string_view id) {
  if (auto alias = aliases().find(id); alias != aliases().end()) id = alias->second;
  for (const auto& entry : registry())
    if (entry.id == id) return &entry;
  return nullptr;
}

std::vector<std::string> estimator_ids() {
  std::vector<std::string> out;
  out.reserve(registry().size());
  for (const auto& entry : registry()) out.push_back(entry.id);
  return out;
}

// --- run-everything report ---------------------------------------------------------

EstimatorReport estimate_all(const FrequencyTable& table) {
  return estimate_all(table, estimator_ids());
}

EstimatorReport estimate_all(const FrequencyTable& table,
                             const std::vector<std::string>& ids) {
  std::set<std::string> wanted;
  for (const auto& id : ids) {
    const RegisteredEstimator* entry = find_estimator(id);
    if (entry == nullptr) throw DomainError("unknown estimator id: " + id);
    wanted.insert(entry->id);
  }

  EstimatorReport report;
  const auto [subjects, events] = totals(table);
  report.subjects = subjects;
  report.events = events;
  report.n1 = table.count(1);
  report.n2 = table.count(2);
  report.n3 = table.count(3);

  for (const auto& entry : registry()) {
    if (!wanted.contains(entry.id)) continue;
    try {
      report.estimates.push_back(entry.run(table));
    } catch (const InapplicableError& e) {
      report.inapplicable.push_back({entry.id, e.reason()});
    } catch (const DegenerateError& e) {
      report.inapplicable.push_back({entry.id, e.what()});
    }
  }

  try {
    report.heterogeneity = heterogeneity_sequence(table);
  } catch (const InapplicableError&) {
    report.heterogeneity.reset();
  }
  return report;
}

}  // namespace unseen::estimators
