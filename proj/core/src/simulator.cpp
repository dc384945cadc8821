#include "unseen/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "unseen/errors.hpp"
#include "unseen/estimators.hpp"
#include "unseen/rng.hpp"

namespace unseen::simulator {

namespace {

void check_config(const SimConfig& config) {
  if (config.population < 1) throw DomainError("population must be >= 1");
  if (!(config.horizon > 0) || !std::isfinite(config.horizon))
    throw DomainError("horizon must be positive and finite");
  if (config.replications < 1) throw DomainError("replications must be >= 1");
}

double draw_rate(const MixtureSpec& mix, rng::Stream& stream) {
  if (mix.is_gamma()) return stream.next_gamma(mix.shape(), mix.rate());
  const double u = stream.next_unit();
  double cumulative = 0.0;
  for (const auto& [rate, weight] : mix.atoms()) {
    cumulative += weight;
    if (u < cumulative) return rate;
  }
  return mix.atoms().back().rate;
}

std::string subject_id(long long index, int width) {
  std::string digits = std::to_string(index);
  if (static_cast<int>(digits.size()) < width)
    digits.insert(0, width - digits.size(), '0');
  return "s" + digits;
}

}  // namespace

EventLog simulate_log(const SimConfig& config, int replication) {
  check_config(config);
  if (replication < 0) throw DomainError("replication index must be >= 0");

  const int width = static_cast<int>(std::to_string(config.population - 1).size());
  EventLog::Records records;
  for (long long subject = 0; subject < config.population; ++subject) {
    // a stream per (seed, replication, subject) keeps every subject's draws
    // independent of evaluation order
    rng::Stream stream(config.seed, static_cast<std::uint64_t>(replication),
                       static_cast<std::uint64_t>(subject));
    const double rate = draw_rate(config.mixture, stream);
    const long long events = stream.next_poisson(rate * config.horizon);
    if (events == 0) continue;

    std::vector<double> times(events);
    // given its count, a Poisson process scatters events uniformly
    for (auto& t : times) t = stream.next_unit() * config.horizon;
    records.emplace(subject_id(subject, width), std::move(times));
  }
  return EventLog(config.horizon, std::move(records));
}

ExperimentReport run_experiment(const SimConfig& config,
                                const std::vector<std::string>& estimator_ids) {
  check_config(config);

  std::set<std::string> wanted;
  for (const auto& id : estimator_ids) {
    const estimators::RegisteredEstimator* entry = estimators::find_estimator(id);
    if (entry == nullptr) throw DomainError("unknown estimator id: " + id);
    wanted.insert(entry->id);
  }

  struct Accumulator {
    const estimators::RegisteredEstimator* entry = nullptr;
    int applicable = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    int violations = 0;
  };
  std::vector<Accumulator> accumulators;
  for (const auto& entry : estimators::registry())
    if (wanted.contains(entry.id)) accumulators.push_back({&entry});

  double unseen_sum = 0.0;
  for (int replication = 0; replication < config.replications; ++replication) {
    const EventLog log = simulate_log(config, replication);
    const FrequencyTable table = from_events(log, config.horizon);
    const double seen = static_cast<double>(log.subject_count());
    const double true_unseen = static_cast<double>(config.population) - seen;
    unseen_sum += true_unseen;

    for (auto& acc : accumulators) {
      double value = 0.0;
      try {
        value = acc.entry->run(table).value;
      } catch (const InapplicableError&) {
        continue;
      } catch (const DegenerateError&) {
        continue;
      }
      ++acc.applicable;
      acc.sum += value;
      acc.sum_sq += value * value;

      // bound violations are judged against each replication's realized truth
      double truth = 0.0;
      if (acc.entry->target == Target::unseen)
        truth = true_unseen;
      else if (acc.entry->target == Target::total)
        truth = static_cast<double>(config.population);
      else
        continue;
      if (acc.entry->bound == Bound::lower && value > truth) ++acc.violations;
      if (acc.entry->bound == Bound::upper && value < truth) ++acc.violations;
    }
  }

  ExperimentReport report;
  report.config = config;
  report.generator = rng::kGeneratorId;
  report.mean_true_unseen = unseen_sum / config.replications;
  for (const auto& acc : accumulators) {
    EstimatorSummary summary;
    summary.id = acc.entry->id;
    summary.target = acc.entry->target;
    summary.bound = acc.entry->bound;
    summary.applicable = acc.applicable;
    if (acc.applicable > 0) {
      summary.mean = acc.sum / acc.applicable;
      if (acc.applicable > 1) {
        const double ss = acc.sum_sq - acc.sum * acc.sum / acc.applicable;
        summary.sd = std::sqrt(std::max(ss, 0.0) / (acc.applicable - 1));
      }
      summary.violation_fraction =
          static_cast<double>(acc.violations) / acc.applicable;
    }
    report.estimators.push_back(std::move(summary));
  }
  return report;
}

nlohmann::json to_json(const ExperimentReport& report) {
  nlohmann::json estimators = nlohmann::json::array();
  for (const auto& row : report.estimators) {
    estimators.push_back({{"id", row.id},
                          {"target", to_string(row.target)},
                          {"bound", to_string(row.bound)},
                          {"applicable", row.applicable},
                          {"mean", row.mean},
                          {"sd", row.sd},
                          {"violation_fraction", row.violation_fraction}});
  }
  return {{"config",
           {{"population", report.config.population},
            {"horizon", report.config.horizon},
            {"mixture", report.config.mixture.describe()},
            {"replications", report.config.replications},
            {"seed", report.config.seed}}},
          {"generator", report.generator},
          {"mean_true_unseen", report.mean_true_unseen},
          {"estimators", estimators}};
}

}  // namespace unseen::simulator
