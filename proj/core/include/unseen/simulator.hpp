#ifndef UNSEEN_SIMULATOR_HPP
#define UNSEEN_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unseen/estimate.hpp"
#include "unseen/event_log.hpp"
#include "unseen/mixture.hpp"

namespace unseen::simulator {

struct SimConfig {
  long long population = 0;  // N >= 1
  double horizon = 0.0;      // T > 0
  MixtureSpec mixture = MixtureSpec::point(1.0);
  int replications = 1;
  std::uint64_t seed = 0;
};

// One synthetic observation run: each subject draws its rate nu from the
// mixture, its event count from Poisson(nu * T), and places the events
// uniformly on [0, T] (the conditional law of a Poisson process given its
// count). Fully deterministic given (seed, replication).
EventLog simulate_log(const SimConfig& config, int replication);

struct EstimatorSummary {
  std::string id;
  Target target = Target::unseen;
  Bound bound = Bound::point;
  int applicable = 0;              // replications where the estimator ran
  double mean = 0.0;               // over applicable replications
  double sd = 0.0;                 // empirical, n-1 denominator
  double violation_fraction = 0.0; // bound violated vs. the replication truth
};

struct ExperimentReport {
  SimConfig config;          // echo
  std::string generator;     // rng::kGeneratorId
  double mean_true_unseen = 0.0;  // realized N - N1, averaged
  std::vector<EstimatorSummary> estimators;  // ascending id
};

// Simulate config.replications runs, build the table at t = T for each, apply
// the named estimators, and compare them with each replication's realized
// truth (N - N1 for unseen targets, N for totals). Inapplicability on a
// replication is recorded, not fatal. Deterministic given the master seed and
// independent of the id list's order.
ExperimentReport run_experiment(const SimConfig& config,
                                const std::vector<std::string>& estimator_ids);

// Self-describing document: config echo, seed, generator identity, rows.
nlohmann::json to_json(const ExperimentReport& report);

}  // namespace unseen::simulator

#endif
