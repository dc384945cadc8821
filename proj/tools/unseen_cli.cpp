#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include "unseen/errors.hpp"
#include "unseen/estimators.hpp"
#include "unseen/event_log.hpp"
#include "unseen/frequency_table.hpp"
#include "unseen/mixture.hpp"
#include "unseen/predictors.hpp"
#include "unseen/simulator.hpp"
#include "unseen/version.hpp"

namespace {

using nlohmann::json;
using namespace unseen;

constexpr double kHolderFloor = -1e-12;
constexpr const char* kMixtureGrammar =
    "mixture grammar: point:V | discrete:R,W;R,W;... | exp:B | gamma:A,B";

// 4 significant digits, the human-table presentation
std::string sig4(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

// full precision, for CSV cells
std::string full(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

MixtureSpec parse_mixture_flag(const std::string& text) {
  try {
    return MixtureSpec::parse(text);
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()) + "\n" + kMixtureGrammar);
  }
}

json counts_json(const FrequencyTable& table) {
  json rows = json::array();
  for (const auto& [k, count] : table.entries())
    if (count > 0) rows.push_back({k, count});
  return rows;
}

// --- estimate ----------------------------------------------------------------

struct EstimateArgs {
  std::string counts_path;
  std::string events_path;
  std::optional<double> t;
  std::optional<double> horizon;
  std::vector<std::string> ids;
  int plackett_a = 0;
  int zelterman_l = 1;
  std::string format = "table";
};

void replace_estimate(estimators::EstimatorReport& report, const std::string& id,
                      const std::function<Estimate(void)>& run) {
  std::erase_if(report.inapplicable,
                [&](const estimators::ApplicabilityNote& n) { return n.estimator == id; });
  auto slot = std::find_if(report.estimates.begin(), report.estimates.end(),
                           [&](const Estimate& e) { return e.estimator == id; });
  try {
    Estimate fresh = run();
    if (slot != report.estimates.end())
      *slot = std::move(fresh);
    else
      report.estimates.insert(
          std::upper_bound(report.estimates.begin(), report.estimates.end(), fresh,
                           [](const Estimate& a, const Estimate& b) {
                             return a.estimator < b.estimator;
                           }),
          std::move(fresh));
  } catch (const InapplicableError& e) {
    if (slot != report.estimates.end()) report.estimates.erase(slot);
    report.inapplicable.push_back({id, e.reason()});
  } catch (const DegenerateError& e) {
    if (slot != report.estimates.end()) report.estimates.erase(slot);
    report.inapplicable.push_back({id, e.what()});
  }
}

int run_estimate(const EstimateArgs& args) {
  if (args.counts_path.empty() == args.events_path.empty())
    throw DomainError("exactly one of --counts or --events is required");
  if (!args.counts_path.empty() && (args.t || args.horizon))
    throw DomainError("--t and --T apply to events input only");

  FrequencyTable table;
  json input{{"kind", args.counts_path.empty() ? "events" : "counts"}};
  if (!args.counts_path.empty()) {
    table = load_counts_csv(args.counts_path);
    input["path"] = args.counts_path;
  } else {
    EventLog log = load_events_csv(args.events_path, args.horizon);
    const double t = args.t.value_or(log.horizon());
    table = from_events(log, t);
    input["path"] = args.events_path;
    input["horizon"] = log.horizon();
    input["t"] = t;
  }

  for (const auto& id : args.ids)
    if (estimators::find_estimator(id) == nullptr) {
      std::string known;
      for (const auto& valid : estimators::estimator_ids())
        known += (known.empty() ? "" : ", ") + valid;
      throw DomainError("unknown estimator id \"" + id + "\"; valid ids: " + known);
    }

  auto report = args.ids.empty() ? estimators::estimate_all(table)
                                 : estimators::estimate_all(table, args.ids);

  auto selected = [&](const std::string& id) {
    if (args.ids.empty()) return true;
    for (const auto& requested : args.ids) {
      const auto* entry = estimators::find_estimator(requested);
      if (entry != nullptr && entry->id == id) return true;
    }
    return false;
  };
  if (args.plackett_a != 0 && selected("plackett-unseen"))
    replace_estimate(report, "plackett-unseen",
                     [&] { return estimators::plackett_unseen(table, args.plackett_a); });
  if (args.zelterman_l != 1 && selected("zelterman-total"))
    replace_estimate(report, "zelterman-total",
                     [&] { return estimators::zelterman_total(table, args.zelterman_l); });

  input["counts"] = counts_json(table);
  input["subjects"] = report.subjects;
  input["events"] = report.events;
  input["n1"] = report.n1;
  input["n2"] = report.n2;
  input["n3"] = report.n3;

  if (args.format == "json") {
    json rows = json::array();
    for (const auto& e : report.estimates) {
      json row{{"id", e.estimator},
               {"target", to_string(e.target)},
               {"bound", to_string(e.bound)},
               {"value", e.value}};
      if (e.variance) row["variance"] = *e.variance;
      if (e.note) row["note"] = *e.note;
      rows.push_back(std::move(row));
    }
    json blocked = json::array();
    for (const auto& note : report.inapplicable)
      blocked.push_back({{"estimator", note.estimator}, {"reason", note.reason}});
    json doc{{"command", "estimate"},
             {"version", kVersion},
             {"input", input},
             {"estimates", rows},
             {"inapplicable", blocked}};
    if (report.heterogeneity) {
      json ratios = json::array();
      for (const auto& [k, value] : report.heterogeneity->ratios)
        ratios.push_back({k, value});
      doc["heterogeneity"] = {{"ratios", ratios}, {"trend", report.heterogeneity->trend}};
    }
    std::cout << doc.dump(2) << '\n';
  } else if (args.format == "csv") {
    std::cout << "estimator,target,bound,value,variance\n";
    for (const auto& e : report.estimates) {
      std::cout << e.estimator << ',' << to_string(e.target) << ',' << to_string(e.bound)
                << ',' << full(e.value) << ',';
      if (e.variance) std::cout << full(*e.variance);
      std::cout << '\n';
    }
  } else {
    std::printf("subjects (N1) %s   events (n) %s   n1 %s   n2 %s   n3 %s\n\n",
                sig4(report.subjects).c_str(), sig4(report.events).c_str(),
                sig4(report.n1).c_str(), sig4(report.n2).c_str(),
                sig4(report.n3).c_str());
    std::printf("%-26s %-12s %-6s %-12s %s\n", "estimator", "target", "bound", "value",
                "variance");
    for (const auto& e : report.estimates) {
      std::printf("%-26s %-12s %-6s %-12s %s", e.estimator.c_str(),
                  to_string(e.target), to_string(e.bound), sig4(e.value).c_str(),
                  e.variance ? sig4(*e.variance).c_str() : "");
      if (e.note) std::printf("  (%s)", e.note->c_str());
      std::printf("\n");
    }
    if (!report.inapplicable.empty()) {
      std::printf("\ninapplicable:\n");
      for (const auto& note : report.inapplicable)
        std::printf("  %-26s %s\n", note.estimator.c_str(), note.reason.c_str());
    }
    if (report.heterogeneity)
      std::printf("\nheterogeneity trend %s over %zu ratios\n",
                  sig4(report.heterogeneity->trend).c_str(),
                  report.heterogeneity->ratios.size());
  }

  if (report.estimates.empty()) {
    std::cerr << "error: every selected estimator is inapplicable for this table\n";
    for (const auto& note : report.inapplicable)
      std::cerr << "  " << note.estimator << ": " << note.reason << '\n';
    return 2;
  }
  return 0;
}

// --- predict -----------------------------------------------------------------

struct PredictArgs {
  std::string counts_path;
  std::string method;
  std::optional<double> horizon;
  std::optional<double> t;
  std::optional<double> tau;
  std::optional<long long> m;
  int r_max = -1;
  std::string format = "table";
};

int run_predict(const PredictArgs& args) {
  const FrequencyTable table = load_counts_csv(args.counts_path);
  json input{{"kind", "counts"},
             {"path", args.counts_path},
             {"counts", counts_json(table)}};
  json doc{{"command", "predict"}, {"version", kVersion}, {"method", args.method}};

  if (args.method == "mnatsakanian") {
    if (!args.horizon) throw DomainError("--method mnatsakanian requires --T");
    if (!args.t) throw DomainError("--method mnatsakanian requires --t");
    input["horizon"] = *args.horizon;
    input["t"] = *args.t;
    const auto projection =
        predictors::mnatsakanian_project(table, *args.horizon, *args.t, args.r_max);
    const double increment = projection.expected.at(0);

    if (args.format == "json") {
      json rows = json::array();
      for (const auto& [r, value] : projection.expected) rows.push_back({r, value});
      doc["input"] = input;
      doc["projection"] = rows;
      doc["unseen_increment"] = increment;
      doc["unstable_extrapolation"] = projection.unstable_extrapolation;
      std::cout << doc.dump(2) << '\n';
    } else if (args.format == "csv") {
      std::cout << "r,expected\n";
      for (const auto& [r, value] : projection.expected)
        std::cout << r << ',' << full(value) << '\n';
    } else {
      std::printf("%-6s %s\n", "r", "expected");
      for (const auto& [r, value] : projection.expected)
        std::printf("%-6d %s\n", r, sig4(value).c_str());
      std::printf("unseen increment: %s\n", sig4(increment).c_str());
      if (projection.unstable_extrapolation)
        std::printf("warning: extrapolation beyond twice the horizon is unstable\n");
    }
    return 0;
  }

  if (args.method == "efron-thisted") {
    if (!args.horizon) throw DomainError("--method efron-thisted requires --T");
    if (!args.tau) throw DomainError("--method efron-thisted requires --tau");
    input["horizon"] = *args.horizon;
    input["tau"] = *args.tau;
    const auto predicted = predictors::efron_thisted_new(table, *args.horizon, *args.tau);

    if (args.format == "json") {
      doc["input"] = input;
      doc["value"] = predicted.value;
      doc["unstable_extrapolation"] = predicted.unstable_extrapolation;
      std::cout << doc.dump(2) << '\n';
    } else if (args.format == "csv") {
      std::cout << "method,value\nefron-thisted," << full(predicted.value) << '\n';
    } else {
      std::printf("expected new subjects over tau %s: %s\n", sig4(*args.tau).c_str(),
                  sig4(predicted.value).c_str());
      if (predicted.unstable_extrapolation)
        std::printf("warning: window beyond the horizon, alternating series is unstable\n");
    }
    return 0;
  }

  if (args.method == "solow-polasky") {
    if (!args.m) throw DomainError("--method solow-polasky requires --m");
    input["m"] = *args.m;
    const auto predicted = predictors::solow_polasky_new(table, *args.m);

    if (args.format == "json") {
      doc["input"] = input;
      doc["value"] = predicted.value;
      doc["simplification_regime"] = predicted.simplification_regime;
      doc["simplified"] = predicted.simplified;
      std::cout << doc.dump(2) << '\n';
    } else if (args.format == "csv") {
      std::cout << "method,value\nsolow-polasky," << full(predicted.value) << '\n';
    } else {
      std::printf("expected new subjects over %lld further events: %s\n", *args.m,
                  sig4(predicted.value).c_str());
      if (predicted.simplification_regime)
        std::printf("simplification regime: m*n1/n = %s\n",
                    sig4(predicted.simplified).c_str());
    }
    return 0;
  }

  throw DomainError("unknown method \"" + args.method +
                    "\"; expected mnatsakanian, efron-thisted, or solow-polasky");
}

// --- replay ------------------------------------------------------------------

struct ReplayArgs {
  std::string events_path;
  std::optional<double> horizon;
  int grid = 0;
  std::string estimator;
  std::string format = "csv";
};

int run_replay(const ReplayArgs& args) {
  if (args.grid < 1) throw DomainError("--grid must be >= 1");
  const EventLog log = load_events_csv(args.events_path, args.horizon);

  std::vector<double> grid(args.grid);
  for (int i = 1; i <= args.grid; ++i)
    grid[i - 1] = log.horizon() * static_cast<double>(i) / args.grid;

  const auto curve = predictors::estimate_curve(log, grid, args.estimator);

  if (args.format == "json") {
    json points = json::array();
    for (const auto& p : curve.points)
      points.push_back({{"x", p.x}, {"value", p.value}, {"estimator", p.estimator}});
    json doc{{"command", "replay"},
             {"version", kVersion},
             {"input",
              {{"kind", "events"},
               {"path", args.events_path},
               {"horizon", log.horizon()},
               {"grid", args.grid},
               {"estimator", args.estimator}}},
             {"points", points}};
    std::cout << doc.dump(2) << '\n';
  } else if (args.format == "table") {
    std::printf("%-14s %s\n", "x", curve.points.empty() ? "value" : curve.points[0].estimator.c_str());
    for (const auto& p : curve.points)
      std::printf("%-14s %s\n", sig4(p.x).c_str(), sig4(p.value).c_str());
  } else {
    std::cout << predictors::curve_csv(curve);
  }

  if (curve.points.empty())
    std::cerr << "warning: the estimator was inapplicable at every grid point\n";
  return 0;
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
  long long population = 0;
  std::string mixture;
  double horizon = 0.0;
  int replications = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> ids;
  std::string format = "json";
};

int run_simulate(const SimulateArgs& args) {
  simulator::SimConfig config;
  config.population = args.population;
  config.horizon = args.horizon;
  config.mixture = parse_mixture_flag(args.mixture);
  config.replications = args.replications;
  config.seed = args.seed;

  const auto ids = args.ids.empty() ? estimators::estimator_ids() : args.ids;
  const auto report = simulator::run_experiment(config, ids);

  if (args.format == "table") {
    std::printf("population %lld   horizon %s   mixture %s   replications %d   seed %llu\n",
                config.population, sig4(config.horizon).c_str(),
                config.mixture.describe().c_str(), config.replications,
                static_cast<unsigned long long>(config.seed));
    std::printf("generator %s   mean true unseen %s\n\n", report.generator.c_str(),
                sig4(report.mean_true_unseen).c_str());
    std::printf("%-26s %-12s %-6s %-11s %-12s %-12s %s\n", "estimator", "target",
                "bound", "applicable", "mean", "sd", "violation");
    for (const auto& row : report.estimators)
      std::printf("%-26s %-12s %-6s %-11d %-12s %-12s %s\n", row.id.c_str(),
                  to_string(row.target), to_string(row.bound), row.applicable,
                  sig4(row.mean).c_str(), sig4(row.sd).c_str(),
                  sig4(row.violation_fraction).c_str());
  } else if (args.format == "csv") {
    std::cout << "estimator,target,bound,applicable,mean,sd,violation_fraction\n";
    for (const auto& row : report.estimators)
      std::cout << row.id << ',' << to_string(row.target) << ',' << to_string(row.bound)
                << ',' << row.applicable << ',' << full(row.mean) << ','
                << full(row.sd) << ',' << full(row.violation_fraction) << '\n';
  } else {
    json doc = simulator::to_json(report);
    doc["version"] = kVersion;
    std::cout << doc.dump(2) << '\n';
  }
  return 0;
}

// --- check -------------------------------------------------------------------

struct CheckArgs {
  std::string mixture;
  double t = 1.0;
  int k_max = 10;
  std::string format = "table";
};

int run_check(const CheckArgs& args) {
  const MixtureSpec mix = parse_mixture_flag(args.mixture);
  const auto margins = simulator::check_holder(mix, args.t, args.k_max);

  bool pass = true;
  for (const auto& [k, margin] : margins)
    if (margin < kHolderFloor) pass = false;

  if (args.format == "json") {
    json rows = json::array();
    for (const auto& [k, margin] : margins)
      rows.push_back({{"k", k}, {"margin", margin}});
    json doc{{"command", "check"},
             {"version", kVersion},
             {"input", {{"mixture", mix.describe()}, {"t", args.t}, {"kmax", args.k_max}}},
             {"floor", kHolderFloor},
             {"margins", rows},
             {"pass", pass}};
    std::cout << doc.dump(2) << '\n';
  } else if (args.format == "csv") {
    std::cout << "k,margin\n";
    for (const auto& [k, margin] : margins)
      std::cout << k << ',' << full(margin) << '\n';
  } else {
    std::printf("%-6s %s\n", "k", "margin");
    for (const auto& [k, margin] : margins)
      std::printf("%-6d %s\n", k, sig4(margin).c_str());
    std::printf("%s\n", pass ? "PASS" : "FAIL");
  }
  return pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unseen-population estimation from frequency-of-frequencies data"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* cmd_est = app.add_subcommand("estimate", "Run estimators on a counts or events file");
  auto* est_counts = cmd_est->add_option("--counts", est.counts_path, "counts CSV (k,count)")
                         ->check(CLI::ExistingFile);
  cmd_est->add_option("--events", est.events_path, "events CSV (id,time)")
      ->check(CLI::ExistingFile)
      ->excludes(est_counts);
  cmd_est->add_option("--t", est.t, "truncation time for events input (default: horizon)");
  cmd_est->add_option("--T", est.horizon, "observation horizon for events input");
  cmd_est->add_option("--estimators", est.ids, "estimator ids (default: all)")->delimiter(',');
  cmd_est->add_option("--a", est.plackett_a, "plackett truncation point (default 0)");
  cmd_est->add_option("--l", est.zelterman_l, "zelterman summation limit (default 1)");
  cmd_est->add_option("--format", est.format, "table|json|csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  PredictArgs pre;
  auto* cmd_pre = app.add_subcommand("predict", "Project a counts table or predict new subjects");
  cmd_pre->add_option("--counts", pre.counts_path, "counts CSV (k,count)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_pre->add_option("--method", pre.method, "mnatsakanian|efron-thisted|solow-polasky")
      ->required()
      ->check(CLI::IsMember({"mnatsakanian", "efron-thisted", "solow-polasky"}));
  cmd_pre->add_option("--T", pre.horizon, "observation horizon of the table");
  cmd_pre->add_option("--t", pre.t, "projection time");
  cmd_pre->add_option("--tau", pre.tau, "prediction window length");
  cmd_pre->add_option("--m", pre.m, "number of further events");
  cmd_pre->add_option("--rmax", pre.r_max, "largest projected multiplicity (default: observed max)");
  cmd_pre->add_option("--format", pre.format, "table|json|csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  ReplayArgs rep;
  auto* cmd_rep = app.add_subcommand("replay", "Replay an estimator over an event log");
  cmd_rep->add_option("--events", rep.events_path, "events CSV (id,time)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_rep->add_option("--T", rep.horizon, "observation horizon (default: max observed time)");
  cmd_rep->add_option("--grid", rep.grid, "number of uniform grid points")->required();
  cmd_rep->add_option("--estimator", rep.estimator, "estimator id")->required();
  cmd_rep->add_option("--format", rep.format, "table|json|csv (default csv)")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  SimulateArgs sim;
  auto* cmd_sim = app.add_subcommand("simulate", "Monte-Carlo experiment against a known mixture");
  cmd_sim->add_option("--n", sim.population, "population size")->required();
  cmd_sim->add_option("--mix", sim.mixture, kMixtureGrammar)->required();
  cmd_sim->add_option("--t", sim.horizon, "observation horizon")->required();
  cmd_sim->add_option("--reps", sim.replications, "replications (default 1)");
  cmd_sim->add_option("--seed", sim.seed, "master seed (required, no default)")->required();
  cmd_sim->add_option("--estimators", sim.ids, "estimator ids (default: all)")->delimiter(',');
  cmd_sim->add_option("--format", sim.format, "table|json|csv (default json)")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  CheckArgs chk;
  auto* cmd_chk = app.add_subcommand("check", "Verify the moment-inequality margins of a mixture");
  cmd_chk->add_option("--mix", chk.mixture, kMixtureGrammar)->required();
  cmd_chk->add_option("--t", chk.t, "exposure (default 1)");
  cmd_chk->add_option("--kmax", chk.k_max, "largest multiplicity checked (default 10)");
  cmd_chk->add_option("--format", chk.format, "table|json|csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_est->parsed()) return run_estimate(est);
    if (cmd_pre->parsed()) return run_predict(pre);
    if (cmd_rep->parsed()) return run_replay(rep);
    if (cmd_sim->parsed()) return run_simulate(sim);
    if (cmd_chk->parsed()) return run_check(chk);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InapplicableError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
