#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "unseen/errors.hpp"
#include "unseen/estimators.hpp"
#include "unseen/frequency_table.hpp"

using namespace unseen;
using namespace unseen::estimators;

namespace {

// Expected counts N p_k under a single shared rate; the estimators built for
// this law must recover the truth exactly at expectation level.
FrequencyTable poisson_expected(double population, double x, int k_max) {
  std::map<int, double> entries;
  for (int k = 1; k <= k_max; ++k)
    entries[k] = population * std::exp(k * std::log(x) - x - std::lgamma(k + 1.0));
  return FrequencyTable(std::move(entries));
}

const Estimate* find_row(const EstimatorReport& report, const std::string& id) {
  for (const auto& e : report.estimates)
    if (e.estimator == id) return &e;
  return nullptr;
}

bool listed_inapplicable(const EstimatorReport& report, const std::string& id) {
  for (const auto& note : report.inapplicable)
    if (note.estimator == id) return true;
  return false;
}

}  // namespace

TEST_CASE("target and bound names") {
  CHECK(std::string(to_string(Target::unseen)) == "unseen");
  CHECK(std::string(to_string(Target::total)) == "total");
  CHECK(std::string(to_string(Target::rate)) == "rate");
  CHECK(std::string(to_string(Target::probability)) == "probability");
  CHECK(std::string(to_string(Bound::lower)) == "lower");
  CHECK(std::string(to_string(Bound::upper)) == "upper");
  CHECK(std::string(to_string(Bound::point)) == "point");
}

TEST_CASE("two-sided unseen bounds") {
  FrequencyTable t{{1, 10.0}, {2, 5.0}};
  auto [lower, upper] = ambartsumian_bounds(t);

  CHECK(lower.value == 10.0);
  CHECK(lower.estimator == "ambartsumian-lower");
  CHECK(lower.target == Target::unseen);
  CHECK(lower.bound == Bound::lower);

  CHECK(upper.value == 20.0);
  CHECK(upper.estimator == "ambartsumian-upper");
  CHECK(upper.bound == Bound::upper);
  CHECK(upper.value == 2.0 * lower.value);  // exact, by construction
}

TEST_CASE("lower bound runs when n1 is zero") {
  FrequencyTable t{{1, 0.0}, {2, 5.0}};
  CHECK(ambartsumian_unseen(t).value == 0.0);
}

TEST_CASE("lower bound needs n2") {
  FrequencyTable t{{1, 4.0}};
  try {
    ambartsumian_unseen(t);
    CHECK(false);
  } catch (const InapplicableError& e) {
    CHECK(e.estimator() == "ambartsumian-lower");
    CHECK(e.reason() == "n2 = 0");
  }
}

TEST_CASE("robust pair (1,1) reproduces the lower bound bit for bit") {
  for (FrequencyTable t : {FrequencyTable{{1, 10.0}, {2, 5.0}},
                           FrequencyTable{{1, 7.0}, {2, 3.0}, {3, 2.0}},
                           FrequencyTable{{1, 123.0}, {2, 41.0}, {4, 9.0}}}) {
    CHECK(robust_pair(t, 1, 1).value == ambartsumian_unseen(t).value);
    CHECK(robust_pair(t, 1, 1).estimator == "robust-1-1");
  }
}

TEST_CASE("robust pair (1,2)") {
  FrequencyTable t{{1, 4.0}, {2, 2.0}, {3, 1.0}};
  const auto estimate = robust_pair(t, 1, 2);
  CHECK(estimate.value == 8.0 / 3.0);  // 4*2 / (C(3,1) * 1)
  CHECK(estimate.estimator == "robust-1-2");
  CHECK(estimate.bound == Bound::lower);
  // argument order is immaterial
  CHECK(robust_pair(t, 2, 1).value == estimate.value);
  CHECK(robust_pair(t, 2, 1).estimator == "robust-1-2");
}

TEST_CASE("robust pair needs the combined multiplicity") {
  FrequencyTable t{{1, 4.0}, {2, 3.0}, {3, 0.0}};
  CHECK_THROWS_AS(robust_pair(t, 1, 2), InapplicableError);
  CHECK_THROWS_AS(robust_pair(t, 0, 2), DomainError);
  CHECK_THROWS_AS(robust_pair(t, 1, -1), DomainError);
}

TEST_CASE("mean rate") {
  CHECK(mean_rate(FrequencyTable{{1, 10.0}, {2, 5.0}}).value == 1.0);
  CHECK(mean_rate(FrequencyTable{{1, 10.0}, {2, 0.0}}).value == 0.0);
  CHECK(mean_rate(FrequencyTable{{1, 10.0}}).value == 0.0);
  CHECK(mean_rate(FrequencyTable{{1, 10.0}}).target == Target::rate);
  CHECK_THROWS_AS(mean_rate(FrequencyTable{{2, 5.0}}), InapplicableError);
}

TEST_CASE("variance of the total estimate") {
  const auto variance = chao_variance_total(FrequencyTable{{1, 10.0}, {2, 5.0}});
  CHECK(variance.value == doctest::Approx(178.0 / 3.0).epsilon(1e-12));
  CHECK(variance.raw == variance.value);
  CHECK_FALSE(variance.out_of_range);

  // every n1-bearing term vanishes
  CHECK(chao_variance_total(FrequencyTable{{1, 0.0}, {2, 5.0}}).value == 0.0);

  CHECK_THROWS_AS(chao_variance_total(FrequencyTable{{1, 4.0}}), InapplicableError);
}

TEST_CASE("variance of the unseen-count estimate") {
  const auto variance = chao_variance_unseen(FrequencyTable{{1, 10.0}, {2, 5.0}});
  CHECK(variance.value == doctest::Approx(160.0 / 3.0).epsilon(1e-12));
  CHECK_FALSE(variance.out_of_range);

  CHECK(chao_variance_unseen(FrequencyTable{{1, 0.0}, {2, 5.0}}).value == 0.0);
}

TEST_CASE("maximum-likelihood rate and total") {
  const auto small = mle_total(FrequencyTable{{1, 1.0}, {2, 1.0}});  // n/N1 = 3/2
  CHECK(std::abs(small.rate.value - 0.8742174657987171) <= 1e-11);
  CHECK(small.total.value == doctest::Approx(3.431640429717439).epsilon(1e-11));
  CHECK(small.rate.estimator == "mle-rate");
  CHECK(small.total.estimator == "mle-total");
  CHECK(small.rate.target == Target::rate);
  CHECK(small.total.target == Target::total);

  const auto larger = mle_total(FrequencyTable{{1, 10.0}, {2, 5.0}});  // n/N1 = 4/3
  CHECK(std::abs(larger.rate.value - 0.6058599779190004) <= 1e-11);
  CHECK(larger.total.value == doctest::Approx(33.01092781981693).epsilon(1e-11));
}

TEST_CASE("maximum likelihood needs repeated subjects") {
  CHECK_THROWS_AS(mle_total(FrequencyTable{{1, 5.0}}), DegenerateError);
  CHECK_THROWS_AS(mle_total(FrequencyTable{}), InapplicableError);
}

TEST_CASE("total estimate never falls below the seen count") {
  for (FrequencyTable t : {FrequencyTable{{1, 10.0}, {2, 5.0}},
                           FrequencyTable{{1, 1.0}, {2, 1.0}},
                           FrequencyTable{{1, 2.0}, {5, 3.0}},
                           FrequencyTable{{3, 7.0}}}) {
    CHECK(mle_total(t).total.value >= t.subjects());
  }
}

TEST_CASE("truncation-point moment estimator") {
  FrequencyTable t{{1, 10.0}, {2, 5.0}};
  const auto unseen = plackett_unseen(t);
  CHECK(unseen.value == 15.0);  // 10 * 15 / 10
  CHECK(unseen.estimator == "plackett-unseen");
  CHECK(unseen.bound == Bound::lower);
  CHECK_FALSE(unseen.note.has_value());

  const auto total = plackett_total(t);
  CHECK(total.value == 30.0);  // 15 * 20 / 10
  CHECK(total.target == Target::total);

  // the total is the unseen estimate plus the seen count
  CHECK(total.value == doctest::Approx(unseen.value + t.subjects()).epsilon(1e-14));
}

TEST_CASE("truncation point above zero keeps the n1 prefactor") {
  FrequencyTable t{{1, 4.0}, {2, 3.0}, {3, 2.0}};
  const auto estimate = plackett_unseen(t, 1);
  CHECK(estimate.value == 10.0 / 3.0);  // 4 * (3+2) / (3*2)
  CHECK(estimate.note.has_value());
  CHECK(*estimate.note == "a = 1");
}

TEST_CASE("moment estimator blockers") {
  CHECK_THROWS_AS(plackett_unseen(FrequencyTable{{1, 5.0}}), InapplicableError);
  CHECK_THROWS_AS(plackett_unseen(FrequencyTable{{1, 4.0}, {2, 3.0}}, 2),
                  InapplicableError);
  CHECK_THROWS_AS(plackett_unseen(FrequencyTable{{1, 4.0}}, -1), DomainError);
  CHECK_THROWS_AS(plackett_total(FrequencyTable{{1, 5.0}}), InapplicableError);

  // n1 = 0 is fine for the total: it degrades to the seen count
  CHECK(plackett_total(FrequencyTable{{1, 0.0}, {2, 5.0}}).value == 5.0);
}

TEST_CASE("occupancy-ratio total") {
  const auto estimate = stirling_total(FrequencyTable{{1, 10.0}, {2, 5.0}});
  CHECK(estimate.value == 233400.0 / 7181.0);  // S(20,15) / S(19,15)
  CHECK(estimate.estimator == "stirling-total");
  CHECK(estimate.target == Target::total);
  CHECK(estimate.bound == Bound::point);

  // a single twice-seen subject: the population is estimated complete
  CHECK(stirling_total(FrequencyTable{{2, 1.0}}).value == 1.0);
}

TEST_CASE("occupancy-ratio total errors") {
  CHECK_THROWS_AS(stirling_total(FrequencyTable{{1, 2.0}}), DegenerateError);
  CHECK_THROWS_AS(stirling_total(FrequencyTable{}), InapplicableError);
  CHECK_THROWS_AS(stirling_total(FrequencyTable{{1, 10.5}, {2, 5.0}}),
                  InapplicableError);
}

TEST_CASE("zelterman total") {
  const auto estimate = zelterman_total(FrequencyTable{{1, 10.0}, {2, 5.0}});
  CHECK(estimate.value == doctest::Approx(23.729650603039897).epsilon(1e-13));
  CHECK(estimate.estimator == "zelterman-total");
  CHECK(estimate.bound == Bound::upper);
  CHECK_FALSE(estimate.note.has_value());
}

TEST_CASE("zelterman total with a longer summation window") {
  FrequencyTable t{{1, 6.0}, {2, 3.0}, {3, 1.0}};
  const auto estimate = zelterman_total(t, 2);  // <vt> = (2*3 + 3*1) / (6+3) = 1
  CHECK(estimate.value == doctest::Approx(15.8197670686933).epsilon(1e-13));
  CHECK(estimate.note.has_value());
  CHECK(*estimate.note == "l = 2");
}

TEST_CASE("zelterman total errors") {
  CHECK_THROWS_AS(zelterman_total(FrequencyTable{{1, 10.0}, {2, 0.0}}),
                  DegenerateError);
  CHECK_THROWS_AS(zelterman_total(FrequencyTable{{2, 5.0}}), InapplicableError);
  CHECK_THROWS_AS(zelterman_total(FrequencyTable{{1, 10.0}, {2, 5.0}}, 0), DomainError);
}

TEST_CASE("good-turing mass estimates") {
  const auto gt = good_turing(FrequencyTable{{1, 10.0}, {2, 5.0}});
  CHECK(gt.unseen_mass == 0.5);
  CHECK(gt.adjusted.at(1) == 0.05);  // 2*5 / (20*10)
  CHECK(gt.adjusted.at(2) == 0.0);
  CHECK(gt.total_mass == 1.0);
}

TEST_CASE("good-turing conservation on a dense table") {
  const auto gt = good_turing(FrequencyTable{{1, 4.0}, {2, 2.0}, {3, 1.0}});
  CHECK(gt.unseen_mass == 4.0 / 11.0);
  CHECK(gt.adjusted.at(1) == 1.0 / 11.0);
  CHECK(gt.adjusted.at(2) == 3.0 / 22.0);
  CHECK(gt.adjusted.at(3) == 0.0);
  CHECK(gt.total_mass == 1.0);

  // the cancelled form and the literal sum agree when the support has no gaps
  double literal = gt.unseen_mass;
  literal += 4.0 * gt.adjusted.at(1) + 2.0 * gt.adjusted.at(2) + 1.0 * gt.adjusted.at(3);
  CHECK(literal == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("good-turing conservation survives support gaps") {
  const auto no_singletons = good_turing(FrequencyTable{{2, 5.0}});
  CHECK(no_singletons.unseen_mass == 0.0);
  CHECK(no_singletons.total_mass == 1.0);

  const auto gapped = good_turing(FrequencyTable{{1, 2.0}, {3, 4.0}});
  CHECK(gapped.unseen_mass == 2.0 / 14.0);
  CHECK(gapped.total_mass == 1.0);
  // the literal sum loses the k = 2 -> 3 flow across the gap
  CHECK(gapped.adjusted.at(1) == 0.0);

  CHECK_THROWS_AS(good_turing(FrequencyTable{}), InapplicableError);
}

TEST_CASE("heterogeneity sequence on the documented table") {
  const auto diag = heterogeneity_sequence(FrequencyTable{{1, 10.0}, {2, 5.0}, {3, 0.0}});
  REQUIRE(diag.ratios.size() == 2);
  CHECK(diag.ratios[0] == std::pair<int, double>{2, 1.0});
  CHECK(diag.ratios[1] == std::pair<int, double>{3, 0.0});
  CHECK(diag.trend == -1.0);
}

TEST_CASE("heterogeneity sequence needs two ratios") {
  CHECK_THROWS_AS(heterogeneity_sequence(FrequencyTable{{1, 10.0}, {2, 5.0}}),
                  InapplicableError);
  CHECK_THROWS_AS(heterogeneity_sequence(FrequencyTable{{1, 10.0}, {3, 5.0}}),
                  InapplicableError);  // the gap kills the k = 3 ratio
}

TEST_CASE("heterogeneity is flat under a shared rate") {
  const auto table = poisson_expected(1000.0, 2.0, 30);
  const auto diag = heterogeneity_sequence(table);
  for (const auto& [k, ratio] : diag.ratios)
    CHECK(ratio == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(diag.trend) <= 1e-9);
}

TEST_CASE("heterogeneity trends upward under a gamma mixture") {
  // gamma(2,2) at unit exposure: p_k = (k+1) (4/9) 3^{-k}, so the sequence is
  // (k+1)/3 and the slope against k is exactly 1/3
  std::map<int, double> entries;
  for (int k = 1; k <= 25; ++k)
    entries[k] = 1000.0 * (k + 1) * (4.0 / 9.0) * std::pow(3.0, -k);
  const auto diag = heterogeneity_sequence(FrequencyTable(std::move(entries)));

  for (const auto& [k, ratio] : diag.ratios)
    CHECK(ratio == doctest::Approx((k + 1) / 3.0).epsilon(1e-12));
  CHECK(diag.trend == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("registry is complete and ordered") {
  const auto ids = estimator_ids();
  const std::vector<std::string> expected = {
      "ambartsumian-lower", "ambartsumian-upper", "ambartsumian-upper-total",
      "chao-total",         "good-turing-p0",     "mean-rate",
      "mle-rate",           "mle-total",          "plackett-total",
      "plackett-unseen",    "robust-1-2",         "stirling-total",
      "zelterman-total"};
  CHECK(ids == expected);
  CHECK(std::is_sorted(ids.begin(), ids.end()));
}

TEST_CASE("registry aliases resolve") {
  CHECK(find_estimator("chao")->id == "ambartsumian-lower");
  CHECK(find_estimator("good-turing")->id == "good-turing-p0");
  CHECK(find_estimator("plackett")->id == "plackett-unseen");
  CHECK(find_estimator("zelterman")->id == "zelterman-total");
  CHECK(find_estimator("mle-total")->id == "mle-total");
  CHECK(find_estimator("no-such-estimator") == nullptr);
}

TEST_CASE("the full report on a dense table") {
  FrequencyTable t{{1, 10.0}, {2, 5.0}};
  const auto report = estimate_all(t);

  CHECK(report.subjects == 15.0);
  CHECK(report.events == 20.0);
  CHECK(report.n1 == 10.0);
  CHECK(report.n2 == 5.0);
  CHECK(report.n3 == 0.0);

  CHECK(std::is_sorted(report.estimates.begin(), report.estimates.end(),
                       [](const Estimate& a, const Estimate& b) {
                         return a.estimator < b.estimator;
                       }));

  REQUIRE(find_row(report, "ambartsumian-lower") != nullptr);
  const auto& lower = *find_row(report, "ambartsumian-lower");
  CHECK(lower.value == 10.0);
  REQUIRE(lower.variance.has_value());
  CHECK(*lower.variance == doctest::Approx(160.0 / 3.0).epsilon(1e-12));

  REQUIRE(find_row(report, "chao-total") != nullptr);
  const auto& chao = *find_row(report, "chao-total");
  CHECK(chao.value == 25.0);
  REQUIRE(chao.variance.has_value());
  CHECK(*chao.variance == doctest::Approx(178.0 / 3.0).epsilon(1e-12));

  CHECK(find_row(report, "ambartsumian-upper")->value == 20.0);
  CHECK(find_row(report, "ambartsumian-upper-total")->value == 35.0);
  CHECK(find_row(report, "good-turing-p0")->value == 0.5);
  CHECK(find_row(report, "mean-rate")->value == 1.0);
  CHECK(find_row(report, "plackett-total")->value == 30.0);
  CHECK(find_row(report, "plackett-unseen")->value == 15.0);
  CHECK(find_row(report, "stirling-total")->value == 233400.0 / 7181.0);
  CHECK(find_row(report, "zelterman-total")->value ==
        doctest::Approx(23.729650603039897).epsilon(1e-13));
  CHECK(find_row(report, "mle-total")->value ==
        doctest::Approx(33.01092781981693).epsilon(1e-11));

  CHECK(listed_inapplicable(report, "robust-1-2"));
  CHECK_FALSE(report.heterogeneity.has_value());  // only one computable ratio
}

TEST_CASE("the full report on a singleton-only table") {
  const auto report = estimate_all(FrequencyTable{{1, 5.0}});

  REQUIRE(report.estimates.size() == 2);
  CHECK(report.estimates[0].estimator == "good-turing-p0");
  CHECK(report.estimates[0].value == 1.0);
  CHECK(report.estimates[1].estimator == "mean-rate");
  CHECK(report.estimates[1].value == 0.0);

  CHECK(report.inapplicable.size() == 11);
  CHECK(listed_inapplicable(report, "ambartsumian-lower"));
  CHECK(listed_inapplicable(report, "mle-total"));
  CHECK(listed_inapplicable(report, "stirling-total"));
  CHECK_FALSE(report.heterogeneity.has_value());

  for (const auto& note : report.inapplicable)
    if (note.estimator == "ambartsumian-lower") CHECK(note.reason == "n2 = 0");
}

TEST_CASE("the full report on an empty table") {
  const auto report = estimate_all(FrequencyTable{});
  CHECK(report.estimates.empty());
  CHECK(report.inapplicable.size() == 13);
}

TEST_CASE("report on a requested subset") {
  FrequencyTable t{{1, 10.0}, {2, 5.0}};

  const auto one = estimate_all(t, {"chao"});
  REQUIRE(one.estimates.size() == 1);
  CHECK(one.estimates[0].estimator == "ambartsumian-lower");
  CHECK(one.inapplicable.empty());

  const auto two = estimate_all(t, {"zelterman", "mle-total"});
  REQUIRE(two.estimates.size() == 2);
  CHECK(two.estimates[0].estimator == "mle-total");
  CHECK(two.estimates[1].estimator == "zelterman-total");

  CHECK_THROWS_AS(estimate_all(t, {"no-such-estimator"}), DomainError);

  // degenerate inputs are reported, not thrown
  const auto degenerate = estimate_all(FrequencyTable{{1, 5.0}}, {"mle-total"});
  CHECK(degenerate.estimates.empty());
  REQUIRE(degenerate.inapplicable.size() == 1);
  CHECK(degenerate.inapplicable[0].estimator == "mle-total");
  CHECK(degenerate.inapplicable[0].reason.find("n = N1") != std::string::npos);
}

TEST_CASE("count scaling moves count estimates and fixes rate estimates") {
  FrequencyTable base{{1, 12.0}, {2, 5.0}, {3, 2.0}};
  std::map<int, double> scaled_entries;
  for (const auto& [k, count] : base.entries()) scaled_entries[k] = 3.0 * count;
  FrequencyTable scaled(std::move(scaled_entries));

  CHECK(ambartsumian_unseen(scaled).value ==
        doctest::Approx(3.0 * ambartsumian_unseen(base).value).epsilon(1e-14));
  CHECK(plackett_unseen(scaled).value ==
        doctest::Approx(3.0 * plackett_unseen(base).value).epsilon(1e-14));
  CHECK(plackett_total(scaled).value ==
        doctest::Approx(3.0 * plackett_total(base).value).epsilon(1e-14));
  CHECK(robust_pair(scaled, 1, 2).value ==
        doctest::Approx(3.0 * robust_pair(base, 1, 2).value).epsilon(1e-14));
  CHECK(zelterman_total(scaled).value ==
        doctest::Approx(3.0 * zelterman_total(base).value).epsilon(1e-13));
  CHECK(mle_total(scaled).total.value ==
        doctest::Approx(3.0 * mle_total(base).total.value).epsilon(1e-12));

  CHECK(mle_total(scaled).rate.value ==
        doctest::Approx(mle_total(base).rate.value).epsilon(1e-12));
  CHECK(mean_rate(scaled).value == mean_rate(base).value);
  CHECK(good_turing(scaled).unseen_mass == good_turing(base).unseen_mass);
  // per-cell probabilities carry one extra 1/n factor, so they shrink by the
  // scale while the occupied mass n_k * pi_k stays put
  CHECK(3.0 * good_turing(scaled).adjusted.at(1) ==
        doctest::Approx(good_turing(base).adjusted.at(1)).epsilon(1e-14));
  CHECK(good_turing(scaled).total_mass ==
        doctest::Approx(good_turing(base).total_mass).epsilon(1e-14));
  CHECK(heterogeneity_sequence(scaled).trend ==
        doctest::Approx(heterogeneity_sequence(base).trend).epsilon(1e-12));
}

TEST_CASE("estimators are exact at expectation level under a shared rate") {
  const double population = 1000.0;
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const auto table = poisson_expected(population, x, 60);
    const double truth_unseen = population * std::exp(-x);

    CHECK(ambartsumian_unseen(table).value ==
          doctest::Approx(truth_unseen).epsilon(1e-12));
    CHECK(robust_pair(table, 1, 2).value ==
          doctest::Approx(truth_unseen).epsilon(1e-12));
    CHECK(robust_pair(table, 2, 2).value ==
          doctest::Approx(truth_unseen).epsilon(1e-12));
    CHECK(robust_pair(table, 1, 3).value ==
          doctest::Approx(truth_unseen).epsilon(1e-12));
    CHECK(plackett_unseen(table).value ==
          doctest::Approx(truth_unseen).epsilon(1e-9));
    CHECK(mean_rate(table).value == doctest::Approx(x).epsilon(1e-12));
    CHECK(zelterman_total(table).value ==
          doctest::Approx(population).epsilon(1e-12));
    CHECK(mle_total(table).total.value ==
          doctest::Approx(population).epsilon(1e-9));
    CHECK(mle_total(table).rate.value == doctest::Approx(x).epsilon(1e-9));
  }
}
