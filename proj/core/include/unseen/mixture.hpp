#ifndef UNSEEN_MIXTURE_HPP
#define UNSEEN_MIXTURE_HPP

#include <string>
#include <string_view>
#include <vector>

#include "unseen/frequency_table.hpp"

namespace unseen {

// Rate-density family phi(nu) over [0, inf) for the mixed-Poisson count law
// p_k = integral phi(nu) (nu t)^k e^{-nu t} / k! dnu.
//
// The representation is canonical: point(v) is stored as a one-atom discrete
// mixture and exponential(b) as gamma(1, b), so equivalent specs compare and
// print identically.
class MixtureSpec {
public:
  struct Atom {
    double rate = 0.0;    // >= 0
    double weight = 0.0;  // > 0; weights sum to 1
    bool operator==(const Atom&) const = default;
  };

  static MixtureSpec point(double rate);
  static MixtureSpec discrete(std::vector<Atom> atoms);
  static MixtureSpec exponential(double rate);
  static MixtureSpec gamma(double shape, double rate);

  // Grammar: "point:V" | "discrete:R,W;R,W;..." | "exp:B" | "gamma:A,B".
  static MixtureSpec parse(std::string_view text);

  bool is_discrete() const { return kind_ == Kind::discrete; }
  bool is_gamma() const { return kind_ == Kind::gamma; }

  const std::vector<Atom>& atoms() const;  // discrete only
  double shape() const;                    // gamma only
  double rate() const;                     // gamma only

  // Mean of phi: sum w_i nu_i or shape/rate.
  double mean_rate() const;

  // Canonical, re-parseable text form ("discrete:1,1", "gamma:2,2").
  std::string describe() const;

  bool operator==(const MixtureSpec&) const = default;

private:
  enum class Kind { discrete, gamma };
  MixtureSpec(Kind kind, std::vector<Atom> atoms, double shape, double rate);

  Kind kind_ = Kind::discrete;
  std::vector<Atom> atoms_;
  double shape_ = 0.0;
  double rate_ = 0.0;
};

namespace simulator {

// Mixture count probability p_k at exposure t, by closed form: a weighted
// Poisson mass for discrete mixtures, a negative-binomial mass for the gamma
// family. t > 0, k >= 0.
double pk_mixture(const MixtureSpec& mix, double t, int k);

// Same probability through the defining integral and adaptive quadrature.
// Only the gamma family has a density; discrete specs are rejected. Used as
// the independent second route in dual-path checks.
double pk_mixture_quadrature(const MixtureSpec& mix, double t, int k,
                             double tol = 1e-10);

struct ExpectedTable {
  FrequencyTable table;     // expected n_k = N p_k for k = 1..k_max
  double true_unseen = 0.0; // N p_0
  int k_max = 0;
  bool truncated = false;   // hit the hard cap before the tail fell below 1e-12
};

// k_max < 0 auto-extends until the tail mass drops below 1e-12 (hard cap 10^4).
ExpectedTable expected_table(const MixtureSpec& mix, double population, double t,
                             int k_max = -1);

struct HolderMargin {
  int k = 0;
  double margin = 0.0;  // k p0 p_k - p1 p_{k-1}, >= 0 for every valid mixture
};

// Margins of the moment inequality k p0 p_k >= p1 p_{k-1} for k = 2..k_max.
// Zero exactly (up to roundoff) for point mixtures, strictly positive
// otherwise; a negative margin beyond roundoff would indicate a broken p_k.
std::vector<HolderMargin> check_holder(const MixtureSpec& mix, double t, int k_max);

}  // namespace simulator
}  // namespace unseen

#endif
