#ifndef UNSEEN_ESTIMATE_HPP
#define UNSEEN_ESTIMATE_HPP

#include <optional>
#include <string>

namespace unseen {

// What an estimate is about.
enum class Target { unseen, total, rate, probability };

// Bound classification. "lower"/"upper" are with respect to the true value
// under rate heterogeneity; a robust estimator that is exact under a shared
// rate is still classified by its one-sided behavior when rates vary.
enum class Bound { lower, upper, point };

const char* to_string(Target t);
const char* to_string(Bound b);

struct Estimate {
  std::string estimator;  // registry id, e.g. "ambartsumian-lower"
  double value = 0.0;     // always >= 0
  Target target = Target::unseen;
  Bound bound = Bound::point;
  std::optional<double> variance;  // attached where a printed formula exists
  std::optional<std::string> note; // e.g. variance formula out of range

  bool operator==(const Estimate&) const = default;
};

}  // namespace unseen

#endif
