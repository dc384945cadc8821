#ifndef UNSEEN_NUMERICS_HPP
#define UNSEEN_NUMERICS_HPP

#include <functional>

#include <boost/multiprecision/cpp_int.hpp>

namespace unseen::numerics {

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Zero-truncated Poisson rate equation
// ---------------------------------------------------------------------------

struct RootConfig {
  double tolerance = 1e-12;  // absolute, on the root
  int max_iterations = 200;
  double bracket_lo = 1e-9;
  double bracket_hi = 50.0;
  bool widen = true;  // double bracket_hi geometrically when the ratio exceeds it
};

// x / (1 - e^{-x}): the mean of a zero-truncated Poisson divided by its rate,
// strictly increasing from 1 at x = 0+.
double truncated_rate_ratio(double x);

// Solve truncated_rate_ratio(x) == ratio for the rate x = nu*t.
// Requires ratio > truncated_rate_ratio(bracket_lo); smaller ratios mean the
// estimate diverges and raise DegenerateError. Ratios beyond the (widened)
// bracket raise BracketError.
double solve_truncated_rate(double ratio, const RootConfig& config = {});

// ---------------------------------------------------------------------------
// Stirling numbers of the second kind
// ---------------------------------------------------------------------------

// S(x, y): partitions of x items into y non-empty blocks, exact.
BigInt stirling2(unsigned x, unsigned y);

// log S(x, y) via a log-space row recurrence. Throws DomainError when
// S(x, y) == 0. Relative error vs. the exact value is ~1e-13 for x <= 2000.
double stirling2_log(unsigned x, unsigned y);

// S(n, m) / S(n - 1, m) as a double. Exact big-integer path for n <= 500,
// log-space recurrence above. Requires S(n - 1, m) > 0.
double stirling2_ratio(unsigned n, unsigned m);

// ---------------------------------------------------------------------------
// Adaptive quadrature
// ---------------------------------------------------------------------------

inline constexpr double kDefaultQuadTolerance = 1e-10;

// Adaptive Gauss-Kronrod 7-15 on [lower, upper] to absolute tolerance tol.
// upper may be +infinity; the tail is folded onto [0, 1) by nu = lower + u/(1-u).
// Exhausting the subdivision budget raises QuadratureError carrying the best
// estimate reached.
double integrate(const std::function<double(double)>& f, double lower, double upper,
                 double tol = kDefaultQuadTolerance);

}  // namespace unseen::numerics

#endif
