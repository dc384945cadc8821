#include "unseen/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "unseen/errors.hpp"

namespace unseen::numerics {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// --- zero-truncated rate equation -------------------------------------------

double truncated_rate_ratio(double x) {
  // 1 - e^{-x} via expm1 keeps the denominator accurate near 0
  return x / -std::expm1(-x);
}

double solve_truncated_rate(double ratio, const RootConfig& config) {
  if (!(config.bracket_lo > 0.0) || !(config.bracket_lo < config.bracket_hi))
    throw DomainError("root bracket must satisfy 0 < lo < hi");
  if (!(config.tolerance > 0.0)) throw DomainError("root tolerance must be positive");
  if (!std::isfinite(ratio) || ratio <= 1.0)
    throw DegenerateError("flares-per-subject ratio must exceed 1; the rate tends to 0 and the total diverges");

  double lo = config.bracket_lo;
  double hi = config.bracket_hi;
  const double f_lo = truncated_rate_ratio(lo);
  if (ratio <= f_lo)
    throw DegenerateError("flares-per-subject ratio is below the solvable range; the rate tends to 0 and the total diverges");

  // widen upward on demand; the target function grows like x so this terminates
  int widenings = 0;
  while (truncated_rate_ratio(hi) < ratio) {
    if (!config.widen || ++widenings > 64)
      throw BracketError("ratio exceeds the root bracket; widen RootConfig.bracket_hi");
    hi *= 2.0;
  }

  // safeguarded hybrid: secant step when it lands inside the bracket, bisection
  // otherwise; the bracket never loses the root
  double a = lo, b = hi;
  double fa = truncated_rate_ratio(a) - ratio;
  double fb = truncated_rate_ratio(b) - ratio;
  double x_prev = a, f_prev = fa;
  double x = b, f_cur = fb;
  for (int it = 0; it < config.max_iterations && (b - a) > config.tolerance; ++it) {
    double candidate;
    const double df = f_cur - f_prev;
    if (df != 0.0) {
      candidate = x - f_cur * (x - x_prev) / df;
      if (!(candidate > a) || !(candidate < b)) candidate = 0.5 * (a + b);
    } else {
      candidate = 0.5 * (a + b);
    }

    const double f_candidate = truncated_rate_ratio(candidate) - ratio;
    x_prev = x;
    f_prev = f_cur;
    x = candidate;
    f_cur = f_candidate;
    if (f_candidate == 0.0) return candidate;
    if (f_candidate < 0.0)
      a = candidate, fa = f_candidate;
    else
      b = candidate, fb = f_candidate;
  }
  return 0.5 * (a + b);
}

// --- Stirling numbers of the second kind -------------------------------------

BigInt stirling2(unsigned x, unsigned y) {
  if (y > x) return 0;
  if (x == 0) return 1;  // S(0,0)
  if (y == 0) return 0;

  // one row at a time: S(i, j) = j S(i-1, j) + S(i-1, j-1)
  std::vector<BigInt> row(y + 1, 0);
  row[0] = 1;  // row for i = 0
  for (unsigned i = 1; i <= x; ++i) {
    const unsigned j_hi = std::min(i, y);
    for (unsigned j = j_hi; j >= 1; --j) row[j] = j * row[j] + row[j - 1];
    row[0] = 0;
  }
  return row[y];
}

namespace {

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log S(x, j) for j = 0..y, computed in place row by row.
std::vector<double> stirling2_log_row(unsigned x, unsigned y) {
  std::vector<double> row(y + 1, -kInf);
  row[0] = 0.0;  // S(0,0) = 1
  for (unsigned i = 1; i <= x; ++i) {
    const unsigned j_hi = std::min(i, y);
    for (unsigned j = j_hi; j >= 1; --j)
      row[j] = log_add_exp(std::log(static_cast<double>(j)) + row[j], row[j - 1]);
    row[0] = -kInf;
  }
  return row;
}

}  // namespace

double stirling2_log(unsigned x, unsigned y) {
  if (y > x || (y == 0 && x > 0))
    throw DomainError("log of zero Stirling number S(" + std::to_string(x) + "," + std::to_string(y) + ")");
  if (x == 0) return 0.0;
  return stirling2_log_row(x, y)[y];
}

double stirling2_ratio(unsigned n, unsigned m) {
  if (m > n - 1 || m == 0 || n == 0)
    throw DegenerateError("Stirling ratio S(n,m)/S(n-1,m) needs 1 <= m <= n-1");

  if (n <= 500) {
    BigInt num = stirling2(n, m);
    BigInt den = stirling2(n - 1, m);
    // bring both under double range with a shared shift; the ratio is preserved
    const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(num)) + 1;
    if (bits > 960) {
      const unsigned shift = bits - 512;
      num >>= shift;
      den >>= shift;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  }

  // log-space path: one pass gives both rows
  std::vector<double> row = stirling2_log_row(n - 1, m);
  const double log_den = row[m];
  // advance one more row
  const unsigned j_hi = std::min(n, m);
  for (unsigned j = j_hi; j >= 1; --j)
    row[j] = log_add_exp(std::log(static_cast<double>(j)) + row[j], row[j - 1]);
  return std::exp(row[m] - log_den);
}

// --- adaptive Gauss-Kronrod quadrature ---------------------------------------

namespace {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1]: (node, gauss weight,
// kronrod weight); negative nodes mirror the positive ones.
constexpr double kNodes[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0,               0.204432940075298},
    {0.586087235467691, 0.0,               0.169004726639267},
    {0.864864423359769, 0.0,               0.104790010322250},
    {0.991455371120813, 0.0,               0.022935322010529},
};

struct PanelResult {
  double value = 0.0;
  double error = 0.0;
};

template <typename F>
PanelResult gauss_kronrod_15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double y0 = f(mid);
  double gauss = kNodes[0][1] * y0;
  double kronrod = kNodes[0][2] * y0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kNodes[i][0];
    const double y = f(mid + dx) + f(mid - dx);
    gauss += kNodes[i][1] * y;
    kronrod += kNodes[i][2] * y;
  }
  gauss *= half;
  kronrod *= half;

  const double diff = std::abs(kronrod - gauss);
  // standard QUADPACK-style magnification of the Gauss/Kronrod discrepancy
  const double err = diff * std::sqrt(std::max(200.0 * diff, 0.0));
  return {kronrod, std::max(err, std::abs(kronrod) * 1e-16)};
}

struct Interval {
  double a, b, value, error;
};

}  // namespace

double integrate(const std::function<double(double)>& f, double lower, double upper,
                 double tol) {
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  if (!(lower < upper)) throw DomainError("quadrature bounds must satisfy lower < upper");
  if (std::isinf(lower)) throw DomainError("quadrature lower bound must be finite");

  std::function<double(double)> g;
  double a = lower, b = upper;
  if (std::isinf(upper)) {
    // nu = lower + u/(1-u) maps [0,1) onto [lower, inf); dnu = du/(1-u)^2
    g = [&f, lower](double u) {
      const double one_minus = 1.0 - u;
      const double nu = lower + u / one_minus;
      const double jac = 1.0 / (one_minus * one_minus);
      const double value = f(nu) * jac;
      return std::isfinite(value) ? value : 0.0;
    };
    a = 0.0;
    b = 1.0;
  } else {
    g = f;
  }

  constexpr int kMaxIntervals = 4096;
  std::vector<Interval> worklist;
  worklist.reserve(64);
  {
    const PanelResult whole = gauss_kronrod_15(g, a, b);
    worklist.push_back({a, b, whole.value, whole.error});
  }

  double total_value = worklist[0].value;
  double total_error = worklist[0].error;
  int panels = 1;
  while (total_error > tol) {
    // split the interval with the largest error estimate
    auto worst = std::max_element(
        worklist.begin(), worklist.end(),
        [](const Interval& lhs, const Interval& rhs) { return lhs.error < rhs.error; });
    if (panels >= kMaxIntervals || worst->b - worst->a <= 1e-15 * (b - a))
      throw QuadratureError("quadrature did not reach the requested tolerance",
                            total_value, total_error);

    const Interval split = *worst;
    const double mid = 0.5 * (split.a + split.b);
    const PanelResult left = gauss_kronrod_15(g, split.a, mid);
    const PanelResult right = gauss_kronrod_15(g, mid, split.b);
    *worst = {split.a, mid, left.value, left.error};
    worklist.push_back({mid, split.b, right.value, right.error});
    ++panels;

    total_value += left.value + right.value - split.value;
    total_error += left.error + right.error - split.error;
  }
  return total_value;
}

}  // namespace unseen::numerics
