#include "unseen/mixture.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <utility>

#include "unseen/errors.hpp"
#include "unseen/numerics.hpp"

namespace unseen {

namespace {

std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

double parse_number(std::string_view text, const char* what) {
  double value = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || p != text.data() + text.size())
    throw ParseError(std::string("bad ") + what + " \"" + std::string(text) + "\"");
  return value;
}

}  // namespace

MixtureSpec::MixtureSpec(Kind kind, std::vector<Atom> atoms, double shape, double rate)
    : kind_(kind), atoms_(std::move(atoms)), shape_(shape), rate_(rate) {}

MixtureSpec MixtureSpec::point(double rate) { return discrete({{rate, 1.0}}); }

MixtureSpec MixtureSpec::discrete(std::vector<Atom> atoms) {
  if (atoms.empty()) throw DomainError("discrete mixture needs at least one atom");
  double total = 0.0;
  for (const auto& [rate, weight] : atoms) {
    if (!(rate >= 0) || !std::isfinite(rate))
      throw DomainError("mixture atom rate must be finite and non-negative");
    if (!(weight > 0) || !std::isfinite(weight))
      throw DomainError("mixture atom weight must be finite and positive");
    total += weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw DomainError("mixture atom weights must sum to 1");

  // canonical order, duplicate rates merged, so equivalent specs compare equal
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.rate < b.rate; });
  std::vector<Atom> merged;
  for (const auto& atom : atoms) {
    if (!merged.empty() && merged.back().rate == atom.rate)
      merged.back().weight += atom.weight;
    else
      merged.push_back(atom);
  }
  return MixtureSpec(Kind::discrete, std::move(merged), 0.0, 0.0);
}

MixtureSpec MixtureSpec::exponential(double rate) { return gamma(1.0, rate); }

MixtureSpec MixtureSpec::gamma(double shape, double rate) {
  if (!(shape > 0) || !std::isfinite(shape))
    throw DomainError("gamma mixture shape must be finite and positive");
  if (!(rate > 0) || !std::isfinite(rate))
    throw DomainError("gamma mixture rate must be finite and positive");
  return MixtureSpec(Kind::gamma, {}, shape, rate);
}

MixtureSpec MixtureSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("mixture spec needs the form kind:parameters, got \"" +
                     std::string(text) + "\"");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);

  if (kind == "point") return point(parse_number(rest, "rate"));
  if (kind == "exp") return exponential(parse_number(rest, "rate"));

  if (kind == "gamma") {
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos)
      throw ParseError("gamma mixture needs the form gamma:SHAPE,RATE");
    return gamma(parse_number(rest.substr(0, comma), "shape"),
                 parse_number(rest.substr(comma + 1), "rate"));
  }

  if (kind == "discrete") {
    std::vector<Atom> atoms;
    std::string_view remaining = rest;
    while (true) {
      const auto semi = remaining.find(';');
      const std::string_view pair =
          semi == std::string_view::npos ? remaining : remaining.substr(0, semi);
      const auto comma = pair.find(',');
      if (comma == std::string_view::npos)
        throw ParseError("discrete mixture atom needs the form RATE,WEIGHT");
      atoms.push_back({parse_number(pair.substr(0, comma), "rate"),
                       parse_number(pair.substr(comma + 1), "weight")});
      if (semi == std::string_view::npos) break;
      remaining = remaining.substr(semi + 1);
    }
    try {
      return discrete(std::move(atoms));
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }

  throw ParseError("unknown mixture kind \"" + std::string(kind) +
                   "\"; expected point, discrete, exp, or gamma");
}

const std::vector<MixtureSpec::Atom>& MixtureSpec::atoms() const {
  if (kind_ != Kind::discrete)
    throw DomainError("atoms() is only defined for discrete mixtures");
  return atoms_;
}

double MixtureSpec::shape() const {
  if (kind_ != Kind::gamma) throw DomainError("shape() is only defined for gamma mixtures");
  return shape_;
}

double MixtureSpec::rate() const {
  if (kind_ != Kind::gamma) throw DomainError("rate() is only defined for gamma mixtures");
  return rate_;
}

double MixtureSpec::mean_rate() const {
  if (kind_ == Kind::gamma) return shape_ / rate_;
  double mean = 0.0;
  for (const auto& [rate, weight] : atoms_) mean += rate * weight;
  return mean;
}

std::string MixtureSpec::describe() const {
  if (kind_ == Kind::gamma)
    return "gamma:" + format_double(shape_) + "," + format_double(rate_);
  std::string out = "discrete:";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i > 0) out += ';';
    out += format_double(atoms_[i].rate) + "," + format_double(atoms_[i].weight);
  }
  return out;
}

namespace simulator {

namespace {

// Poisson mass e^{-lambda} lambda^k / k! in log space.
double poisson_pmf(double lambda, int k) {
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

void check_exposure(double t, int k) {
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("exposure must be positive and finite");
  if (k < 0) throw DomainError("multiplicity must be >= 0");
}

}  // namespace

double pk_mixture(const MixtureSpec& mix, double t, int k) {
  check_exposure(t, k);
  if (mix.is_gamma()) {
    // gamma(a, b) mixing makes the counts negative binomial
    const double a = mix.shape();
    const double b = mix.rate();
    return std::exp(std::lgamma(k + a) - std::lgamma(a) - std::lgamma(k + 1.0) +
                    a * std::log(b / (b + t)) + k * std::log(t / (b + t)));
  }
  double mass = 0.0;
  for (const auto& [rate, weight] : mix.atoms()) mass += weight * poisson_pmf(rate * t, k);
  return mass;
}

double pk_mixture_quadrature(const MixtureSpec& mix, double t, int k, double tol) {
  check_exposure(t, k);
  if (!mix.is_gamma())
    throw DomainError("quadrature route needs a rate density; discrete mixtures have none");

  const double a = mix.shape();
  const double b = mix.rate();
  const double log_norm = a * std::log(b) - std::lgamma(a) - std::lgamma(k + 1.0);
  auto integrand = [=](double nu) {
    double lp = log_norm - (b + t) * nu;
    if (a != 1.0) lp += (a - 1.0) * std::log(nu);
    if (k > 0) lp += k * std::log(nu * t);
    return std::exp(lp);
  };
  return numerics::integrate(integrand, 0.0,
                             std::numeric_limits<double>::infinity(), tol);
}

ExpectedTable expected_table(const MixtureSpec& mix, double population, double t,
                             int k_max) {
  if (!(population > 0) || !std::isfinite(population))
    throw DomainError("population must be positive and finite");
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("exposure must be positive and finite");

  constexpr int kHardCap = 10000;
  constexpr double kTailTolerance = 1e-12;

  ExpectedTable out;
  out.true_unseen = population * pk_mixture(mix, t, 0);

  std::map<int, double> entries;
  if (k_max >= 0) {
    for (int k = 1; k <= k_max; ++k) entries[k] = population * pk_mixture(mix, t, k);
    out.k_max = k_max;
  } else {
    double cumulative = pk_mixture(mix, t, 0);
    int k = 0;
    while (1.0 - cumulative >= kTailTolerance) {
      if (k >= kHardCap) {
        out.truncated = true;
        break;
      }
      ++k;
      const double pk = pk_mixture(mix, t, k);
      entries[k] = population * pk;
      cumulative += pk;
    }
    out.k_max = k;
  }
  out.table = FrequencyTable(std::move(entries));
  return out;
}

std::vector<HolderMargin> check_holder(const MixtureSpec& mix, double t, int k_max) {
  if (k_max < 2) throw DomainError("moment inequality check needs k_max >= 2");
  const double p0 = pk_mixture(mix, t, 0);
  const double p1 = pk_mixture(mix, t, 1);

  std::vector<HolderMargin> out;
  out.reserve(k_max - 1);
  double prev = p1;
  for (int k = 2; k <= k_max; ++k) {
    const double pk = pk_mixture(mix, t, k);
    out.push_back({k, k * p0 * pk - p1 * prev});
    prev = pk;
  }
  return out;
}

}  // namespace simulator
}  // namespace unseen
