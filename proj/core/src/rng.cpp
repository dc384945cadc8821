#include "unseen/rng.hpp"

#include <cmath>

#include "unseen/errors.hpp"

namespace unseen::rng {

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t master_seed, std::uint64_t replication,
               std::uint64_t subject)
    : state_(mix64(mix64(mix64(master_seed) ^ replication) ^ subject)) {}

std::uint64_t Stream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double Stream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::next_unit_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::next_normal() {
  const double radius = std::sqrt(-2.0 * std::log(next_unit_open()));
  const double angle = 2.0 * 3.14159265358979323846 * next_unit();
  return radius * std::cos(angle);
}

double Stream::next_exponential(double rate) {
  if (!(rate > 0)) throw DomainError("exponential rate must be positive");
  return -std::log(next_unit_open()) / rate;
}

double Stream::next_gamma(double shape, double rate) {
  if (!(shape > 0) || !(rate > 0))
    throw DomainError("gamma shape and rate must be positive");

  // Marsaglia-Tsang squeeze; shape < 1 is boosted through gamma(shape + 1)
  if (shape < 1.0) {
    const double boost = std::pow(next_unit_open(), 1.0 / shape);
    return next_gamma(shape + 1.0, rate) * boost;
  }

  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_unit_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

long long Stream::next_poisson(double mean) {
  if (!(mean >= 0) || !std::isfinite(mean))
    throw DomainError("poisson mean must be finite and non-negative");
  if (mean == 0.0) return 0;

  // inversion by multiplication, with the e^{-mean} factor folded in by
  // chunks so it never underflows
  constexpr double kChunk = 500.0;
  double lambda_left = mean;
  double p = 1.0;
  long long k = 0;
  do {
    ++k;
    p *= next_unit_open();
    while (p < 1.0 && lambda_left > 0.0) {
      if (lambda_left > kChunk) {
        p *= std::exp(kChunk);
        lambda_left -= kChunk;
      } else {
        p *= std::exp(lambda_left);
        lambda_left = 0.0;
      }
    }
  } while (p > 1.0);
  return k - 1;
}

}  // namespace unseen::rng
