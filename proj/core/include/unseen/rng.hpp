#ifndef UNSEEN_RNG_HPP
#define UNSEEN_RNG_HPP

#include <cstdint>

namespace unseen::rng {

// Generator identity recorded in every experiment report. Bump the suffix if
// any sampling algorithm below changes, since that changes every simulated
// stream.
inline constexpr const char* kGeneratorId = "splitmix64-keyed/1";

// SplitMix64 finalizer: a 64-bit bijective mixer.
std::uint64_t mix64(std::uint64_t x);

// Counter-based SplitMix64 stream. Keying a stream by (master seed,
// replication, subject) makes every subject's draws independent of every
// other's and independent of evaluation order, so replications can run
// concurrently and still reproduce bit for bit.
class Stream {
public:
  explicit Stream(std::uint64_t key) : state_(key) {}
  Stream(std::uint64_t master_seed, std::uint64_t replication, std::uint64_t subject);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit();
  // Uniform on (0, 1), safe under log().
  double next_unit_open();

  double next_normal();
  double next_exponential(double rate);
  // Marsaglia-Tsang for shape >= 1, boosted by U^{1/shape} below.
  double next_gamma(double shape, double rate);
  // Exact inversion-by-multiplication, chunked so the e^{-mean} factor never
  // underflows; cost grows linearly in mean.
  long long next_poisson(double mean);

private:
  std::uint64_t state_;
};

}  // namespace unseen::rng

#endif
