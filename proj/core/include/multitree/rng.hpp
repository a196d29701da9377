#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace multitree {

// Stream derivation and seed whitening. mt19937_64 provides the versioned
// core bit stream; the samplers below are hand-rolled because the standard
// distributions are implementation-defined and would not reproduce bit-exact
// across standard libraries.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  // independent stream per (experiment seed, run index); run 0 is the stream
  // a single run uses, so `run` and `batch --repeats 1` agree
  static constexpr std::uint64_t stream_seed(std::uint64_t base_seed,
                                             std::uint64_t run_index) {
    return splitmix64(base_seed ^ splitmix64(run_index));
  }
  static RandomSource for_run(std::uint64_t base_seed, std::uint64_t run_index) {
    return RandomSource(stream_seed(base_seed, run_index));
  }

  std::uint64_t next() { return gen_(); }

  // uniform on [0, n), unbiased via rejection
  std::uint32_t below(std::uint32_t n) {
    detail_require_positive(n);
    std::uint64_t span = n;
    std::uint64_t reject_below = (-span) % span;  // 2^64 mod n
    std::uint64_t r = gen_();
    while (r < reject_below) r = gen_();
    return static_cast<std::uint32_t>(r % span);
  }

  // uniform on (0, 1]; never 0 so log() is safe
  double unit() {
    return 1.0 - static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(unit()) / rate; }

 private:
  static void detail_require_positive(std::uint32_t n) {
    if (n == 0) throw std::logic_error("uniform draw over empty range");
  }
  std::mt19937_64 gen_;
};

}  // namespace multitree
