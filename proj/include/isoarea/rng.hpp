#pragma once

#include <cstdint>
#include <random>

namespace isoarea {

// Key for a reproducible random stream. Parallel estimators derive one
// substream per work chunk (stream + chunk index), so results do not
// depend on the number of worker threads.
struct RandomSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RandomSeed substream(std::uint64_t offset) const {
    return RandomSeed{seed, stream + offset};
  }
};

class Rng {
 public:
  explicit Rng(RandomSeed key) : engine_(mix(key)) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : Rng(RandomSeed{seed, stream}) {}

  double normal() { return normal_(engine_); }
  double uniform01() { return uniform_(engine_); }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  std::uint64_t bits() { return engine_(); }

 private:
  static std::uint64_t mix(RandomSeed key) {
    // splitmix64 over the pair, so (seed, stream) and (seed, stream+1)
    // seed unrelated engine states.
    std::uint64_t z = key.seed + 0x9e3779b97f4a7c15ULL * (key.stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace isoarea
