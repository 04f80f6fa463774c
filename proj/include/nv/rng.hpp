#pragma once

#include <cstdint>

namespace nv {

// Counter-based deterministic generator: splitmix64 applied to
// (seed, counter). Identical output for a given (seed, counter) on any
// platform, and any counter can be evaluated independently, so parallel
// consumers stay reproducible.
struct CounterRng {
  uint64_t seed = 0;
  uint64_t counter = 0;

  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static uint64_t at(uint64_t seed, uint64_t counter) {
    return mix(mix(seed) + 0x9e3779b97f4a7c15ULL * (counter + 1));
  }

  uint64_t next() { return at(seed, counter++); }

  // uniform in [0, 1)
  double next_double() { return (next() >> 11) * 0x1.0p-53; }

  static double uniform(uint64_t seed, uint64_t counter) {
    return (at(seed, counter) >> 11) * 0x1.0p-53;
  }

  // derive an independent stream (e.g. per trial, per nucleus)
  static uint64_t substream(uint64_t seed, uint64_t id) {
    return mix(seed ^ mix(id + 0x51ed270b0a1c2ef3ULL));
  }
};

}  // namespace nv
