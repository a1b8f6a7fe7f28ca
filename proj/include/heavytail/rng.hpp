// Counter-based random number generation for reproducible experiments.
//
// Every stochastic draw in the harness is keyed by (master seed, stream,
// round, lane).  A fresh generator is constructed per key, so results do not
// depend on thread scheduling or on how many draws earlier rounds consumed.
// All transforms are explicit (no std::distribution), which keeps output
// byte-identical across standard libraries.
#pragma once

#include <cmath>
#include <cstdint>

namespace heavytail {

// SplitMix64 step: advances the state and returns a mixed 64-bit word.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Draw lanes keep independent purposes (loss data, gradient noise, ...) from
// sharing a stream even when they are consumed in the same round.
enum class RngLane : std::uint64_t {
  kNoise = 1,
  kLossData = 2,
  kDirection = 3,
  kGeneric = 4,
};

// Deterministic generator for one (master, stream, round, lane) key.
// Within a key, draws are sequential; a variable number of draws per round
// (e.g. rejection sampling) is safe because the next round re-keys.
class CounterRng {
 public:
  CounterRng(std::uint64_t master, std::uint64_t stream, std::uint64_t round,
             RngLane lane = RngLane::kGeneric) {
    // Feed each key component through the mixer so nearby keys decorrelate.
    std::uint64_t s = master;
    splitmix64_next(s);
    s ^= 0xA0761D6478BD642Full * (stream + 1);
    splitmix64_next(s);
    s ^= 0xE7037ED1A0B428DBull * (round + 1);
    splitmix64_next(s);
    s ^= 0x8EBC6AF09C88C6E3ull * static_cast<std::uint64_t>(lane);
    splitmix64_next(s);
    state_ = s;
  }

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform01_open() { return 1.0 - uniform01(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Independent Rademacher sign.
  double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

  // Standard normal via Box-Muller (two fresh uniforms per call; the second
  // variate is discarded to keep the draw count predictable).
  double normal() {
    const double u = uniform01_open();
    const double v = uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
  }

 private:
  std::uint64_t state_;
};

}  // namespace heavytail
