#pragma once

#include <cmath>
#include <cstdint>

namespace rislab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream: the k-th draw of stream (seed, key) is a hash of
// (seed, key, k), so runs can be evaluated in any order or thread.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t key) : base_(splitmix64(splitmix64(seed) ^ (key * 0xd1b54a32d192ed03ULL))) {}

  std::uint64_t next() { return splitmix64(base_ + 0x632be59bd9b4e019ULL * ++counter_); }

  /// uniform on (0, 1]
  double uniform01() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  double exponential(double rate) { return -std::log(uniform01()) / rate; }
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace rislab
