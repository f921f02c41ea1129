#ifndef UMX_RNG_HPP
#define UMX_RNG_HPP

#include <cmath>
#include <cstdint>

namespace umx {

inline constexpr const char* kRngName = "xoshiro256++";

inline uint64_t splitmix64(uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 state expansion. Hand-rolled so sampling is
// bit-identical across compilers and standard libraries.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(uint64_t seed) {
    uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
    have_spare_ = false;
  }

  // Derived stream for an independent chain; results do not depend on how
  // chains are scheduled across threads.
  static Xoshiro256pp for_chain(uint64_t seed, uint64_t chain_index) {
    return Xoshiro256pp(seed ^ (0xA0761D6478BD642Full * (chain_index + 1)));
  }

  uint64_t next() {
    auto rotl = [](uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in (0,1]; never returns 0 so it is safe under log().
  double uniform01() { return ((next() >> 11) + 1) * 0x1.0p-53; }

  // Standard normal via Box-Muller (explicit formula, no library dependence).
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_;
};

}  // namespace umx

#endif
