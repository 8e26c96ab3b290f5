#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace trajgen {

// splitmix64 finalizer; used for seed derivation and content hashing.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and stream ids.
// Every sampling signature in the library takes an explicit seed; nested
// components derive their own streams through this, so results do not
// depend on evaluation order or worker count.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t id : ids) h = mix64(h ^ id);
  return h;
}

// pcg64 (oneseq, XSL-RR output). 128-bit state, 64-bit output.
class Pcg64 {
 public:
  explicit Pcg64(std::uint64_t seed) {
    state_ = (static_cast<unsigned __int128>(mix64(seed)) << 64) |
             mix64(seed ^ 0xda3e39cb94b95bdbULL);
    step();
  }

  std::uint64_t next_u64() {
    const unsigned __int128 s = state_;
    step();
    const std::uint64_t xored =
        static_cast<std::uint64_t>(s >> 64) ^ static_cast<std::uint64_t>(s);
    const unsigned rot = static_cast<unsigned>(s >> 122);
    return (xored >> rot) | (xored << ((-rot) & 63u));
  }

  // Uniform on (0, 1]; never zero, safe under log().
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  // Standard normal via Box-Muller; draws come in deterministic pairs.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  void step() {
    constexpr unsigned __int128 kMul =
        (static_cast<unsigned __int128>(2549297995355413924ULL) << 64) |
        4865540595714422341ULL;
    state_ = state_ * kMul + 1442695040888963407ULL;
  }

  unsigned __int128 state_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace trajgen
