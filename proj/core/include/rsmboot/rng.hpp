#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace rsmboot {

// Philox4x64-10 counter-based generator (Salmon et al., Random123 family).
// A stream is identified by its 128-bit key; the counter only advances with
// consumption, so substreams derived from distinct keys never overlap and
// draws are independent of thread scheduling.
namespace philox {

inline constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
inline constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
inline constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                          std::array<std::uint64_t, 2> key) {
  const auto mulhilo = [](std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
    const auto p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    return static_cast<std::uint64_t>(p);
  };
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0 = 0;
    std::uint64_t hi1 = 0;
    const std::uint64_t lo0 = mulhilo(kMult0, ctr[0], hi0);
    const std::uint64_t lo1 = mulhilo(kMult1, ctr[2], hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

}  // namespace philox

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// 64-bit FNV-1a, constexpr so string tags can name substreams.
constexpr std::uint64_t stream_tag(const char* s) {
  std::uint64_t h = 1469598103934665603ULL;
  while (*s != '\0') {
    h ^= static_cast<unsigned char>(*s++);
    h *= 1099511628211ULL;
  }
  return h;
}

inline constexpr std::uint64_t kTagBalance = stream_tag("balance");
inline constexpr std::uint64_t kTagBoot = stream_tag("boot");
inline constexpr std::uint64_t kTagJitter = stream_tag("jitter");
inline constexpr std::uint64_t kTagNoise = stream_tag("noise");

// Folds a path of integers into a stream id.
inline std::uint64_t derive_stream(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(seed);
  for (const std::uint64_t part : path) {
    h = splitmix64(h ^ (part + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
  }
  return h;
}

class RngStream {
 public:
  RngStream(std::uint64_t key0, std::uint64_t key1) : key_{key0, key1} {}

  static RngStream from(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
    const std::uint64_t k0 = derive_stream(seed, path);
    return RngStream(k0, splitmix64(k0 ^ 0xD1B54A32D192ED03ULL));
  }

  std::uint64_t next_u64() {
    if (buffer_pos_ >= 4) {
      for (int i = 0; i < 4; ++i) {
        if (++counter_[i] != 0) break;  // advance with carry, then generate
      }
      buffer_ = philox::block(counter_, key_);
      buffer_pos_ = 0;
    }
    return buffer_[buffer_pos_++];
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via Box-Muller; the paired deviate is cached.
  double normal() {
    if (has_cached_normal_) {
      has_cached_normal_ = false;
      return cached_normal_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1] keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_normal_ = true;
    return r * std::cos(a);
  }

 private:
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_{0, 0, 0, 0};
  std::array<std::uint64_t, 4> buffer_{};
  int buffer_pos_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace rsmboot
