#pragma once

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <vector>

namespace unx {

// Generator id: "unx-splitmix64-v1". All randomness in the library flows
// from one root seed through labeled splits of this generator, so every
// certificate is replayable from (seed, label path).
inline constexpr const char* kRngName = "unx-splitmix64-v1";

namespace detail {
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a64_bytes(const void* data, std::size_t n,
                                   std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return detail::splitmix64(state_); }

  // Unbiased uniform draw in [0, n) via rejection on the top multiple of n.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  double unit() {  // [0,1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Child generator for an independent, labeled stream. Splitting never
  // advances the parent, so sibling streams are order-insensitive.
  Rng split(std::string_view label, std::uint64_t index = 0) const {
    std::uint64_t h = detail::fnv1a64(label);
    std::uint64_t s = state_ ^ (h * 0x9e3779b97f4a7c15ull);
    s ^= index * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull;
    std::uint64_t warm = s;
    (void)detail::splitmix64(warm);
    return Rng(warm);
  }

  // Floyd's sampling: k distinct values from [0, n), result sorted.
  std::vector<std::uint32_t> sample_distinct(std::uint32_t n, std::uint32_t k);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

inline std::vector<std::uint32_t> Rng::sample_distinct(std::uint32_t n,
                                                       std::uint32_t k) {
  std::vector<std::uint32_t> out;
  out.reserve(k);
  for (std::uint32_t j = n - k; j < n; ++j) {
    std::uint32_t t = static_cast<std::uint32_t>(below(j + 1));
    bool seen = false;
    for (std::uint32_t x : out) {
      if (x == t) {
        seen = true;
        break;
      }
    }
    out.push_back(seen ? j : t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace unx
