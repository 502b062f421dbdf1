#include "superlin/rng.hpp"

#include "superlin/distributions.hpp"

namespace superlin {
namespace {

// Philox-4x64 round constants (the standard multipliers and Weyl keys).
constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) noexcept {
  const unsigned __int128 prod =
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  hi = static_cast<std::uint64_t>(prod >> 64);
  lo = static_cast<std::uint64_t>(prod);
}

inline std::array<std::uint64_t, 4> philox_round(
    const std::array<std::uint64_t, 4>& x,
    const std::array<std::uint64_t, 2>& k) noexcept {
  std::uint64_t hi0, lo0, hi1, lo1;
  mulhilo(kM0, x[0], hi0, lo0);
  mulhilo(kM1, x[2], hi1, lo1);
  return {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(
    const std::array<std::uint64_t, 2>& key,
    const std::array<std::uint64_t, 4>& counter) noexcept {
  std::array<std::uint64_t, 4> x = counter;
  std::array<std::uint64_t, 2> k = key;
  // Ten rounds; the key advances along the Weyl sequence between rounds.
  x = philox_round(x, k);
  for (int r = 1; r < 10; ++r) {
    k[0] += kW0;
    k[1] += kW1;
    x = philox_round(x, k);
  }
  return x;
}

RandomStream::RandomStream(std::uint64_t seed, StreamPurpose purpose,
                           std::uint64_t replicate, std::uint64_t experiment,
                           std::uint64_t condition) noexcept
    : key_{seed, static_cast<std::uint64_t>(purpose)},
      counter_{replicate, experiment, condition, 0},
      buffer_{},
      index_(4) {}

void RandomStream::refill() noexcept {
  buffer_ = Philox4x64::block(key_, counter_);
  ++counter_[3];
}

std::uint64_t RandomStream::next_u64() noexcept {
  if (index_ == 4) {
    refill();
    index_ = 0;
  }
  return buffer_[static_cast<std::size_t>(index_++)];
}

double RandomStream::uniform() noexcept {
  // 53 random bits centered in (0, 1); never returns 0 or 1, so the
  // inverse-CDF transform below is always defined.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() noexcept { return normal_quantile(uniform()); }

}  // namespace superlin
