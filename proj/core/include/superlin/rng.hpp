#pragma once

#include <array>
#include <cstdint>

namespace superlin {

// Counter-based RNG: the Philox-4x64-10 block function. Stateless; a block
// of four 64-bit words is a pure function of (key, counter), so parallel and
// serial simulation schedules produce identical draws by construction.
struct Philox4x64 {
  static std::array<std::uint64_t, 4> block(
      const std::array<std::uint64_t, 2>& key,
      const std::array<std::uint64_t, 4>& counter) noexcept;
};

// Namespacing of independent stream families within one seed.
enum class StreamPurpose : std::uint64_t {
  Scores = 1,    // raw within-cell scores of simulated experiments
  Deviates = 2,  // direct standard-normal / uniform deviates
};

// One logical random stream, addressed by (seed, purpose, replicate,
// experiment, condition). Streams with distinct addresses are independent;
// a stream's output depends only on its address and how many values have
// been drawn from it.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamPurpose purpose,
               std::uint64_t replicate = 0, std::uint64_t experiment = 0,
               std::uint64_t condition = 0) noexcept;

  std::uint64_t next_u64() noexcept;

  // Uniform on the open interval (0, 1): ((x >> 11) + 0.5) * 2^-53.
  double uniform() noexcept;

  // Standard normal via the inverse CDF applied to uniform().
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_;  // {replicate, experiment, condition, block}
  std::array<std::uint64_t, 4> buffer_;
  int index_;  // next unread slot in buffer_, 4 = exhausted
};

}  // namespace superlin
