#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ddm {

struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Philox4x32-10 (Salmon et al., SC'11) used as a counter-based engine: the key
// comes from the seed and a substream tag, the upper half of the counter is
// the stream id, the lower half counts 128-bit blocks. Satisfies
// UniformRandomBitGenerator, so Boost.Random distributions can draw from it.
class Philox {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox(RngSeed s, std::uint64_t substream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Raw bijection, exposed for known-answer tests.
  static Block encrypt(Block counter, Key key);

 private:
  Key key_{};
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  Block buf_{};
  int used_ = 4;
};

// Uniform on (0, 1), 53 random bits, never exactly 0 or 1.
double uniform_open(Philox& g);

}  // namespace ddm
