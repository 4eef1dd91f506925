#include "ddm/rng.hpp"

namespace ddm {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Philox::Block Philox::encrypt(Block c, Key k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

Philox::Philox(RngSeed s, std::uint64_t substream) : stream_(s.stream_id) {
  const std::uint64_t k = splitmix64(s.seed + substream * 0x9E3779B97F4A7C15ull);
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

Philox::result_type Philox::operator()() {
  if (used_ == 4) {
    const Block ctr = {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                       static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    buf_ = encrypt(ctr, key_);
    ++block_;
    used_ = 0;
  }
  return buf_[used_++];
}

double uniform_open(Philox& g) {
  const std::uint64_t hi = g() >> 6;  // 26 bits
  const std::uint64_t lo = g() >> 5;  // 27 bits
  const std::uint64_t bits = (hi << 27) | lo;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace ddm
