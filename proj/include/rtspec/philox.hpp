#pragma once

#include <cstdint>

namespace rtspec {

// Philox-4x32-10 counter-based generator. A (seed, stream) pair fully
// determines the output sequence, so per-replica streams can be consumed
// in parallel without splitting hazards.
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream)
      : key0_(std::uint32_t(seed)), key1_(std::uint32_t(seed >> 32)),
        ctr2_(std::uint32_t(stream)), ctr3_(std::uint32_t(stream >> 32)) {}

  std::uint32_t next_u32() {
    if (have_ == 0) {
      fill();
      have_ = 4;
    }
    return out_[--have_];
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

  static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
    std::uint64_t p = std::uint64_t(a) * b;
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
  }

  void fill() {
    std::uint32_t c0 = std::uint32_t(counter_), c1 = std::uint32_t(counter_ >> 32);
    std::uint32_t c2 = ctr2_, c3 = ctr3_;
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(kM0, c0, hi0, lo0);
      mulhilo(kM1, c2, hi1, lo1);
      std::uint32_t n0 = hi1 ^ c1 ^ k0, n1 = lo1, n2 = hi0 ^ c3 ^ k1, n3 = lo0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += kW0;
      k1 += kW1;
    }
    out_[0] = c0; out_[1] = c1; out_[2] = c2; out_[3] = c3;
    ++counter_;
  }

  std::uint32_t key0_, key1_, ctr2_, ctr3_;
  std::uint64_t counter_ = 0;
  std::uint32_t out_[4] = {0, 0, 0, 0};
  int have_ = 0;
};

}  // namespace rtspec
