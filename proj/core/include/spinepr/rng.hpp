#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace spinepr {

// Philox4x64-10 counter-based generator (Salmon et al., SC'11), compatible with
// numpy.random.Philox: same round constants, same output order, counter word 0
// increments first.  Known-answer vectors from numpy are frozen in the tests.
//
// Being counter-based makes parallel trajectory substreams trivial: trajectory
// i of a run seeded with s uses key = (s, i) and starts its counter at zero, so
// any execution order (or thread count) produces identical samples.
class Philox4x64 {
public:
  using result_type = std::uint64_t;

  Philox4x64(std::uint64_t key0, std::uint64_t key1 = 0,
             std::array<std::uint64_t, 4> counter = {0, 0, 0, 0})
      : key_{key0, key1}, counter_(counter), buf_pos_(4) {}

  std::uint64_t next_u64() {
    if (buf_pos_ == 4) {
      increment(counter_);  // numpy pre-increments before generating each block
      buf_ = block(counter_, key_);
      buf_pos_ = 0;
    }
    return buf_[buf_pos_++];
  }

  // uniform on [0,1) with 53 random bits, numpy's to-double convention
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal pair by Box-Muller (exact transform, no tables; we need
  // reproducibility across platforms more than ziggurat's speed)
  void next_normal_pair(double& z0, double& z1) {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard; probability 2^-53
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    z0 = r * std::cos(phi);
    z1 = r * std::sin(phi);
  }

  // complex Gaussian eta with <|eta|^2> = var2 (independent re/im parts)
  std::complex<double> next_complex_normal(double var2) {
    double z0, z1;
    next_normal_pair(z0, z1);
    const double s = std::sqrt(var2 / 2.0);
    return {s * z0, s * z1};
  }

  static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                            std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      ctr = philox_round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  static std::array<std::uint64_t, 4> philox_round(const std::array<std::uint64_t, 4>& x,
                                                   const std::array<std::uint64_t, 2>& key) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, x[0], hi0, lo0);
    mulhilo(kMul1, x[2], hi1, lo1);
    return {hi1 ^ x[1] ^ key[0], lo1, hi0 ^ x[3] ^ key[1], lo0};
  }

  static void increment(std::array<std::uint64_t, 4>& ctr) {
    if (++ctr[0] != 0) return;
    if (++ctr[1] != 0) return;
    if (++ctr[2] != 0) return;
    ++ctr[3];
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 4> buf_{};
  int buf_pos_;
};

// Substream for one Monte Carlo trajectory: key = (run seed, trajectory index).
inline Philox4x64 trajectory_stream(std::uint64_t run_seed, std::uint64_t trajectory_index) {
  return Philox4x64(run_seed, trajectory_index);
}

}
