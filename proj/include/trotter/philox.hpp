#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace trotter {

/// Philox4x32-10 counter-based generator.
///
/// Every coefficient, sample or shuffle draw is addressed by an explicit
/// 128-bit counter, so generation is reproducible across platforms and
/// thread counts: there is no sequential state to share.  The key is the
/// 64-bit user seed.
///
/// Stream-splitting rule used throughout the project: counter word 0 is a
/// domain tag (see PhiloxDomain), words 1..3 identify the draw within the
/// domain (packed orbital indices, sample index, ...).
class Philox {
 public:
  explicit Philox(std::uint64_t seed)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)) {}

  std::array<std::uint32_t, 4> block(std::uint32_t c0, std::uint32_t c1,
                                     std::uint32_t c2,
                                     std::uint32_t c3) const {
    std::uint32_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x0;
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t y0 = hi1 ^ x1 ^ k0;
      const std::uint32_t y1 = lo1;
      const std::uint32_t y2 = hi0 ^ x3 ^ k1;
      const std::uint32_t y3 = lo0;
      x0 = y0;
      x1 = y1;
      x2 = y2;
      x3 = y3;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return {x0, x1, x2, x3};
  }

  /// Uniform double in [0,1) from two 32-bit words (53-bit resolution).
  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  std::uint32_t key0_;
  std::uint32_t key1_;
};

/// Domain tags for counter word 0.
enum class PhiloxDomain : std::uint32_t {
  EnsembleNumberNumber = 1,
  EnsembleThreeIndex = 2,
  EnsembleFourIndex = 3,
  TriangleMc = 4,
  SosMc = 5,
  OrderShuffle = 6,
};

/// One (include?, magnitude-uniform, sign) decision from a single block.
struct CoefficientDraw {
  bool include;
  double unit;  // uniform in [0,1), feeds the magnitude distribution
  double sign;  // +1 or -1
};

inline CoefficientDraw draw_coefficient(const Philox& rng, PhiloxDomain dom,
                                        std::uint32_t c1, std::uint32_t c2,
                                        double fraction) {
  const auto b =
      rng.block(static_cast<std::uint32_t>(dom), c1, c2, 0);
  CoefficientDraw d;
  d.include = static_cast<double>(b[0]) * 0x1.0p-32 < fraction;
  d.unit = Philox::to_unit(b[1], b[2]);
  d.sign = (b[3] & 1u) ? 1.0 : -1.0;
  return d;
}

/// Inverse-CDF exponential with the given mean (scale parameter).
inline double exponential_from_unit(double unit, double mean) {
  return -mean * std::log1p(-unit);
}

}  // namespace trotter
