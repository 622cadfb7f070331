#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace splab {

//! Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output is
//! a pure function of (key, counter), so any stream position can be
//! reached directly and parallel consumers never share state.
class Philox4x32 {
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit constexpr Philox4x32(Key key) noexcept : key_(key) {}
    explicit constexpr Philox4x32(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
    {
    }

    [[nodiscard]] constexpr Counter operator()(Counter ctr) const noexcept
    {
        Key key = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k) noexcept
    {
        const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }

    Key key_;
};

//! Standard normal draws addressed by (stream, index): stream selects an
//! independent sequence (one per sample), index the position within it.
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t stream) noexcept : gen_(seed), stream_(stream) {}

    //! Normal number `index` of this stream. Pairs (2m, 2m+1) come from one
    //! Box-Muller transform of one Philox block.
    [[nodiscard]] double operator()(std::uint64_t index) const noexcept
    {
        const std::uint64_t block = index / 2;
        const auto out = gen_({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                               static_cast<std::uint32_t>(stream_),
                               static_cast<std::uint32_t>(stream_ >> 32)});
        const double u1 = to_unit(out[0], out[1]);
        const double u2 = to_unit(out[2], out[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return index % 2 == 0 ? radius * std::cos(angle) : radius * std::sin(angle);
    }

  private:
    // Uniform in (0, 1): 53 random bits, offset by half an ulp.
    static double to_unit(std::uint32_t lo, std::uint32_t hi) noexcept
    {
        const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    Philox4x32 gen_;
    std::uint64_t stream_;
};

//! Uniform draw in (0, 1) addressed by (seed, stream, index).
[[nodiscard]] inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                                      std::uint64_t index) noexcept
{
    const auto out = Philox4x32(seed)({static_cast<std::uint32_t>(index),
                                       static_cast<std::uint32_t>(index >> 32),
                                       static_cast<std::uint32_t>(stream),
                                       static_cast<std::uint32_t>(stream >> 32)});
    const std::uint64_t bits = ((std::uint64_t{out[1]} << 32) | out[0]) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

} // namespace splab
