#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11) and a
// per-particle stream built on it. A stream is a pure function of
// (seed, stream id), so results do not depend on scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace mcmimo::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

[[nodiscard]] constexpr Counter philox4x32_10(Counter ctr, Key key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
    }
    return ctr;
}

/// Independent stream of uniforms and normals addressed by (seed, lane, index).
class ParticleStream {
public:
    ParticleStream(std::uint64_t seed, std::uint32_t lane, std::uint64_t index) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          lane_(lane),
          index_(index) {}

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        if (cursor_ == 2) refill();
        return buffer_[cursor_++];
    }

    /// Standard normal by Box-Muller.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

private:
    static double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
        const std::uint64_t bits = (std::uint64_t{hi} << 21) ^ (lo >> 11);  // 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    void refill() noexcept {
        const Counter out = philox4x32_10(
            {block_, lane_, static_cast<std::uint32_t>(index_),
             static_cast<std::uint32_t>(index_ >> 32)},
            key_);
        ++block_;
        buffer_[0] = to_unit(out[0], out[1]);
        buffer_[1] = to_unit(out[2], out[3]);
        cursor_ = 0;
    }

    Key key_;
    std::uint32_t lane_;
    std::uint64_t index_;
    std::uint32_t block_ = 0;
    std::array<double, 2> buffer_{};
    int cursor_ = 2;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mcmimo::rng
