#pragma once

#include <array>
#include <cstdint>

namespace symdyn::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// A (counter, key) pair maps to four 32-bit words through ten bumped-key
// rounds; distinct coordinates give independent values, so parallel workers
// need no shared state.
struct Philox4x32 {
    static constexpr std::uint32_t M0 = 0xD2511F53u;
    static constexpr std::uint32_t M1 = 0xCD9E8D57u;
    static constexpr std::uint32_t W0 = 0x9E3779B9u;
    static constexpr std::uint32_t W1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
            const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
            const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += W0;
            key[1] += W1;
        }
        return ctr;
    }
};

inline double uniform_from_bits(std::uint64_t v) {
    return double(v >> 11) * 0x1.0p-53; // [0, 1)
}

// One logical stream of uniforms addressed as (trial, draw index), so any
// worker can evaluate any draw independently. Layout: counter = (trial_lo,
// trial_hi, block, stream), key = seed. Draws 2d and 2d+1 share block d.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint32_t stream)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, stream_(stream) {}

    std::array<std::uint32_t, 4> block(std::uint64_t trial, std::uint32_t block_index) const {
        return Philox4x32::block({std::uint32_t(trial), std::uint32_t(trial >> 32),
                                  block_index, stream_},
                                 key_);
    }

    std::uint64_t raw64(std::uint64_t trial, std::uint32_t draw) const {
        const auto b = block(trial, draw >> 1);
        return (draw & 1u) ? (std::uint64_t(b[3]) << 32 | b[2])
                           : (std::uint64_t(b[1]) << 32 | b[0]);
    }

    double uniform(std::uint64_t trial, std::uint32_t draw) const {
        return uniform_from_bits(raw64(trial, draw));
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_;
};

// Sequential view of one trial's draws; caches the current block so two
// consecutive uniforms cost one Philox call.
class TrialRng {
public:
    TrialRng(const Stream& s, std::uint64_t trial) : s_(&s), trial_(trial) {}

    double operator()() {
        const std::uint32_t draw = next_++;
        if ((draw & 1u) == 0u) block_ = s_->block(trial_, draw >> 1);
        const std::uint64_t v = (draw & 1u) ? (std::uint64_t(block_[3]) << 32 | block_[2])
                                            : (std::uint64_t(block_[1]) << 32 | block_[0]);
        return uniform_from_bits(v);
    }

private:
    const Stream* s_;
    std::uint64_t trial_;
    std::uint32_t next_ = 0;
    std::array<std::uint32_t, 4> block_{};
};

} // namespace symdyn::rng
