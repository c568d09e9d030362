// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <array>

#include "stickymc/vec.hpp"

namespace stickymc {

/// Philox4x32-10 block function (Salmon et al., SC'11). Maps a 128-bit
/// counter and a 64-bit key to 128 pseudo-random bits with no state other
/// than the inputs, which is what makes the streams splittable: any
/// (key, counter) pair can be evaluated independently and in any order.
struct Philox4x32 {
    static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85u;
    static constexpr std::uint32_t kMultA = 0xD2511F53u;
    static constexpr std::uint32_t kMultB = 0xCD9E8D57u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMultA) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMultB) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeylA;
            key[1] += kWeylB;
        }
        return ctr;
    }
};

/// One reproducible random stream, identified by (seed, stream id).
///
/// Monte Carlo trajectories use stream id = trajectory index, so the draws
/// of trajectory i depend only on (seed, i) and never on which worker ran
/// it or in what order. Within a stream, draws are indexed by a 64-bit
/// block counter.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_{static_cast<std::uint32_t>(stream_id),
                  static_cast<std::uint32_t>(stream_id >> 32)} {}

    /// Next 64 random bits.
    std::uint64_t next_u64() {
        if (word_index_ >= 4) refill();
        const std::uint64_t lo = buffer_[word_index_];
        const std::uint64_t hi = buffer_[word_index_ + 1];
        word_index_ += 2;
        return lo | (hi << 32);
    }

    /// Next single random bit, served from a 64-bit pool.
    int next_bit() {
        if (bits_left_ == 0) {
            bit_pool_ = next_u64();
            bits_left_ = 64;
        }
        const int b = static_cast<int>(bit_pool_ & 1u);
        bit_pool_ >>= 1;
        --bits_left_;
        return b;
    }

    /// Uniform double in [0, 1) using 53 bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    void refill() {
        buffer_ = Philox4x32::block(
            {static_cast<std::uint32_t>(counter_),
             static_cast<std::uint32_t>(counter_ >> 32), stream_[0], stream_[1]},
            key_);
        ++counter_;
        word_index_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int word_index_ = 4;
    std::uint64_t bit_pool_ = 0;
    int bits_left_ = 0;
};

/// Vector of d independent +/-1 fair coin flips.
inline Vec rademacher_vector(RngStream& stream, int dim) {
    Vec::check_dim(dim);
    Vec v = Vec::zeros(dim);
    for (int i = 0; i < dim; ++i) v[i] = stream.next_bit() ? 1.0 : -1.0;
    return v;
}

} // namespace stickymc
