#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al. 2011).
//
// A stream is identified by (seed, stream id).  The seed is the Philox key;
// the stream id fills the upper half of the counter and a block index the
// lower half, so distinct streams never share a counter value.
//
// Stream ids used by the library:
//   initial sampling   domain 1, (replica, site)   one stream per site
//   dynamics           domain 2, (replica, 0)      one stream per replica
//   coupled sampling   domain 3, (replica, site)

#include <array>
#include <cmath>
#include <cstdint>

namespace fzr {

using Philox4x32Block = std::array<std::uint32_t, 4>;

inline Philox4x32Block philox4x32_10(Philox4x32Block ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u;
    constexpr std::uint32_t M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u;
    constexpr std::uint32_t W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
        const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
        const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

enum class StreamDomain : std::uint32_t { Initial = 1, Dynamics = 2, Coupling = 3, Auxiliary = 4 };

// 64-bit stream id: [domain:8][replica:24][index:32].
constexpr std::uint64_t stream_id(StreamDomain d, std::uint64_t replica, std::uint64_t index) {
    return (std::uint64_t(d) << 56) | ((replica & 0xFFFFFFull) << 32) | (index & 0xFFFFFFFFull);
}

inline double to_unit_double(std::uint64_t bits) {
    return double(bits >> 11) * 0x1.0p-53;
}

// Sequential generator over one stream.  Satisfies UniformRandomBitGenerator.
class Philox {
public:
    using result_type = std::uint64_t;

    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
          stream_(stream) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()() {
        if (pos_ == 2 * kBatch) refill();
        return buf_[pos_++];
    }

    // Uniform in [0,1).
    double uniform() { return to_unit_double((*this)()); }

    // Uniform in (0,1].
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential() { return -std::log(uniform_pos()); }

    // Uniform integer in [0, n) by multiply-shift; bias below n/2^64.
    std::uint64_t below(std::uint64_t n) {
        return std::uint64_t((static_cast<unsigned __int128>((*this)()) * n) >> 64);
    }

    std::uint64_t blocks_used() const { return block_; }

private:
    // Blocks are produced in batches so independent rounds can overlap.
    void refill() {
        for (int b = 0; b < kBatch; ++b) {
            const std::uint64_t blk = block_ + std::uint64_t(b);
            const Philox4x32Block ctr{std::uint32_t(blk), std::uint32_t(blk >> 32),
                                      std::uint32_t(stream_), std::uint32_t(stream_ >> 32)};
            const auto out = philox4x32_10(ctr, key_);
            buf_[std::size_t(2 * b)] = (std::uint64_t(out[1]) << 32) | out[0];
            buf_[std::size_t(2 * b + 1)] = (std::uint64_t(out[3]) << 32) | out[2];
        }
        block_ += kBatch;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    static constexpr int kBatch = 8;
    std::array<std::uint64_t, 2 * kBatch> buf_{};
    int pos_ = 2 * kBatch;
};

// Single uniform for (seed, stream), first block of the stream.
inline double stream_uniform(std::uint64_t seed, std::uint64_t stream) {
    Philox g(seed, stream);
    return g.uniform();
}

} // namespace fzr
