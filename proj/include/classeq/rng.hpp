#pragma once

#include <array>
#include <cstdint>

// Counter-based generator (Philox4x32-10). Each agent index maps to an
// independent block, so draws are reproducible and independent of how work is
// partitioned across threads.

namespace classeq::rng {

struct Philox4x32 {
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block generate(Block counter, Key key) {
        constexpr std::uint32_t kM0 = 0xD2511F53u;
        constexpr std::uint32_t kM1 = 0xCD9E8D57u;
        constexpr std::uint32_t kW0 = 0x9E3779B9u;
        constexpr std::uint32_t kW1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t(kM0) * counter[0];
            const std::uint64_t p1 = std::uint64_t(kM1) * counter[2];
            const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
            const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
            counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
            key[0] += kW0;
            key[1] += kW1;
        }
        return counter;
    }
};

/// Uniform in (0,1) from 53 random bits; never returns an endpoint.
inline double uniform53(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((std::uint64_t(hi) << 32) | lo) >> 11;
    return (double(bits) + 0.5) * 0x1p-53;
}

/// Uniform in (0,1) from 32 random bits.
inline double uniform32(std::uint32_t w) {
    return (double(w) + 0.5) * 0x1p-32;
}

struct AgentDraws {
    double cost_u;      // drives the cost quantile
    double signal_u;    // signal noise
    double decision_u;  // classifier randomization
};

inline AgentDraws agent_draws(std::uint64_t seed, std::uint64_t agent_index,
                              std::uint32_t stream = 0) {
    const Philox4x32::Block ctr = {std::uint32_t(agent_index), std::uint32_t(agent_index >> 32),
                                   stream, 0u};
    const Philox4x32::Key key = {std::uint32_t(seed), std::uint32_t(seed >> 32)};
    const auto w = Philox4x32::generate(ctr, key);
    return {uniform53(w[0], w[1]), uniform32(w[2]), uniform32(w[3])};
}

}  // namespace classeq::rng
