#pragma once

#include <cstdint>
#include <random>

namespace hcf {

using Rng = std::mt19937_64;

/// Independent stream for work unit `stream_id` under a run seed. The same
/// (seed, stream_id) pair always yields the same sequence, so results do not
/// depend on which worker picks up the unit.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream_id)
{
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
        0x68636675u};
    return Rng(seq);
}

} // namespace hcf
