#pragma once

#include <array>
#include <cstdint>

namespace tilq {

// Philox 4x32-10 counter-based generator. Stateless: every block is a pure
// function of (key, counter), so per-path streams can be evaluated in any
// order, on any number of threads, with bit-identical output.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t counter_hi,
                                        std::uint64_t counter_lo);

// Uniform double in (0, 1) from block word pair (w0, w1).
double uniform_from_words(std::uint32_t w0, std::uint32_t w1);

// index-th uniform of stream (seed, stream), in (0, 1).
double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// index-th standard normal of stream (seed, stream); Box-Muller over one
// Philox block.
double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace tilq
