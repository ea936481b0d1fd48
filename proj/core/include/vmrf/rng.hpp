#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vmrf {

// Purpose tags keep substreams for different consumers disjoint.
enum class StreamTag : std::uint64_t {
    brownian = 1,
    orthogonality = 2,
    cholesky_oracle = 3,
    permutation = 4,
    initial_condition = 5,
    system_noise = 6,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Hashes (seed, tag, indices...) into a 64-bit engine seed.
std::uint64_t derive_stream_seed(std::uint64_t seed, StreamTag tag, std::initializer_list<std::uint64_t> indices) noexcept;

// Independent random stream addressed by a key, so that each path (or vertex, or
// permutation) draws the same numbers regardless of which worker runs it.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, StreamTag tag, std::initializer_list<std::uint64_t> indices);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace vmrf
