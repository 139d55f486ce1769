#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace braggsim {

// splitmix64 step; used to expand seeds and to derive independent streams.
std::uint64_t splitmix64(std::uint64_t& state);

// Seed for logical sub-stream k of a run seeded with `seed`.
// Defined as splitmix64 applied to seed + (k+1)*0x9E3779B97F4A7C15, so
// stream k=0 differs from the root stream and streams are decorrelated.
// Parallel consumers should take one sub-stream per task index.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

// xoshiro256** seeded through splitmix64. Deterministic across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform in [0,1), 53-bit resolution.
    double next_double();

    // Exact Poisson sampling by inversion; means above 30 are split into
    // chunks of mean <= 30 and summed (Poisson additivity), which keeps the
    // inversion loop short and avoids any underflow regime.
    int poisson(double mean);

    // n independent uniform site picks over m sites; adds counts into out
    // (out is resized/zeroed here).
    void multinomial_uniform(int n, int m, std::vector<int>& out);

    // Same with arbitrary probabilities (linear-scan inversion; fine for the
    // small category counts used here).
    void multinomial(int n, const std::vector<double>& probs, std::vector<int>& out);

    // Index i with cdf[i-1] <= u < cdf[i]; cdf must be nondecreasing with
    // cdf.back() ~ 1.
    std::size_t sample_cdf(const std::vector<double>& cdf);

  private:
    std::array<std::uint64_t, 4> s_;
};

}
