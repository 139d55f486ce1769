#include "braggsim/rng.hpp"

#include <algorithm>
#include <cmath>

#include "braggsim/errors.hpp"

namespace braggsim {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed + (stream + 1) * 0x9E3779B97F4A7C15ull;
    return splitmix64(s);
}

Rng::Rng(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64(seed);
    // xoshiro must not start from the all-zero state; splitmix64 of any seed
    // cannot produce four zero words, but keep the guard explicit.
    if (s_[0] == 0 && s_[1] == 0 && s_[2] == 0 && s_[3] == 0) s_[0] = 1;
}

static inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::poisson(double mean) {
    if (!(mean >= 0.0)) throw DomainError("poisson mean must be >= 0");
    if (mean == 0.0) return 0;
    int total = 0;
    double remaining = mean;
    while (remaining > 30.0) {
        const int chunks = static_cast<int>(std::ceil(remaining / 30.0));
        const double chunk = remaining / chunks;
        // sample one chunk, keep the rest for the next rounds
        remaining -= chunk;
        total += poisson(chunk);
    }
    const double u = next_double();
    double p = std::exp(-remaining);
    double cdf = p;
    int k = 0;
    while (u >= cdf && k < 1000) {
        ++k;
        p *= remaining / k;
        cdf += p;
    }
    return total + k;
}

void Rng::multinomial_uniform(int n, int m, std::vector<int>& out) {
    out.assign(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < n; ++i) {
        int site = static_cast<int>(next_double() * m);
        if (site >= m) site = m - 1;
        ++out[static_cast<std::size_t>(site)];
    }
}

void Rng::multinomial(int n, const std::vector<double>& probs, std::vector<int>& out) {
    out.assign(probs.size(), 0);
    for (int i = 0; i < n; ++i) {
        double u = next_double();
        std::size_t j = 0;
        for (; j + 1 < probs.size(); ++j) {
            if (u < probs[j]) break;
            u -= probs[j];
        }
        ++out[j];
    }
}

std::size_t Rng::sample_cdf(const std::vector<double>& cdf) {
    const double u = next_double();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) return cdf.size() - 1;
    return static_cast<std::size_t>(it - cdf.begin());
}

}
