#include "braggsim/lattice_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "braggsim/errors.hpp"
#include "braggsim/rng.hpp"

namespace braggsim {

namespace {

constexpr double grid_reach_sigmas = 8.0;

long long checked_integer(double x, const char* what) {
    const double r = std::round(x);
    if (!(std::abs(x - r) <= 1e-9) || r < 0.0)
        throw DomainError(std::string(what) + " must be a non-negative integer");
    return static_cast<long long>(r);
}

DiscreteLaw delta_at_zero() {
    DiscreteLaw law;
    law.values = {0.0};
    law.probabilities = {1.0};
    return law;
}

void renormalize(DiscreteLaw& law) {
    const double mass = std::accumulate(law.probabilities.begin(), law.probabilities.end(), 0.0);
    law.pre_normalization_mass = mass;
    if (mass > 0.0)
        for (double& p : law.probabilities) p /= mass;
}

// Discrete Gaussian on the non-negative integer grid, mean = variance = mu,
// truncated at grid_reach_sigmas and normalized. Values returned as (offset, pmf).
struct IntegerGaussian {
    long long lo = 0;
    std::vector<double> pmf;
};

IntegerGaussian integer_gaussian(double mu) {
    IntegerGaussian g;
    if (mu <= 0.0) {
        g.pmf = {1.0};
        return g;
    }
    const double sigma = std::sqrt(mu);
    g.lo = std::max(0LL, static_cast<long long>(std::ceil(mu - grid_reach_sigmas * sigma)));
    const long long hi =
        std::max(g.lo, static_cast<long long>(std::floor(mu + grid_reach_sigmas * sigma)));
    g.pmf.resize(static_cast<std::size_t>(hi - g.lo + 1));
    double mass = 0.0;
    for (std::size_t i = 0; i < g.pmf.size(); ++i) {
        const double k = static_cast<double>(g.lo + static_cast<long long>(i));
        g.pmf[i] = std::exp(-0.5 * (k - mu) * (k - mu) / mu);
        mass += g.pmf[i];
    }
    for (double& p : g.pmf) p /= mass;
    return g;
}

}  // namespace

DiscreteLaw gaussian_total_law(double mean_total) {
    if (!(mean_total > 0.0)) throw DomainError("mean total atom number must be positive");
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * mean_total);
    const IntegerGaussian g = integer_gaussian(mean_total);
    DiscreteLaw law;
    law.values.reserve(g.pmf.size());
    law.probabilities.reserve(g.pmf.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < g.pmf.size(); ++i) {
        const double n = static_cast<double>(g.lo + static_cast<long long>(i));
        const double p = norm * std::exp(-0.5 * (n - mean_total) * (n - mean_total) / mean_total);
        law.values.push_back(n);
        law.probabilities.push_back(p);
        mass += p;
    }
    law.pre_normalization_mass = mass;
    for (double& p : law.probabilities) p /= mass;
    return law;
}

DiscreteLaw even_odd_difference_law(StateKind kind, double mean_or_total) {
    if (mean_or_total < 0.0) throw DomainError("atom number must be >= 0");

    if (kind == StateKind::sf1) {
        const double mu = mean_or_total;
        if (mu == 0.0) return delta_at_zero();
        const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * mu);
        const long long hi =
            static_cast<long long>(std::ceil(grid_reach_sigmas * std::sqrt(mu)));
        DiscreteLaw law;
        for (long long k = 0; k <= hi; ++k) {
            const double dk = static_cast<double>(k);
            law.values.push_back(dk);
            law.probabilities.push_back((k == 0 ? 1.0 : 2.0) * norm *
                                        std::exp(-0.5 * dk * dk / mu));
        }
        renormalize(law);
        return law;
    }

    const long long n = checked_integer(mean_or_total, "total atom number");
    if (n == 0) return delta_at_zero();
    const double dn = static_cast<double>(mean_or_total);
    const double norm = std::sqrt(2.0 / (std::numbers::pi * dn));
    long long hi = static_cast<long long>(std::ceil(grid_reach_sigmas * std::sqrt(dn))) + 1;
    hi = std::min(hi, n);
    DiscreteLaw law;
    for (long long k = n % 2; k <= hi; k += 2) {
        const double dk = static_cast<double>(k);
        law.values.push_back(dk);
        law.probabilities.push_back((k == 0 ? 1.0 : 2.0) * norm *
                                    std::exp(-0.5 * dk * dk / dn));
    }
    renormalize(law);
    return law;
}

double RayleighLaw::pdf(double omega) const {
    if (omega < 0.0) return 0.0;
    return (2.0 * omega / mean_total) * std::exp(-omega * omega / mean_total);
}

double RayleighLaw::cdf(double omega) const {
    if (omega <= 0.0) return 0.0;
    return -std::expm1(-omega * omega / mean_total);
}

double RayleighLaw::mean() const { return 0.5 * std::sqrt(std::numbers::pi * mean_total); }

double RayleighLaw::std_dev() const {
    return std::sqrt((1.0 - std::numbers::pi / 4.0) * mean_total);
}

double RayleighLaw::mode() const { return std::sqrt(0.5 * mean_total); }

RayleighLaw rayleigh_walk_law(double mean_total) {
    if (!(mean_total > 0.0)) throw DomainError("mean total atom number must be positive");
    return RayleighLaw{mean_total};
}

Spectrum p_class_law(StateKind kind, double mean_total, int sites, int p, int q,
                     const PClassOptions& options) {
    if (p < 3)
        throw DomainError(
            "class decomposition needs p >= 3; p <= 2 is covered by "
            "even_odd_difference_law and the total-number law");
    if (sites < p || sites % p != 0)
        throw DomainError("site count must be a positive multiple of p");
    if (q < 1 || std::gcd(q, p) != 1) throw DomainError("q and p must be coprime, q >= 1");
    if (mean_total < 0.0) throw DomainError("atom number must be >= 0");

    // Root-of-unity phasors for the p class sums.
    std::vector<double> cos_root(static_cast<std::size_t>(p));
    std::vector<double> sin_root(static_cast<std::size_t>(p));
    for (int l = 0; l < p; ++l) {
        const double angle =
            2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(l) * q) % p) /
            static_cast<double>(p);
        cos_root[static_cast<std::size_t>(l)] = std::cos(angle);
        sin_root[static_cast<std::size_t>(l)] = std::sin(angle);
    }
    const auto walk_modulus = [&](const std::vector<long long>& counts) {
        double re = 0.0, im = 0.0;
        for (int l = 0; l < p; ++l) {
            const double c = static_cast<double>(counts[static_cast<std::size_t>(l)]);
            re += c * cos_root[static_cast<std::size_t>(l)];
            im += c * sin_root[static_cast<std::size_t>(l)];
        }
        return std::hypot(re, im);
    };

    std::vector<SpectralLine> raw;

    if (!options.sample) {
        if (kind == StateKind::sf1) {
            const IntegerGaussian g = integer_gaussian(mean_total / static_cast<double>(p));
            double total = 1.0;
            bool over = false;
            for (int l = 0; l < p; ++l) {
                total *= static_cast<double>(g.pmf.size());
                if (total > 1e18) over = true;
            }
            if (over || static_cast<std::size_t>(total) > options.enumeration.max_configurations)
                throw BudgetExceeded(
                    over ? options.enumeration.max_configurations + 1
                         : static_cast<std::size_t>(total),
                    options.enumeration.max_configurations,
                    "class-sum enumeration exceeds the configuration budget; use sampling");
            std::vector<std::size_t> idx(static_cast<std::size_t>(p), 0);
            std::vector<long long> counts(static_cast<std::size_t>(p), g.lo);
            for (;;) {
                double prob = 1.0;
                for (int l = 0; l < p; ++l)
                    prob *= g.pmf[idx[static_cast<std::size_t>(l)]];
                raw.push_back({walk_modulus(counts), prob});
                int l = 0;
                for (; l < p; ++l) {
                    auto& i = idx[static_cast<std::size_t>(l)];
                    if (++i < g.pmf.size()) {
                        counts[static_cast<std::size_t>(l)] = g.lo + static_cast<long long>(i);
                        break;
                    }
                    i = 0;
                    counts[static_cast<std::size_t>(l)] = g.lo;
                }
                if (l == p) break;
            }
        } else {
            const long long n = checked_integer(mean_total, "total atom number");
            // compositions of n into p classes, C(n + p - 1, p - 1) of them
            double count = 1.0;
            for (int i = 1; i < p; ++i)
                count *= static_cast<double>(n + i) / static_cast<double>(i);
            if (count > static_cast<double>(options.enumeration.max_configurations))
                throw BudgetExceeded(
                    count > 1e18 ? options.enumeration.max_configurations + 1
                                 : static_cast<std::size_t>(count),
                    options.enumeration.max_configurations,
                    "class composition count exceeds the configuration budget; use sampling");
            std::vector<double> lg(static_cast<std::size_t>(n) + 1);
            for (long long k = 0; k <= n; ++k)
                lg[static_cast<std::size_t>(k)] = std::lgamma(static_cast<double>(k) + 1.0);
            const double log_base = lg[static_cast<std::size_t>(n)] -
                                    static_cast<double>(n) * std::log(static_cast<double>(p));
            std::vector<long long> counts(static_cast<std::size_t>(p), 0);
            const auto recurse = [&](auto&& self, int cls, long long left, double logp) -> void {
                if (cls == p - 1) {
                    counts[static_cast<std::size_t>(cls)] = left;
                    raw.push_back(
                        {walk_modulus(counts),
                         std::exp(logp - lg[static_cast<std::size_t>(left)])});
                    return;
                }
                for (long long k = 0; k <= left; ++k) {
                    counts[static_cast<std::size_t>(cls)] = k;
                    self(self, cls + 1, left - k, logp - lg[static_cast<std::size_t>(k)]);
                }
            };
            recurse(recurse, 0, n, log_base);
        }
        Spectrum spec = merge_lines(std::move(raw));
        if (spec.lines.size() > options.max_lines_unbinned)
            return bin_spectrum(spec, BinningSpec{0.0, options.bin_width});
        return spec;
    }

    if (options.samples == 0) throw DomainError("sample count must be positive");
    Rng rng(options.seed);
    raw.reserve(options.samples);
    const double weight = 1.0 / static_cast<double>(options.samples);
    if (kind == StateKind::sf1) {
        const IntegerGaussian g = integer_gaussian(mean_total / static_cast<double>(p));
        std::vector<double> cdf(g.pmf.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < g.pmf.size(); ++i) {
            acc += g.pmf[i];
            cdf[i] = acc;
        }
        std::vector<long long> counts(static_cast<std::size_t>(p));
        for (std::size_t s = 0; s < options.samples; ++s) {
            for (int l = 0; l < p; ++l)
                counts[static_cast<std::size_t>(l)] =
                    g.lo + static_cast<long long>(rng.sample_cdf(cdf));
            raw.push_back({walk_modulus(counts), weight});
        }
    } else {
        const long long n = checked_integer(mean_total, "total atom number");
        std::vector<int> occ;
        std::vector<long long> counts(static_cast<std::size_t>(p));
        for (std::size_t s = 0; s < options.samples; ++s) {
            rng.multinomial_uniform(static_cast<int>(n), p, occ);
            for (int l = 0; l < p; ++l) counts[static_cast<std::size_t>(l)] = occ[static_cast<std::size_t>(l)];
            raw.push_back({walk_modulus(counts), weight});
        }
    }
    Spectrum spec;
    spec.lines = std::move(raw);
    return bin_spectrum(spec, BinningSpec{0.0, options.bin_width});
}

}
