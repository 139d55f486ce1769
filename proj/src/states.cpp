#include "braggsim/states.hpp"

#include <cmath>
#include <numeric>

#include "braggsim/errors.hpp"
#include "braggsim/rng.hpp"

namespace braggsim {

namespace {

constexpr double pi = 3.14159265358979323846;

long long gcd_ll(long long a, long long b) {
    while (b) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Smallest K with P(Poisson(mean) > K) <= tail.
int poisson_cutoff(double mean, double tail) {
    if (mean <= 0.0) return 0;
    const int cap = static_cast<int>(mean + 60.0 * std::sqrt(mean) + 200.0);
    double lp = -mean;
    double cdf = std::exp(lp);
    int k = 0;
    while (1.0 - cdf > tail && k < cap) {
        ++k;
        lp += std::log(mean / k);
        cdf += std::exp(lp);
    }
    return k;
}

std::vector<double> poisson_log_pmf_table(double mean, int kmax) {
    std::vector<double> lp(static_cast<std::size_t>(kmax) + 1);
    if (mean <= 0.0) {
        lp[0] = 0.0;
        for (int k = 1; k <= kmax; ++k) lp[static_cast<std::size_t>(k)] = -1e300;
        return lp;
    }
    for (int k = 0; k <= kmax; ++k)
        lp[static_cast<std::size_t>(k)] =
            -mean + k * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0);
    return lp;
}

// C(N+M-1, M-1), saturating at cap+1.
std::size_t composition_count(int atoms, int sites, std::size_t cap) {
    unsigned long long r = 1;
    for (int i = 1; i <= sites - 1; ++i) {
        r = r * static_cast<unsigned long long>(atoms + i) / static_cast<unsigned long long>(i);
        if (r > cap) return cap + 1;
    }
    return static_cast<std::size_t>(r);
}

}

double LatticeGeometry::phase() const {
    if (rational) return 2.0 * pi * static_cast<double>(q) / static_cast<double>(p);
    return 4.0 * pi * spacing;
}

LatticeGeometry LatticeGeometry::from_spacing(int sites, double d_over_lambda) {
    if (sites < 1) throw DomainError("geometry needs at least one site");
    if (!(d_over_lambda > 0.0)) throw DomainError("spacing must be positive");
    LatticeGeometry g;
    g.sites = sites;
    g.spacing = d_over_lambda;
    g.rational = false;
    return g;
}

LatticeGeometry LatticeGeometry::from_rational_spacing(int sites, long long num, long long den) {
    if (sites < 1) throw DomainError("geometry needs at least one site");
    if (num < 1 || den < 1) throw DomainError("rational spacing must be positive");
    if (num > 1'000'000'000 || den > 1'000'000'000)
        throw DomainError("rational spacing terms must stay below 1e9");
    LatticeGeometry g;
    g.sites = sites;
    g.spacing = static_cast<double>(num) / static_cast<double>(den);
    g.rational = true;
    const long long div = gcd_ll(2 * num, den);
    g.q = 2 * num / div;
    g.p = den / div;
    return g;
}

LatticeGeometry LatticeGeometry::half_wavelength(int sites) {
    return from_rational_spacing(sites, 1, 2);
}

LatticeGeometry LatticeGeometry::quarter_wavelength(int sites) {
    return from_rational_spacing(sites, 1, 4);
}

double CoherentSFState::mean_total() const {
    double s = 0.0;
    for (const auto& a : alphas) s += std::norm(a);
    return s;
}

CoherentSFState CoherentSFState::uniform(int sites, double mean_total) {
    if (sites < 1) throw DomainError("coherent state needs at least one well");
    if (mean_total < 0.0) throw DomainError("mean atom number must be >= 0");
    CoherentSFState s;
    s.alphas.assign(static_cast<std::size_t>(sites),
                    std::sqrt(mean_total / static_cast<double>(sites)));
    return s;
}

void validate_state(const AtomicState& state, const LatticeGeometry& geometry) {
    const auto sites = static_cast<std::size_t>(geometry.sites);
    if (const auto* mott = std::get_if<MottState>(&state)) {
        if (mott->occupations.size() != sites)
            throw DimensionError("occupation list does not match the number of wells");
        for (int n : mott->occupations)
            if (n < 0) throw DimensionError("occupations must be >= 0");
    } else if (const auto* sf1 = std::get_if<CoherentSFState>(&state)) {
        if (sf1->alphas.size() != sites)
            throw DimensionError("amplitude list does not match the number of wells");
    } else {
        const auto& sf2 = std::get<NumberSFState>(state);
        if (sf2.total_atoms < 0) throw DimensionError("total atom number must be >= 0");
    }
}

double mean_total_atoms(const AtomicState& state) {
    if (const auto* mott = std::get_if<MottState>(&state))
        return std::accumulate(mott->occupations.begin(), mott->occupations.end(), 0.0);
    if (const auto* sf1 = std::get_if<CoherentSFState>(&state)) return sf1->mean_total();
    return static_cast<double>(std::get<NumberSFState>(state).total_atoms);
}

namespace {

std::vector<int> coherent_cutoffs(const CoherentSFState& sf1, const EnumerationOptions& options) {
    const int sites = static_cast<int>(sf1.alphas.size());
    const double per_well_tail = options.epsilon / sites;
    std::vector<int> cut(static_cast<std::size_t>(sites));
    for (int m = 0; m < sites; ++m)
        cut[static_cast<std::size_t>(m)] =
            poisson_cutoff(std::norm(sf1.alphas[static_cast<std::size_t>(m)]), per_well_tail);
    return cut;
}

}

std::size_t configuration_count(const AtomicState& state, const LatticeGeometry& geometry,
                                const EnumerationOptions& options) {
    validate_state(state, geometry);
    if (std::holds_alternative<MottState>(state)) return 1;
    if (const auto* sf1 = std::get_if<CoherentSFState>(&state)) {
        const auto cut = coherent_cutoffs(*sf1, options);
        std::size_t count = 1;
        for (int k : cut) {
            const auto width = static_cast<std::size_t>(k) + 1;
            if (count > (options.max_configurations + 1) / width)
                return options.max_configurations + 1;
            count *= width;
        }
        return count;
    }
    const auto& sf2 = std::get<NumberSFState>(state);
    return composition_count(sf2.total_atoms, geometry.sites, options.max_configurations);
}

void for_each_configuration(const AtomicState& state, const LatticeGeometry& geometry,
                            const EnumerationOptions& options, const ConfigurationVisitor& visit) {
    const std::size_t count = configuration_count(state, geometry, options);
    if (count > options.max_configurations)
        throw BudgetExceeded(count, options.max_configurations,
                             "exact enumeration exceeds the configuration budget");

    const auto sites = static_cast<std::size_t>(geometry.sites);

    if (const auto* mott = std::get_if<MottState>(&state)) {
        visit(mott->occupations, 0.0);
        return;
    }

    if (const auto* sf1 = std::get_if<CoherentSFState>(&state)) {
        const auto cut = coherent_cutoffs(*sf1, options);
        std::vector<std::vector<double>> lp(sites);
        for (std::size_t m = 0; m < sites; ++m)
            lp[m] = poisson_log_pmf_table(std::norm(sf1->alphas[m]), cut[m]);
        std::vector<int> occ(sites, 0);
        for (;;) {
            double logp = 0.0;
            for (std::size_t m = 0; m < sites; ++m)
                logp += lp[m][static_cast<std::size_t>(occ[m])];
            visit(occ, logp);
            std::size_t m = sites;
            while (m > 0) {
                --m;
                if (occ[m] < cut[m]) {
                    ++occ[m];
                    break;
                }
                occ[m] = 0;
                if (m == 0) return;
            }
        }
    }

    const auto& sf2 = std::get<NumberSFState>(state);
    const int atoms = sf2.total_atoms;
    std::vector<double> lg(static_cast<std::size_t>(atoms) + 1);
    for (int k = 0; k <= atoms; ++k)
        lg[static_cast<std::size_t>(k)] = std::lgamma(static_cast<double>(k) + 1.0);
    const double log_norm = lg[static_cast<std::size_t>(atoms)] -
                            atoms * std::log(static_cast<double>(geometry.sites));
    std::vector<int> occ(sites, 0);
    auto emit = [&]() {
        double logp = log_norm;
        for (std::size_t m = 0; m < sites; ++m) logp -= lg[static_cast<std::size_t>(occ[m])];
        visit(occ, logp);
    };
    // lexicographic composition walk, last site holds the remainder
    std::function<void(std::size_t, int)> rec = [&](std::size_t m, int remaining) {
        if (m + 1 == sites) {
            occ[m] = remaining;
            emit();
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            occ[m] = v;
            rec(m + 1, remaining - v);
        }
    };
    rec(0, atoms);
}

std::vector<Configuration> enumerate_configurations(const AtomicState& state,
                                                    const LatticeGeometry& geometry,
                                                    const EnumerationOptions& options) {
    std::vector<Configuration> result;
    const std::size_t count = configuration_count(state, geometry, options);
    if (count <= options.max_configurations) result.reserve(count);
    for_each_configuration(state, geometry, options,
                           [&](const std::vector<int>& occ, double logp) {
                               result.push_back({occ, logp});
                           });
    return result;
}

void sample_configurations(const AtomicState& state, const LatticeGeometry& geometry,
                           std::size_t count, std::uint64_t seed, const SampleVisitor& visit) {
    validate_state(state, geometry);
    Rng rng(seed);
    const auto sites = static_cast<std::size_t>(geometry.sites);
    std::vector<int> occ(sites, 0);

    if (const auto* mott = std::get_if<MottState>(&state)) {
        for (std::size_t i = 0; i < count; ++i) visit(mott->occupations);
        return;
    }
    if (const auto* sf1 = std::get_if<CoherentSFState>(&state)) {
        std::vector<double> means(sites);
        for (std::size_t m = 0; m < sites; ++m) means[m] = std::norm(sf1->alphas[m]);
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t m = 0; m < sites; ++m) occ[m] = rng.poisson(means[m]);
            visit(occ);
        }
        return;
    }
    const auto& sf2 = std::get<NumberSFState>(state);
    for (std::size_t i = 0; i < count; ++i) {
        rng.multinomial_uniform(sf2.total_atoms, geometry.sites, occ);
        visit(occ);
    }
}

std::vector<std::vector<int>> sample_configurations(const AtomicState& state,
                                                    const LatticeGeometry& geometry,
                                                    std::size_t count, std::uint64_t seed) {
    std::vector<std::vector<int>> draws;
    draws.reserve(count);
    sample_configurations(state, geometry, count, seed,
                          [&](const std::vector<int>& occ) { draws.push_back(occ); });
    return draws;
}

DiscreteLaw total_number_distribution(const AtomicState& state, double tail_epsilon) {
    DiscreteLaw law;
    if (const auto* mott = std::get_if<MottState>(&state)) {
        const double total =
            std::accumulate(mott->occupations.begin(), mott->occupations.end(), 0.0);
        law.values = {total};
        law.probabilities = {1.0};
        return law;
    }
    if (const auto* sf2 = std::get_if<NumberSFState>(&state)) {
        law.values = {static_cast<double>(sf2->total_atoms)};
        law.probabilities = {1.0};
        return law;
    }
    const auto& sf1 = std::get<CoherentSFState>(state);
    const double mean = sf1.mean_total();
    if (mean <= 0.0) {
        law.values = {0.0};
        law.probabilities = {1.0};
        return law;
    }
    const int hi = poisson_cutoff(mean, tail_epsilon / 2.0);
    int lo = 0;
    {
        double lp = -mean;
        double cdf = std::exp(lp);
        while (cdf <= tail_epsilon / 2.0 && lo < hi) {
            ++lo;
            lp += std::log(mean / lo);
            cdf += std::exp(lp);
        }
        if (lo > 0) --lo;  // keep the first point that pushed the cdf over
    }
    double raw_mass = 0.0;
    for (int k = lo; k <= hi; ++k) {
        const double lp = -mean + k * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0);
        law.values.push_back(static_cast<double>(k));
        law.probabilities.push_back(std::exp(lp));
        raw_mass += law.probabilities.back();
    }
    law.pre_normalization_mass = raw_mass;
    for (double& prob : law.probabilities) prob /= raw_mass;
    return law;
}

}
