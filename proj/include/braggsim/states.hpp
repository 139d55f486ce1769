#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "braggsim/law.hpp"

namespace braggsim {

// Lattice of `sites` wells spaced by d = spacing * lambda along the cavity
// axis. The physics enters only through the Bragg phase per site,
// phase = 2kd = 4*pi*spacing. Rational spacings d = num/den * lambda are
// tracked exactly: phase = 2*pi*q/p with gcd(q,p) = 1, which unlocks exact
// integer frequency arithmetic for p <= 2 (half- and quarter-wavelength).
struct LatticeGeometry {
    int sites = 2;
    double spacing = 0.5;
    bool rational = false;
    long long q = 0;
    long long p = 1;

    double phase() const;

    static LatticeGeometry from_spacing(int sites, double d_over_lambda);
    static LatticeGeometry from_rational_spacing(int sites, long long num, long long den);
    static LatticeGeometry half_wavelength(int sites);
    static LatticeGeometry quarter_wavelength(int sites);
};

// Fock product state: a definite atom number per well.
struct MottState {
    std::vector<int> occupations;
};

// Mean-field superfluid: product of per-well coherent states. Arbitrary
// complex amplitudes are accepted; occupation probabilities depend only on
// |alpha_m|^2 (independent Poisson per well).
struct CoherentSFState {
    std::vector<std::complex<double>> alphas;

    double mean_total() const;
    static CoherentSFState uniform(int sites, double mean_total);
};

// Number-conserving superfluid: N atoms symmetrically delocalized over the
// lattice; configuration law is multinomial with uniform site probabilities.
struct NumberSFState {
    int total_atoms = 0;
};

using AtomicState = std::variant<MottState, CoherentSFState, NumberSFState>;

struct Configuration {
    std::vector<int> occupations;
    double log_probability;
};

struct EnumerationOptions {
    // Bound on the total occupation-probability mass dropped by the per-well
    // cutoffs of a coherent state (union bound, epsilon/sites per well).
    double epsilon = 1e-10;
    std::size_t max_configurations = 10'000'000;
};

// Throws DimensionError when the state is structurally incompatible with the
// geometry (mismatched well counts, negative atom numbers).
void validate_state(const AtomicState& state, const LatticeGeometry& geometry);

// Sum of mean well occupations (exact total for Mott and number-conserving
// states).
double mean_total_atoms(const AtomicState& state);

// Number of configurations an exact enumeration would visit.
std::size_t configuration_count(const AtomicState& state, const LatticeGeometry& geometry,
                                const EnumerationOptions& options = {});

using ConfigurationVisitor =
    std::function<void(const std::vector<int>& occupations, double log_probability)>;

// Streams every retained configuration with its log probability. The
// occupation buffer is reused between calls; copy it if it must outlive the
// visit. Throws BudgetExceeded before visiting anything when the count would
// pass options.max_configurations.
void for_each_configuration(const AtomicState& state, const LatticeGeometry& geometry,
                            const EnumerationOptions& options, const ConfigurationVisitor& visit);

std::vector<Configuration> enumerate_configurations(const AtomicState& state,
                                                    const LatticeGeometry& geometry,
                                                    const EnumerationOptions& options = {});

using SampleVisitor = std::function<void(const std::vector<int>& occupations)>;

// Draws `count` independent configurations from the state's occupation law.
// Deterministic for a fixed seed; parallel callers should derive one seed per
// shard with derive_stream_seed.
void sample_configurations(const AtomicState& state, const LatticeGeometry& geometry,
                           std::size_t count, std::uint64_t seed, const SampleVisitor& visit);

std::vector<std::vector<int>> sample_configurations(const AtomicState& state,
                                                    const LatticeGeometry& geometry,
                                                    std::size_t count, std::uint64_t seed);

// Law of the total atom number. Delta for Mott and number-conserving states,
// Poisson (truncated to tail mass <= tail_epsilon, then renormalized) for
// coherent states.
DiscreteLaw total_number_distribution(const AtomicState& state, double tail_epsilon = 1e-12);

}
