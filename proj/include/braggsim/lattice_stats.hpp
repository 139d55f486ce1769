#pragma once

#include <cstddef>
#include <cstdint>

#include "braggsim/law.hpp"
#include "braggsim/spectral.hpp"
#include "braggsim/states.hpp"

namespace braggsim {

enum class StateKind { sf1, sf2 };

// Half-wavelength spacing: every site scatters in phase, so the spectrum is the
// law of the total atom number. For the coherent superfluid this is a Gaussian
// envelope on the integer grid (the large-N limit of the Poisson total),
// restricted to N >= 0 and renormalized.
DiscreteLaw gaussian_total_law(double mean_total);

// Quarter-wavelength spacing on an even bipartite lattice: the frequency is
// |N_even - N_odd|. Folded-Gaussian laws on the integer grid.
//   sf1: mean_or_total is the mean total atom number; support 0,1,2,...
//   sf2: mean_or_total must be an integer N; support has the parity of N.
// Weights (2 - delta_{k,0}) * gaussian, renormalized over the retained grid;
// pre_normalization_mass records the analytic mass before renormalization.
DiscreteLaw even_odd_difference_law(StateKind kind, double mean_or_total);

// Continuous limit of the class-sum random walk: the frequency behaves like
// the modulus of an isotropic two-dimensional Gaussian with E[omega^2] =
// mean_total, i.e. a Rayleigh law.
struct RayleighLaw {
    double mean_total = 1.0;

    double pdf(double omega) const;
    double cdf(double omega) const;
    double mean() const;
    double std_dev() const;
    double mode() const;
};

RayleighLaw rayleigh_walk_law(double mean_total);

struct PClassOptions {
    bool sample = false;               // enumerate exactly (default) or Monte Carlo
    std::size_t samples = 100000;      // draws when sampling
    std::uint64_t seed = 1;
    double bin_width = 0.02;           // applied to sampled laws and oversized exact ones
    std::size_t max_lines_unbinned = 50000;
    EnumerationOptions enumeration;    // budget for the exact route
};

// Frequency law at rational spacing q/(2p) on a lattice of `sites` wells,
// obtained by summing site occupations within each of the p residue classes
// and taking the modulus of the resulting root-of-unity walk.
//   sf1: class sums are independent discrete Gaussians, mean mean_total / p.
//   sf2: class sums are multinomial with p equiprobable classes (integer N).
// Requires p >= 3 (p <= 2 laws are even_odd_difference_law / the total-number
// law), sites a multiple of p, gcd(q, p) = 1.
Spectrum p_class_law(StateKind kind, double mean_total, int sites, int p, int q,
                     const PClassOptions& options = {});

}
