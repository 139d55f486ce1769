#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "braggsim/states.hpp"

namespace braggsim {

// Lines closer than this (units of g) are merged into one.
inline constexpr double line_merge_tolerance = 1e-9;

struct SpectralLine {
    double omega;
    double probability;
};

// Left-closed bins [origin + k w, origin + (k+1) w); a binned spectrum keeps
// the bin center as the representative frequency.
struct BinningSpec {
    double origin = 0.0;
    double width = 0.05;
};

struct Spectrum {
    std::vector<SpectralLine> lines;     // sorted by omega, unit total mass
    std::optional<BinningSpec> binning;  // present when lines are bin centers
    double truncated_mass = 0.0;         // mass dropped before renormalization

    double mass() const;
    double mean() const;
    double second_moment() const;  // about zero
    double std_dev() const;
};

// Coupling frequency of one occupation configuration,
// omega/g = |sum_m n_m exp(i m phase)|. Exact integer arithmetic for
// rational spacings with p <= 2 (half wavelength: total atom number;
// quarter wavelength: |even-site total - odd-site total|).
double configuration_frequency(const std::vector<int>& occupations,
                               const LatticeGeometry& geometry);

// Exact frequency law by enumeration. For rational spacings with p < sites
// the sites are grouped into the p residue classes of m*q mod p; the class
// sums inherit the state's law exactly (sums of independent Poissons stay
// Poisson; the number-conserving law marginalizes to a multinomial over the
// class weights), so the reduced enumeration is not an approximation. Lines
// within line_merge_tolerance are chain-merged (probability-weighted mean
// frequency); the result is renormalized to unit mass and the dropped
// enumeration mass recorded in truncated_mass. The configuration budget
// applies to the effective (grouped) enumeration size.
Spectrum spectrum(const AtomicState& state, const LatticeGeometry& geometry,
                  const EnumerationOptions& options = {});

// Raw frequency draws, one per sampled configuration. Deterministic per seed.
std::vector<double> sample_frequencies(const AtomicState& state, const LatticeGeometry& geometry,
                                       std::size_t count, std::uint64_t seed);

// Monte-Carlo spectrum. Integer-valued spectra (rational, p <= 2) are
// accumulated exactly per integer frequency and carry no binning metadata;
// otherwise draws are histogrammed with the given binning (default width
// 0.05 from origin 0).
Spectrum sampled_spectrum(const AtomicState& state, const LatticeGeometry& geometry,
                          std::size_t count, std::uint64_t seed,
                          const std::optional<BinningSpec>& binning = {});

// RMS fluctuation of the two-well coupling for the number-conserving state:
// sqrt((N/2)(1 - cos phase)). Defined for two wells only.
double sf2_number_difference_std(int total_atoms, const LatticeGeometry& geometry);

// Sorts, chain-merges (line_merge_tolerance) and renormalizes raw lines into
// a spectrum. Building block for analytic laws assembled outside this module.
Spectrum merge_lines(std::vector<SpectralLine> raw);

// Rebins a spectrum into left-closed bins; mass-preserving, lines at bin
// centers.
Spectrum bin_spectrum(const Spectrum& spectrum, const BinningSpec& bins);

}
