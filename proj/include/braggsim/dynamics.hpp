#pragma once

#include <optional>
#include <string>
#include <vector>

#include "braggsim/spectral.hpp"

namespace braggsim {

// Normalized reflected intensity <n_-k(t)>/n_tot over a time grid
// (times in units of 1/g).
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
};

struct CollapseRevivalPrediction {
    double collapse_rate = 0.0;              // units g; 0 means no collapse
    std::optional<double> revival_time;      // units 1/g; only for integer spectra
    std::string regime;                      // "two_well" or "lattice"
    std::string state;                       // "mott", "sf1" or "sf2"
    std::string note;
};

// I(t)/n_tot = sum_j P_j sin^2(omega_j t). The sin^2 form keeps I(0) = 0
// exactly and I within [0, mass]. Requires unit spectrum mass within 1e-3.
TimeSeries reflected_intensity(const Spectrum& spectrum, const std::vector<double>& times);

// Tabulated collapse rate 1/T_collapse and revival time for the nine
// (spacing column: half wavelength / quarter wavelength / general) x
// (Mott / SF1 / SF2) combinations, in the two-well (sites == 2) and lattice
// regimes. Mott rows never collapse. Revivals at pi exist exactly when the
// frequency spectrum is integer-valued (rational spacing with p <= 2); the
// quarter-wavelength SF2 half-revival (even N) or anti-revival (odd N) at
// pi/2 is flagged in the note.
CollapseRevivalPrediction predict_collapse_revival(const AtomicState& state,
                                                   const LatticeGeometry& geometry);

// Large-lattice closed form for the coherent-state superfluid at generic
// spacing: I(t)/n_tot = x F(x) with x = mean_N |t| / sqrt(sites) and F the
// Dawson integral (equivalently sqrt(pi)/2 x exp(-x^2) erfi(x)).
// Starts at 0 and approaches 1/2 from above as x grows.
TimeSeries closed_form_lattice_intensity(double mean_N, int sites,
                                         const std::vector<double>& times);

// Measured collapse time: the envelope of 2|I - 1/2| (local maxima over
// windows of one mean oscillation period pi/mean_frequency, linearly
// interpolated) first drops below `threshold`. The default threshold
// exp(-1/2) makes a Gaussian-dephasing envelope exp(-2 sigma^2 t^2) cross at
// exactly t = 1/(2 sigma). Throws DomainError when the envelope never falls
// below the threshold inside the series.
double measure_collapse_time(const TimeSeries& series, double mean_frequency,
                             double threshold = 0.60653065971263342);

}
