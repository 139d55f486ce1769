#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "braggsim/dynamics.hpp"
#include "braggsim/states.hpp"

namespace braggsim {

// Photon-mode amplitudes of one atomic sector (n0, n1) with n_tot photons:
// amplitudes[i][j] is the amplitude of |n_-k = j, n_+k = n_tot - j> at
// times[i], starting from |n_-k = 0>. The coupling within a sector is a
// beam splitter of strength |nu|, nu = n0 + n1 exp(i phase), so the photon
// distribution is Binomial(n_tot, sin^2(|nu| t)).
struct SectorEvolution {
    std::vector<std::vector<std::complex<double>>> amplitudes;
};

// Exact evolution by eigendecomposition of the (n_tot+1)-dimensional
// Hermitian tridiagonal sector Hamiltonian (gauge-rotated to a real
// tridiagonal). include_free_phase controls the sector-global phase
// exp(-i (n0+n1) n_tot t) of the free term; dropping it evolves in the
// rotating frame of that term (photon probabilities are unaffected).
SectorEvolution evolve_sector(int n0, int n1, int n_tot, const LatticeGeometry& geometry,
                              const std::vector<double>& times, bool include_free_phase = true);

// P_{n_-k}(t) for an atomic state on two wells: the sector laws weighted by
// the atomic occupation probabilities. Rows sum to one (atomic weights are
// renormalized over the enumerated set; the dropped mass is recorded).
struct PhotonStatistics {
    std::vector<double> times;
    std::vector<std::vector<double>> table;  // [time][n_minus_k]
    int n_tot = 0;                           // table width - 1; for a coherent
                                             // drive the largest retained sector
    double truncated_mass = 0.0;
    std::optional<double> input_mean_photons;  // set for a coherent drive
};

PhotonStatistics photon_statistics(const AtomicState& state, const LatticeGeometry& geometry,
                                   int n_tot, const std::vector<double>& times,
                                   double epsilon = 1e-10);

// Coherent drive of the +k mode, handled as an exact Poisson mixture over
// total-photon-number sectors (the total photon number is conserved, so the
// photon Hilbert space never needs enlarging). The mixture tail beyond
// photon_tail is dropped and the weights renormalized.
PhotonStatistics photon_statistics_coherent_input(const AtomicState& state,
                                                  const LatticeGeometry& geometry,
                                                  double mean_photons,
                                                  const std::vector<double>& times,
                                                  double epsilon = 1e-10,
                                                  double photon_tail = 1e-12);

// Normalized first moment sum_j j P_j(t) / n of the photon table, with n the
// incoming photon number (the drive mean for a coherent input).
TimeSeries mean_reflected_intensity(const PhotonStatistics& stats);

struct QFunctionGridSpec {
    double re_min, re_max, im_min, im_max, step;
};

// Husimi Q of the well-0 atomic state, Q(alpha) = <alpha|rho_0|alpha>/pi,
// sampled on a rectangular grid. values[i * im.size() + j] belongs to
// re[i] + i im[j].
struct QFunctionGrid {
    std::vector<double> re;
    std::vector<double> im;
    std::vector<double> values;
};

// Diagnostics of the atom-light entangled state reached from a two-well
// coherent state at quarter-wavelength spacing and t = pi/2 (units 1/g),
// evolved in the rotating frame of the free photon term. Photon parity of
// the well difference decides the outcome: even |n0 - n1| leaves all photons
// in +k (n_-k = 0), odd transfers all of them (n_-k = n_tot), entangling the
// photon outcome with the atomic parity. Tracing photons and well 1 leaves
// well 0 in an equal mixture of the +/- alpha_0 coherent branches; the
// conditional purities ~1/2 distinguish this entangled state from a photonic
// NOON state (which would leave the atoms pure).
struct CatStateDiagnostics {
    QFunctionGrid q_function;            // from the unconditional rho_0
    double weight_all_reflected = 0.0;   // P(n_-k = n_tot)
    double weight_none_reflected = 0.0;  // P(n_-k = 0)
    double other_outcome_mass = 0.0;
    double purity_given_all_reflected = 0.0;
    double purity_given_none_reflected = 0.0;
    double purity_unconditional = 0.0;
    double odd_total_mass_given_all = 0.0;    // P(n0 + n1 odd | n_-k = n_tot)
    double even_total_mass_given_none = 0.0;  // P(n0 + n1 even | n_-k = 0)
    double truncated_mass = 0.0;              // coherent mass beyond the Fock cutoffs
};

// grid defaults to [-(|alpha_0|+3), |alpha_0|+3]^2 at spacing 0.1.
CatStateDiagnostics cat_state_diagnostics(const CoherentSFState& state,
                                          const LatticeGeometry& geometry, int n_tot,
                                          const std::optional<QFunctionGridSpec>& grid = {});

}
