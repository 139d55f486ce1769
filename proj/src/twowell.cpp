#include "braggsim/twowell.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "braggsim/errors.hpp"

namespace braggsim {

namespace {

constexpr double pi = 3.14159265358979323846;

void require_two_wells(const LatticeGeometry& geometry) {
    if (geometry.sites != 2)
        throw DomainError("exact joint evolution is restricted to the double well");
}

std::complex<double> coupling_nu(int n0, int n1, const LatticeGeometry& geometry) {
    if (geometry.rational && geometry.p == 1) return {static_cast<double>(n0 + n1), 0.0};
    if (geometry.rational && geometry.p == 2) return {static_cast<double>(n0 - n1), 0.0};
    const double phi = geometry.phase();
    return std::complex<double>(n0, 0.0) +
           static_cast<double>(n1) * std::complex<double>(std::cos(phi), std::sin(phi));
}

// Coherent-state Fock amplitude <n|alpha>, evaluated in log magnitude to
// stay finite for any cutoff.
std::complex<double> coherent_amplitude(std::complex<double> alpha, int n) {
    const double mag2 = std::norm(alpha);
    if (mag2 == 0.0) return n == 0 ? 1.0 : 0.0;
    const double log_mag = -0.5 * mag2 + 0.5 * n * std::log(mag2) -
                           0.5 * std::lgamma(static_cast<double>(n) + 1.0);
    return std::polar(std::exp(log_mag), n * std::arg(alpha));
}

int coherent_cutoff(double mean) {
    if (mean <= 0.0) return 0;
    const int k = static_cast<int>(std::ceil(mean + 8.0 * std::sqrt(mean)));
    return std::max(10, k);
}

}

SectorEvolution evolve_sector(int n0, int n1, int n_tot, const LatticeGeometry& geometry,
                              const std::vector<double>& times, bool include_free_phase) {
    require_two_wells(geometry);
    if (n_tot < 0) throw DimensionError("photon number must be >= 0");
    if (n0 < 0 || n1 < 0) throw DimensionError("occupations must be >= 0");

    const int dim = n_tot + 1;
    const std::complex<double> nu = coupling_nu(n0, n1, geometry);
    const double strength = std::abs(nu);
    const double theta = std::arg(nu);
    const double free_rate = include_free_phase ? static_cast<double>(n0 + n1) * n_tot : 0.0;

    SectorEvolution out;
    out.amplitudes.assign(times.size(),
                          std::vector<std::complex<double>>(static_cast<std::size_t>(dim), 0.0));

    if (strength == 0.0 || n_tot == 0) {
        for (std::size_t i = 0; i < times.size(); ++i)
            out.amplitudes[i][0] = std::polar(1.0, -free_rate * times[i]);
        return out;
    }

    // gauge-rotate nu K + nu* K^T to the real tridiagonal |nu| T,
    // T_{j+1,j} = sqrt((j+1)(n_tot-j)); the diagonal free term is a
    // sector-global phase
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sub(dim - 1);
    for (int j = 0; j < n_tot; ++j)
        sub(j) = strength * std::sqrt(static_cast<double>(j + 1) * (n_tot - j));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& vectors = solver.eigenvectors();
    const Eigen::VectorXd& levels = solver.eigenvalues();

    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        Eigen::VectorXcd weights(dim);
        for (int a = 0; a < dim; ++a)
            weights(a) = vectors(0, a) * std::polar(1.0, -levels(a) * t);
        const Eigen::VectorXcd amp = vectors * weights;
        const std::complex<double> global = std::polar(1.0, -free_rate * t);
        for (int j = 0; j < dim; ++j)
            out.amplitudes[i][static_cast<std::size_t>(j)] =
                global * std::polar(1.0, j * theta) * amp(j);
    }
    return out;
}

PhotonStatistics photon_statistics(const AtomicState& state, const LatticeGeometry& geometry,
                                   int n_tot, const std::vector<double>& times, double epsilon) {
    require_two_wells(geometry);
    validate_state(state, geometry);
    if (n_tot < 0) throw DimensionError("photon number must be >= 0");
    if (times.empty()) throw DomainError("time grid must not be empty");

    PhotonStatistics stats;
    stats.times = times;
    stats.n_tot = n_tot;
    stats.table.assign(times.size(), std::vector<double>(static_cast<std::size_t>(n_tot) + 1, 0.0));

    EnumerationOptions options;
    options.epsilon = epsilon;
    double mass = 0.0;
    for_each_configuration(state, geometry, options,
                           [&](const std::vector<int>& occ, double logp) {
                               const double w = std::exp(logp);
                               mass += w;
                               const SectorEvolution sector =
                                   evolve_sector(occ[0], occ[1], n_tot, geometry, times, false);
                               for (std::size_t i = 0; i < times.size(); ++i)
                                   for (int j = 0; j <= n_tot; ++j)
                                       stats.table[i][static_cast<std::size_t>(j)] +=
                                           w * std::norm(sector.amplitudes[i][static_cast<std::size_t>(j)]);
                           });
    stats.truncated_mass = std::max(0.0, 1.0 - mass);
    for (auto& row : stats.table)
        for (double& v : row) v /= mass;
    return stats;
}

PhotonStatistics photon_statistics_coherent_input(const AtomicState& state,
                                                  const LatticeGeometry& geometry,
                                                  double mean_photons,
                                                  const std::vector<double>& times, double epsilon,
                                                  double photon_tail) {
    if (!(mean_photons >= 0.0)) throw DomainError("mean photon number must be >= 0");

    // truncated Poisson weights over the conserved total photon number
    std::vector<double> weight;
    int lo = 0;
    if (mean_photons == 0.0) {
        weight = {1.0};
    } else {
        int hi = 0;
        {
            double lp = -mean_photons;
            double cdf = std::exp(lp);
            const int cap =
                static_cast<int>(mean_photons + 60.0 * std::sqrt(mean_photons) + 200.0);
            while (1.0 - cdf > photon_tail / 2.0 && hi < cap) {
                ++hi;
                lp += std::log(mean_photons / hi);
                cdf += std::exp(lp);
            }
        }
        {
            double lp = -mean_photons;
            double cdf = std::exp(lp);
            while (cdf <= photon_tail / 2.0 && lo < hi) {
                ++lo;
                lp += std::log(mean_photons / lo);
                cdf += std::exp(lp);
            }
            if (lo > 0) --lo;
        }
        double mass = 0.0;
        for (int n = lo; n <= hi; ++n) {
            const double lp = -mean_photons + n * std::log(mean_photons) -
                              std::lgamma(static_cast<double>(n) + 1.0);
            weight.push_back(std::exp(lp));
            mass += weight.back();
        }
        for (double& w : weight) w /= mass;
    }

    const int n_max = lo + static_cast<int>(weight.size()) - 1;
    PhotonStatistics stats;
    stats.times = times;
    stats.n_tot = n_max;
    stats.input_mean_photons = mean_photons;
    stats.table.assign(times.size(), std::vector<double>(static_cast<std::size_t>(n_max) + 1, 0.0));
    for (std::size_t s = 0; s < weight.size(); ++s) {
        const int n = lo + static_cast<int>(s);
        const PhotonStatistics part = photon_statistics(state, geometry, n, times, epsilon);
        stats.truncated_mass = part.truncated_mass;
        for (std::size_t i = 0; i < times.size(); ++i)
            for (int j = 0; j <= n; ++j)
                stats.table[i][static_cast<std::size_t>(j)] +=
                    weight[s] * part.table[i][static_cast<std::size_t>(j)];
    }
    return stats;
}

TimeSeries mean_reflected_intensity(const PhotonStatistics& stats) {
    const double denom =
        stats.input_mean_photons ? *stats.input_mean_photons : static_cast<double>(stats.n_tot);
    TimeSeries series;
    series.times = stats.times;
    series.values.reserve(stats.times.size());
    for (const auto& row : stats.table) {
        double m = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) m += static_cast<double>(j) * row[j];
        series.values.push_back(denom > 0.0 ? m / denom : 0.0);
    }
    return series;
}

CatStateDiagnostics cat_state_diagnostics(const CoherentSFState& state,
                                          const LatticeGeometry& geometry, int n_tot,
                                          const std::optional<QFunctionGridSpec>& grid) {
    require_two_wells(geometry);
    validate_state(AtomicState(state), geometry);
    if (!(geometry.rational && geometry.p == 2))
        throw DomainError("cat-state diagnostics are defined at quarter-wavelength spacing");
    if (n_tot < 0) throw DimensionError("photon number must be >= 0");

    const std::complex<double> alpha0 = state.alphas[0];
    const std::complex<double> alpha1 = state.alphas[1];
    const int k0 = coherent_cutoff(std::norm(alpha0));
    const int k1 = coherent_cutoff(std::norm(alpha1));
    const int dim = n_tot + 1;
    const std::vector<double> t_cat = {pi / 2.0};

    // joint amplitudes A[j](n0, n1) at t = pi/2 in the rotating frame
    std::vector<Eigen::MatrixXcd> joint(static_cast<std::size_t>(dim),
                                        Eigen::MatrixXcd::Zero(k0 + 1, k1 + 1));
    double atom_mass = 0.0;
    for (int n0 = 0; n0 <= k0; ++n0) {
        const std::complex<double> c0 = coherent_amplitude(alpha0, n0);
        for (int n1 = 0; n1 <= k1; ++n1) {
            const std::complex<double> c1 = coherent_amplitude(alpha1, n1);
            const std::complex<double> c = c0 * c1;
            atom_mass += std::norm(c);
            const SectorEvolution sector = evolve_sector(n0, n1, n_tot, geometry, t_cat, false);
            for (int j = 0; j < dim; ++j)
                joint[static_cast<std::size_t>(j)](n0, n1) =
                    c * sector.amplitudes[0][static_cast<std::size_t>(j)];
        }
    }
    const double scale = 1.0 / std::sqrt(atom_mass);
    for (auto& block : joint) block *= scale;

    CatStateDiagnostics out;
    out.truncated_mass = std::max(0.0, 1.0 - atom_mass);

    std::vector<double> outcome(static_cast<std::size_t>(dim), 0.0);
    for (int j = 0; j < dim; ++j) outcome[static_cast<std::size_t>(j)] =
        joint[static_cast<std::size_t>(j)].squaredNorm();
    out.weight_all_reflected = outcome[static_cast<std::size_t>(n_tot)];
    out.weight_none_reflected = outcome[0];
    double other = 0.0;
    for (int j = 1; j < n_tot; ++j) other += outcome[static_cast<std::size_t>(j)];
    out.other_outcome_mass = other;

    auto purity_of = [](const Eigen::MatrixXcd& rho) { return rho.squaredNorm(); };
    auto conditional_rho0 = [&](int j) -> Eigen::MatrixXcd {
        const Eigen::MatrixXcd& block = joint[static_cast<std::size_t>(j)];
        const double w = outcome[static_cast<std::size_t>(j)];
        if (w <= 0.0) return Eigen::MatrixXcd::Zero(k0 + 1, k0 + 1);
        return block * block.adjoint() / w;
    };

    out.purity_given_all_reflected = purity_of(conditional_rho0(n_tot));
    out.purity_given_none_reflected = purity_of(conditional_rho0(0));

    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(k0 + 1, k0 + 1);
    for (int j = 0; j < dim; ++j)
        rho0 += joint[static_cast<std::size_t>(j)] * joint[static_cast<std::size_t>(j)].adjoint();
    out.purity_unconditional = purity_of(rho0);

    auto parity_mass = [&](int j, int parity) {
        const Eigen::MatrixXcd& block = joint[static_cast<std::size_t>(j)];
        const double w = outcome[static_cast<std::size_t>(j)];
        if (w <= 0.0) return 0.0;
        double m = 0.0;
        for (int n0 = 0; n0 <= k0; ++n0)
            for (int n1 = 0; n1 <= k1; ++n1)
                if ((n0 + n1) % 2 == parity) m += std::norm(block(n0, n1));
        return m / w;
    };
    out.odd_total_mass_given_all = parity_mass(n_tot, 1);
    out.even_total_mass_given_none = parity_mass(0, 0);

    // Husimi Q of rho0 on the grid
    QFunctionGridSpec spec;
    if (grid) {
        spec = *grid;
    } else {
        const double reach = std::abs(alpha0) + 3.0;
        spec = {-reach, reach, -reach, reach, 0.1};
    }
    if (!(spec.step > 0.0)) throw DomainError("grid step must be positive");
    const int n_re = static_cast<int>(std::lround((spec.re_max - spec.re_min) / spec.step)) + 1;
    const int n_im = static_cast<int>(std::lround((spec.im_max - spec.im_min) / spec.step)) + 1;
    out.q_function.re.resize(static_cast<std::size_t>(n_re));
    out.q_function.im.resize(static_cast<std::size_t>(n_im));
    for (int i = 0; i < n_re; ++i) out.q_function.re[static_cast<std::size_t>(i)] = spec.re_min + i * spec.step;
    for (int i = 0; i < n_im; ++i) out.q_function.im[static_cast<std::size_t>(i)] = spec.im_min + i * spec.step;
    out.q_function.values.resize(static_cast<std::size_t>(n_re) * n_im);
    Eigen::VectorXcd probe(k0 + 1);
    for (int i = 0; i < n_re; ++i) {
        for (int j = 0; j < n_im; ++j) {
            const std::complex<double> alpha(out.q_function.re[static_cast<std::size_t>(i)],
                                             out.q_function.im[static_cast<std::size_t>(j)]);
            for (int n = 0; n <= k0; ++n) probe(n) = coherent_amplitude(alpha, n);
            const double q = std::real(probe.dot(rho0 * probe)) / pi;
            out.q_function.values[static_cast<std::size_t>(i) * n_im + j] = q;
        }
    }
    return out;
}

}
