// Acceptance gate: ten end-to-end criteria, one verdict line each. Exit code
// is the number of failures. Tolerances are pinned here, next to each check.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "braggsim/dynamics.hpp"
#include "braggsim/lattice_stats.hpp"
#include "braggsim/rng.hpp"
#include "braggsim/special_functions.hpp"
#include "braggsim/spectral.hpp"
#include "braggsim/states.hpp"
#include "braggsim/twowell.hpp"
#include "oracles.hpp"

using namespace braggsim;

namespace {

int failures = 0;

void verdict(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s - criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

std::vector<double> grid(double t_max, int steps) {
    std::vector<double> t(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) t[static_cast<std::size_t>(i)] = t_max * i / steps;
    return t;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1: exact sector evolution against the binomial transfer law, 200 random
//    sectors with n0, n1, n_tot <= 20 and random spacings, error <= 1e-8,
//    wall time < 10 s.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(20240817);
    const std::vector<double> times = {0.0, 0.13, 0.41, 0.77, 1.19, 1.93, 2.71};
    double max_err = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n0 = static_cast<int>(rng.next_u64() % 21);
        const int n1 = static_cast<int>(rng.next_u64() % 21);
        const int n_tot = static_cast<int>(rng.next_u64() % 21);
        LatticeGeometry g;
        if (trial % 3 == 0) {
            g = LatticeGeometry::from_rational_spacing(
                2, 1 + static_cast<long long>(rng.next_u64() % 9),
                2 + static_cast<long long>(rng.next_u64() % 19));
        } else {
            g = LatticeGeometry::from_spacing(2, 0.01 + 0.48 * rng.next_double());
        }
        const auto evo = evolve_sector(n0, n1, n_tot, g, times);
        const double nu = configuration_frequency({n0, n1}, g);
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            const double s2 = std::sin(nu * times[ti]) * std::sin(nu * times[ti]);
            for (int j = 0; j <= n_tot; ++j) {
                const double p = std::norm(evo.amplitudes[ti][static_cast<std::size_t>(j)]);
                max_err = std::max(max_err, std::abs(p - oracles::binomial_pmf(n_tot, j, s2)));
            }
        }
    }
    const double wall = seconds_since(t0);
    char detail[128];
    std::snprintf(detail, sizeof detail, "max |P - binomial| = %.3g, %.2f s", max_err, wall);
    verdict(1, "sector evolution matches the binomial transfer law", max_err <= 1e-8 && wall < 10.0,
            detail);
}

// 2: checkerboard and coherent wells in the all-in-phase arrangement:
//    Mott(9,9) and fixed N = 18 beat as sin^2(18 t) (1e-12); the coherent
//    state's measured collapse time is within 25% of 1/(2 sqrt(18)) and it
//    revives at t = pi (intensity <= 1e-6 there).
void criterion_2() {
    const auto g = LatticeGeometry::half_wavelength(2);
    const auto t = grid(3.2, 1000);

    double mott_err = 0.0;
    const auto mott = reflected_intensity(spectrum(MottState{{9, 9}}, g), t);
    for (std::size_t i = 0; i < t.size(); ++i)
        mott_err = std::max(mott_err, std::abs(mott.values[i] - std::pow(std::sin(18.0 * t[i]), 2)));

    double sf2_err = 0.0;
    const auto sf2 = reflected_intensity(spectrum(NumberSFState{18}, g), t);
    for (std::size_t i = 0; i < t.size(); ++i)
        sf2_err = std::max(sf2_err, std::abs(sf2.values[i] - std::pow(std::sin(18.0 * t[i]), 2)));

    const auto state = CoherentSFState::uniform(2, 18.0);
    const auto spec = spectrum(state, g);
    const auto dense = grid(0.7, 35000);
    const double measured = measure_collapse_time(reflected_intensity(spec, dense), spec.mean());
    const double predicted = 1.0 / (2.0 * std::sqrt(18.0));
    const double ratio = measured / predicted;

    const auto revival = reflected_intensity(spec, {std::numbers::pi});
    const bool pass = mott_err <= 1e-12 && sf2_err <= 1e-12 && std::abs(ratio - 1.0) <= 0.25 &&
                      revival.values[0] <= 1e-6;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "mott err %.2g, sf2 err %.2g, T_meas/T_pred = %.3f, I(pi) = %.2g", mott_err,
                  sf2_err, ratio, revival.values[0]);
    verdict(2, "all-in-phase beats, collapse and revival", pass, detail);
}

// 3: alternating-phase arrangement, fixed atom number: even N leaves the
//    probe dark at t = pi/2, odd N makes it bright.
void criterion_3() {
    const auto g = LatticeGeometry::quarter_wavelength(2);
    const double t = std::numbers::pi / 2.0;
    const auto even = reflected_intensity(spectrum(NumberSFState{18}, g), {t});
    const auto odd = reflected_intensity(spectrum(NumberSFState{17}, g), {t});
    const bool pass = even.values[0] <= 1e-12 && odd.values[0] >= 1.0 - 1e-12;
    char detail[96];
    std::snprintf(detail, sizeof detail, "I_18(pi/2) = %.2g, I_17(pi/2) = %.12f", even.values[0],
                  odd.values[0]);
    verdict(3, "even/odd atom number darkness and brightness", pass, detail);
}

// 4: ten wells, 20 conserved atoms, alternating phases: the exact law of
//    |N_even - N_odd| stays within total variation 0.05 of the folded
//    Gaussian law, under 60 s.
void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto exact =
        spectrum(NumberSFState{20}, LatticeGeometry::from_rational_spacing(10, 1, 4));
    const auto analytic = even_odd_difference_law(StateKind::sf2, 20.0);
    std::vector<double> xs, ps;
    for (const auto& l : exact.lines) {
        xs.push_back(l.omega);
        ps.push_back(l.probability);
    }
    const double tv =
        oracles::total_variation_integer(xs, ps, analytic.values, analytic.probabilities);
    const double wall = seconds_since(t0);
    char detail[96];
    std::snprintf(detail, sizeof detail, "TV = %.6f, %.2f s", tv, wall);
    verdict(4, "even/odd difference law vs folded Gaussian", tv < 0.05 && wall < 60.0, detail);
}

// 5: ten wells at a fifth-of-period phase step: coherent wells sampled at 1e5
//    draws stay within KS 0.05 of the isotropic walk law; 18 conserved atoms
//    enumerated exactly stay within KS 0.07; stretching the spacing by
//    sqrt(2) moves the exact law strictly closer (binned TV, width 0.25).
void criterion_5() {
    const auto g = LatticeGeometry::from_rational_spacing(10, 1, 10);

    const auto draws = sample_frequencies(CoherentSFState::uniform(10, 10.0), g, 100000, 1);
    const auto ray10 = rayleigh_walk_law(10.0);
    const double ks_sf1 =
        oracles::ks_empirical_vs_cdf(draws, [&](double w) { return ray10.cdf(w); });

    const auto exact = spectrum(NumberSFState{18}, g);
    std::vector<double> xs, ps;
    for (const auto& l : exact.lines) {
        xs.push_back(l.omega);
        ps.push_back(l.probability);
    }
    const auto ray18 = rayleigh_walk_law(18.0);
    const double ks_sf2 =
        oracles::ks_discrete_vs_cdf(xs, ps, [&](double w) { return ray18.cdf(w); });

    EnumerationOptions wide;
    wide.max_configurations = 12'000'000;
    const auto stretched = spectrum(
        NumberSFState{18}, LatticeGeometry::from_spacing(10, 0.1 * std::numbers::sqrt2), wide);
    std::vector<double> sx, sp;
    for (const auto& l : stretched.lines) {
        sx.push_back(l.omega);
        sp.push_back(l.probability);
    }
    const auto cdf = [&](double w) { return ray18.cdf(w); };
    const double tv_base = oracles::binned_tv_vs_cdf(xs, ps, cdf, 0.25);
    const double tv_stretched = oracles::binned_tv_vs_cdf(sx, sp, cdf, 0.25);

    const bool pass = ks_sf1 < 0.05 && ks_sf2 < 0.07 && tv_stretched < tv_base;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "KS(sf1 sampled) = %.4f, KS(sf2 exact) = %.4f, TV %.4f -> %.4f", ks_sf1,
                  ks_sf2, tv_base, tv_stretched);
    verdict(5, "generic-spacing laws against the isotropic walk", pass, detail);
}

// 6: coherent wells alpha = 3 each, alternating phases, 10 photons, t = pi/2:
//    the photon outcome is bimodal at {0, 10} with each branch in
//    [0.45, 0.55]; everything else is truncation-sized.
void criterion_6() {
    CoherentSFState state;
    state.alphas = {3.0, 3.0};
    const auto g = LatticeGeometry::quarter_wavelength(2);
    const auto stats = photon_statistics(state, g, 10, {std::numbers::pi / 2.0});
    const auto& row = stats.table[0];
    double other = 0.0;
    for (std::size_t j = 1; j + 1 < row.size(); ++j) other += row[j];
    const bool pass = row[0] >= 0.45 && row[0] <= 0.55 && row[10] >= 0.45 && row[10] <= 0.55 &&
                      other <= 1e-6;
    char detail[96];
    std::snprintf(detail, sizeof detail, "P0 = %.6f, P10 = %.6f, other = %.2g", row[0], row[10],
                  other);
    verdict(6, "photon outcome bimodality for balanced coherent wells", pass, detail);
}

// 7: the steered well's Husimi function matches the two-peak closed form on
//    the default grid to 1e-3.
void criterion_7() {
    CoherentSFState state;
    state.alphas = {3.0, 3.0};
    const auto g = LatticeGeometry::quarter_wavelength(2);
    const auto d = cat_state_diagnostics(state, g, 10);
    const auto& q = d.q_function;
    const std::complex<double> a0(3.0, 0.0);
    double max_err = 0.0;
    for (std::size_t i = 0; i < q.re.size(); ++i) {
        for (std::size_t j = 0; j < q.im.size(); ++j) {
            const std::complex<double> a(q.re[i], q.im[j]);
            const double closed = (std::exp(-std::norm(a - a0)) + std::exp(-std::norm(a + a0))) /
                                  (2.0 * std::numbers::pi);
            max_err = std::max(max_err, std::abs(q.values[i * q.im.size() + j] - closed));
        }
    }
    char detail[64];
    std::snprintf(detail, sizeof detail, "max |Q - closed form| = %.2g", max_err);
    verdict(7, "husimi function of the steered well", max_err <= 1e-3, detail);
}

// 8: every cell of the analytic width table is validated against an
//    independent route: exact second moments, quadrature, or sampling.
void criterion_8() {
    bool pass = true;
    std::string notes;
    const auto cell = [&](const char* name, double predicted, double reference, double rel_tol) {
        const double err = reference == 0.0 ? std::abs(predicted)
                                            : std::abs(predicted / reference - 1.0);
        if (err > rel_tol) {
            pass = false;
            notes += std::string(" [") + name + " off]";
        }
    };

    const auto g2_half = LatticeGeometry::half_wavelength(2);
    const auto g2_quarter = LatticeGeometry::quarter_wavelength(2);
    const auto g2_tenth = LatticeGeometry::from_rational_spacing(2, 1, 10);

    // row 1: checkerboard states never dephase
    cell("mott/half", predict_collapse_revival(MottState{{9, 9}}, g2_half).collapse_rate, 0.0,
         1e-12);
    cell("mott/quarter", predict_collapse_revival(MottState{{9, 9}}, g2_quarter).collapse_rate,
         0.0, 1e-12);
    cell("mott/generic",
         predict_collapse_revival(MottState{{9, 9}}, g2_tenth).collapse_rate, 0.0, 1e-12);

    // row 2, two wells: coherent rate = 2 std(total-N law) in phase, the
    // difference spectrum's RMS at quarter spacing, 2 std again at generic d
    const auto sf1 = CoherentSFState::uniform(2, 18.0);
    const auto total_law = total_number_distribution(sf1);
    cell("sf1/half", predict_collapse_revival(sf1, g2_half).collapse_rate,
         2.0 * std::sqrt(total_law.variance()), 1e-6);
    const auto diff_spec = spectrum(sf1, g2_quarter);
    cell("sf1/quarter", predict_collapse_revival(sf1, g2_quarter).collapse_rate,
         std::sqrt(diff_spec.second_moment()), 1e-6);
    cell("sf1/generic", predict_collapse_revival(sf1, g2_tenth).collapse_rate,
         2.0 * std::sqrt(total_law.variance()), 1e-6);

    // row 3, two wells, conserved N: zero in phase; RMS of the exact
    // difference spectrum at quarter spacing; binomially enumerated
    // half-difference moment at generic d
    cell("sf2/half", predict_collapse_revival(NumberSFState{18}, g2_half).collapse_rate, 0.0,
         1e-12);
    const auto sf2_spec = spectrum(NumberSFState{18}, g2_quarter);
    cell("sf2/quarter", predict_collapse_revival(NumberSFState{18}, g2_quarter).collapse_rate,
         std::sqrt(sf2_spec.second_moment()), 1e-9);
    double half_diff_sq = 0.0;
    for (int k = 0; k <= 18; ++k) {
        const double d = 0.5 * (2.0 * k - 18.0);
        half_diff_sq += oracles::binomial_pmf(18, k, 0.5) * d * d;
    }
    cell("sf2/generic", predict_collapse_revival(NumberSFState{18}, g2_tenth).collapse_rate,
         2.0 * std::sqrt(half_diff_sq * 2.0 * (1.0 - std::cos(g2_tenth.phase()))), 1e-9);

    // lattice column, quarter spacing: std of the continuous folded Gaussian
    // by quadrature (the discrete integer-grid law differs by ~1.5e-3, the
    // |x| kink is only continuous-resolved)
    const auto folded_std = [](double variance) {
        const auto pdf = [&](double x) {
            return 2.0 / std::sqrt(2.0 * std::numbers::pi * variance) *
                   std::exp(-0.5 * x * x / variance);
        };
        const double hi = 10.0 * std::sqrt(variance);
        const double mean = oracles::integrate([&](double x) { return x * pdf(x); }, 0.0, hi, 1e-12);
        const double second =
            oracles::integrate([&](double x) { return x * x * pdf(x); }, 0.0, hi, 1e-12);
        return std::sqrt(second - mean * mean);
    };
    cell("sf1/quarter/lattice",
         predict_collapse_revival(CoherentSFState::uniform(10, 100.0),
                                  LatticeGeometry::quarter_wavelength(10))
             .collapse_rate,
         folded_std(100.0), 1e-6);
    cell("sf2/quarter/lattice",
         predict_collapse_revival(NumberSFState{100}, LatticeGeometry::quarter_wavelength(10))
             .collapse_rate,
         folded_std(100.0), 1e-6);

    // lattice column, generic spacing at one atom per well: the walk law's
    // analytic std, cross-checked by sampling both state families
    const auto g100 = LatticeGeometry::from_rational_spacing(100, 1, 10);
    const auto ray = rayleigh_walk_law(100.0);
    const double pred_sf1 =
        predict_collapse_revival(CoherentSFState::uniform(100, 100.0), g100).collapse_rate;
    const double pred_sf2 = predict_collapse_revival(NumberSFState{100}, g100).collapse_rate;
    cell("sf1/generic/lattice", pred_sf1, ray.std_dev(), 1e-6);
    cell("sf2/generic/lattice", pred_sf2, ray.std_dev(), 1e-6);

    const auto sampled_std = [&](const AtomicState& state) {
        const auto draws = sample_frequencies(state, g100, 100000, 17);
        double m = 0.0, s = 0.0;
        for (double w : draws) m += w;
        m /= static_cast<double>(draws.size());
        for (double w : draws) s += (w - m) * (w - m);
        return std::sqrt(s / static_cast<double>(draws.size()));
    };
    cell("sf1/generic/lattice/sampled", pred_sf1,
         sampled_std(CoherentSFState::uniform(100, 100.0)), 0.05);
    cell("sf2/generic/lattice/sampled", pred_sf2, sampled_std(NumberSFState{100}), 0.05);

    verdict(8, "analytic width table against independent routes", pass,
            pass ? "13 cells + 2 sampled cross-checks" : notes);
}

// 9: the photon table's normalized first moment reproduces the spectral
//    intensity across the two-well regression scenarios, 1e-9.
void criterion_9() {
    struct Scenario {
        AtomicState state;
        LatticeGeometry geometry;
    };
    const std::vector<Scenario> scenarios = {
        {MottState{{9, 9}}, LatticeGeometry::half_wavelength(2)},
        {MottState{{9, 10}}, LatticeGeometry::quarter_wavelength(2)},
        {MottState{{3, 4}}, LatticeGeometry::from_rational_spacing(2, 1, 10)},
        {CoherentSFState::uniform(2, 18.0), LatticeGeometry::half_wavelength(2)},
        {CoherentSFState::uniform(2, 5.0), LatticeGeometry::from_spacing(2, 0.23)},
        {NumberSFState{18}, LatticeGeometry::quarter_wavelength(2)},
        {NumberSFState{7}, LatticeGeometry::from_rational_spacing(2, 2, 7)},
    };
    const auto times = grid(3.0, 60);
    double max_diff = 0.0;
    for (const auto& sc : scenarios) {
        const auto stats = photon_statistics(sc.state, sc.geometry, 5, times);
        const auto mean = mean_reflected_intensity(stats);
        const auto direct = reflected_intensity(spectrum(sc.state, sc.geometry), times);
        for (std::size_t i = 0; i < times.size(); ++i)
            max_diff = std::max(max_diff, std::abs(mean.values[i] - direct.values[i]));
    }
    char detail[64];
    std::snprintf(detail, sizeof detail, "max |moment - intensity| = %.2g", max_diff);
    verdict(9, "photon first moment vs spectral intensity", max_diff <= 1e-9, detail);
}

// 10: conserved atoms on an even bipartite lattice have Var(N_even) = N/4
//     exactly; raw site-by-site enumeration with compensated summation.
void criterion_10() {
    struct Case {
        int atoms;
        int sites;
    };
    const std::vector<Case> cases = {{6, 4}, {9, 6}, {20, 10}};
    double max_err = 0.0;
    struct Neumaier {
        double s = 0.0, c = 0.0;
        void add(double x) {
            const double t = s + x;
            if (std::abs(s) >= std::abs(x))
                c += (s - t) + x;
            else
                c += (x - t) + s;
            s = t;
        }
        double value() const { return s + c; }
    };
    for (const auto& c : cases) {
        EnumerationOptions opt;
        opt.max_configurations = 12'000'000;
        Neumaier mean, second;
        for_each_configuration(
            NumberSFState{c.atoms}, LatticeGeometry::half_wavelength(c.sites), opt,
            [&](const std::vector<int>& occ, double logp) {
                const double w = std::exp(logp);
                double ne = 0.0;
                for (std::size_t m = 0; m < occ.size(); m += 2) ne += occ[m];
                mean.add(w * ne);
                second.add(w * ne * ne);
            });
        const double var = second.value() - mean.value() * mean.value();
        max_err = std::max(max_err, std::abs(var - c.atoms / 4.0));
    }
    char detail[64];
    std::snprintf(detail, sizeof detail, "max |Var(N_e) - N/4| = %.2g", max_err);
    verdict(10, "conserved-N even-site variance by raw enumeration", max_err <= 1e-9, detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures;
}
