#include "braggsim/dynamics.hpp"

#include <cmath>

#include "braggsim/errors.hpp"
#include "braggsim/special_functions.hpp"

namespace braggsim {

namespace {

constexpr double pi = 3.14159265358979323846;

void check_times(const std::vector<double>& times) {
    if (times.empty()) throw DomainError("time grid must not be empty");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw DomainError("time grid must be strictly increasing");
}

enum class SpacingColumn { half, quarter, general };

SpacingColumn column_of(const LatticeGeometry& geometry) {
    if (geometry.rational && geometry.p == 1) return SpacingColumn::half;
    if (geometry.rational && geometry.p == 2) return SpacingColumn::quarter;
    return SpacingColumn::general;
}

}

TimeSeries reflected_intensity(const Spectrum& spectrum, const std::vector<double>& times) {
    check_times(times);
    const double mass = spectrum.mass();
    if (std::fabs(mass - 1.0) > 1e-3)
        throw DomainError("spectrum mass must be 1 (renormalize before computing intensities)");
    TimeSeries series;
    series.times = times;
    series.values.reserve(times.size());
    for (double t : times) {
        double v = 0.0;
        for (const auto& line : spectrum.lines) {
            const double s = std::sin(line.omega * t);
            v += line.probability * s * s;
        }
        series.values.push_back(v);
    }
    return series;
}

CollapseRevivalPrediction predict_collapse_revival(const AtomicState& state,
                                                   const LatticeGeometry& geometry) {
    validate_state(state, geometry);
    if (geometry.sites < 2)
        throw UnsupportedCombination("collapse-rate table needs at least two wells");

    CollapseRevivalPrediction out;
    const bool two_well = geometry.sites == 2;
    out.regime = two_well ? "two_well" : "lattice";
    const SpacingColumn column = column_of(geometry);
    const bool integer_spectrum = geometry.rational && geometry.p <= 2;
    const double mean_N = mean_total_atoms(state);
    const double sqrt_M = std::sqrt(static_cast<double>(geometry.sites));

    if (std::holds_alternative<MottState>(state)) {
        out.state = "mott";
        out.collapse_rate = 0.0;
        if (integer_spectrum)
            out.revival_time = pi;
        else
            out.note = "single frequency line; strictly periodic but not on the integer grid";
        return out;
    }

    if (std::holds_alternative<CoherentSFState>(state)) {
        out.state = "sf1";
        switch (column) {
            case SpacingColumn::half:
                out.collapse_rate = 2.0 * std::sqrt(mean_N);
                break;
            case SpacingColumn::quarter:
                out.collapse_rate = two_well ? std::sqrt(mean_N)
                                             : std::sqrt(1.0 - 2.0 / pi) * std::sqrt(mean_N);
                break;
            case SpacingColumn::general:
                out.collapse_rate = two_well ? 2.0 * std::sqrt(mean_N)
                                             : std::sqrt(1.0 - pi / 4.0) * mean_N / sqrt_M;
                break;
        }
        if (integer_spectrum) out.revival_time = pi;
        return out;
    }

    const auto& sf2 = std::get<NumberSFState>(state);
    const double atoms = sf2.total_atoms;
    out.state = "sf2";
    switch (column) {
        case SpacingColumn::half:
            out.collapse_rate = 0.0;
            out.note = "fixed total atom number: pure sinusoid, no collapse";
            break;
        case SpacingColumn::quarter:
            out.collapse_rate = two_well ? std::sqrt(atoms)
                                         : std::sqrt(1.0 - 2.0 / pi) * std::sqrt(atoms);
            out.note = sf2.total_atoms % 2 == 0
                           ? "even total atom number: half revival, intensity returns to zero "
                             "already at t = pi/2"
                           : "odd total atom number: intensity reaches n_tot at t = pi/2";
            break;
        case SpacingColumn::general:
            out.collapse_rate =
                two_well ? 2.0 * std::sqrt(0.5 * atoms * (1.0 - std::cos(geometry.phase())))
                         : std::sqrt(1.0 - pi / 4.0) * atoms / sqrt_M;
            break;
    }
    if (integer_spectrum) out.revival_time = pi;
    return out;
}

TimeSeries closed_form_lattice_intensity(double mean_N, int sites,
                                         const std::vector<double>& times) {
    check_times(times);
    if (!(mean_N > 0.0)) throw DomainError("mean atom number must be positive");
    if (sites < 1) throw DomainError("geometry needs at least one site");
    TimeSeries series;
    series.times = times;
    series.values.reserve(times.size());
    const double scale = mean_N / std::sqrt(static_cast<double>(sites));
    for (double t : times) {
        const double x = scale * std::fabs(t);
        series.values.push_back(x * dawson(x));
    }
    return series;
}

double measure_collapse_time(const TimeSeries& series, double mean_frequency, double threshold) {
    if (series.times.size() < 2) throw DomainError("need a dense time series");
    if (!(mean_frequency > 0.0)) throw DomainError("mean frequency must be positive");
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("threshold must be in (0,1)");

    const double window = pi / mean_frequency;
    const double t0 = series.times.front();

    // envelope of the oscillation: one local maximum of 2|I - 1/2| per window
    std::vector<double> peak_t, peak_v;
    long long current = -1;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double dev = 2.0 * std::fabs(series.values[i] - 0.5);
        const auto w = static_cast<long long>(std::floor((series.times[i] - t0) / window));
        if (w != current) {
            peak_t.push_back(series.times[i]);
            peak_v.push_back(dev);
            current = w;
        } else if (dev > peak_v.back()) {
            peak_t.back() = series.times[i];
            peak_v.back() = dev;
        }
    }

    if (peak_v.front() < threshold) return peak_t.front();
    for (std::size_t i = 1; i < peak_v.size(); ++i) {
        if (peak_v[i] < threshold) {
            const double frac = (peak_v[i - 1] - threshold) / (peak_v[i - 1] - peak_v[i]);
            return peak_t[i - 1] + frac * (peak_t[i] - peak_t[i - 1]);
        }
    }
    throw DomainError("envelope never falls below the collapse threshold in the given series");
}

}
