#include "braggsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "braggsim/errors.hpp"
#include "braggsim/rng.hpp"

namespace braggsim {

namespace {

constexpr double pi = 3.14159265358979323846;

// Per-site phasor evaluation with exact integer paths for p <= 2.
struct FrequencyEvaluator {
    enum class Mode { total, alternating, generic };
    Mode mode = Mode::generic;
    std::vector<double> cos_table;  // per site
    std::vector<double> sin_table;

    explicit FrequencyEvaluator(const LatticeGeometry& geometry) {
        const auto sites = static_cast<std::size_t>(geometry.sites);
        if (geometry.rational && geometry.p == 1) {
            mode = Mode::total;
            return;
        }
        if (geometry.rational && geometry.p == 2) {
            mode = Mode::alternating;
            return;
        }
        mode = Mode::generic;
        cos_table.resize(sites);
        sin_table.resize(sites);
        if (geometry.rational) {
            const long long p = geometry.p;
            const long long qm = geometry.q % p;
            for (std::size_t m = 0; m < sites; ++m) {
                const long long l = (static_cast<long long>(m) % p) * qm % p;
                cos_table[m] = std::cos(2.0 * pi * static_cast<double>(l) / static_cast<double>(p));
                sin_table[m] = std::sin(2.0 * pi * static_cast<double>(l) / static_cast<double>(p));
            }
        } else {
            const double phi = geometry.phase();
            for (std::size_t m = 0; m < sites; ++m) {
                cos_table[m] = std::cos(static_cast<double>(m) * phi);
                sin_table[m] = std::sin(static_cast<double>(m) * phi);
            }
        }
    }

    bool integer_exact() const { return mode != Mode::generic; }

    long long integer_value(const std::vector<int>& occ) const {
        if (mode == Mode::total) {
            long long s = 0;
            for (int n : occ) s += n;
            return s;
        }
        long long s = 0;
        for (std::size_t m = 0; m < occ.size(); ++m)
            s += (m % 2 == 0) ? occ[m] : -occ[m];
        return std::llabs(s);
    }

    double operator()(const std::vector<int>& occ) const {
        if (integer_exact()) return static_cast<double>(integer_value(occ));
        double re = 0.0, im = 0.0;
        for (std::size_t m = 0; m < occ.size(); ++m) {
            re += occ[m] * cos_table[m];
            im += occ[m] * sin_table[m];
        }
        return std::hypot(re, im);
    }
};

Spectrum finalize_lines(std::vector<SpectralLine>&& raw) {
    Spectrum spec;
    if (raw.empty()) return spec;
    std::sort(raw.begin(), raw.end(),
              [](const SpectralLine& a, const SpectralLine& b) { return a.omega < b.omega; });
    double group_mass = raw.front().probability;
    double group_omega_mass = raw.front().omega * raw.front().probability;
    double group_first = raw.front().omega;
    bool group_uniform = true;
    double prev_omega = raw.front().omega;
    double total = 0.0;
    auto flush = [&]() {
        SpectralLine line;
        line.probability = group_mass;
        // identical frequencies merge bit-exactly (integer spectra stay exact)
        if (group_uniform || !(group_mass > 0.0))
            line.omega = group_first;
        else
            line.omega = group_omega_mass / group_mass;
        spec.lines.push_back(line);
        total += group_mass;
    };
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].omega - prev_omega <= line_merge_tolerance) {
            group_mass += raw[i].probability;
            group_omega_mass += raw[i].omega * raw[i].probability;
            group_uniform = group_uniform && raw[i].omega == group_first;
        } else {
            flush();
            group_mass = raw[i].probability;
            group_omega_mass = raw[i].omega * raw[i].probability;
            group_first = raw[i].omega;
            group_uniform = true;
        }
        prev_omega = raw[i].omega;
    }
    flush();
    spec.truncated_mass = std::max(0.0, 1.0 - total);
    for (auto& line : spec.lines) line.probability /= total;
    return spec;
}

// Residue classes of the site index under m -> m q mod p.
struct ResidueClasses {
    int p;
    std::vector<int> size;          // atoms-per-class weight c_l
    std::vector<double> sf1_mean;   // Poisson mean per class for coherent states
    std::vector<double> cos_root;   // exp(2 pi i l / p)
    std::vector<double> sin_root;
};

ResidueClasses build_classes(const AtomicState& state, const LatticeGeometry& geometry) {
    ResidueClasses cls;
    cls.p = static_cast<int>(geometry.p);
    cls.size.assign(static_cast<std::size_t>(cls.p), 0);
    cls.sf1_mean.assign(static_cast<std::size_t>(cls.p), 0.0);
    cls.cos_root.resize(static_cast<std::size_t>(cls.p));
    cls.sin_root.resize(static_cast<std::size_t>(cls.p));
    for (int l = 0; l < cls.p; ++l) {
        cls.cos_root[static_cast<std::size_t>(l)] = std::cos(2.0 * pi * l / cls.p);
        cls.sin_root[static_cast<std::size_t>(l)] = std::sin(2.0 * pi * l / cls.p);
    }
    const long long qm = geometry.q % geometry.p;
    const auto* sf1 = std::get_if<CoherentSFState>(&state);
    for (int m = 0; m < geometry.sites; ++m) {
        const auto l = static_cast<std::size_t>((m % cls.p) * qm % cls.p);
        ++cls.size[l];
        if (sf1) cls.sf1_mean[l] += std::norm(sf1->alphas[static_cast<std::size_t>(m)]);
    }
    return cls;
}

double class_frequency(const ResidueClasses& cls, const std::vector<int>& class_sums) {
    if (cls.p == 1) return class_sums[0];
    if (cls.p == 2) return std::abs(static_cast<double>(class_sums[0] - class_sums[1]));
    double re = 0.0, im = 0.0;
    for (std::size_t l = 0; l < class_sums.size(); ++l) {
        re += class_sums[l] * cls.cos_root[l];
        im += class_sums[l] * cls.sin_root[l];
    }
    return std::hypot(re, im);
}

// Exact law of the class sums for the number-conserving state: multinomial
// over the class weights c_l / M.
void for_each_class_composition(int atoms, const ResidueClasses& cls, int sites,
                                const EnumerationOptions& options,
                                const std::function<void(const std::vector<int>&, double)>& visit) {
    std::vector<std::size_t> active;
    for (std::size_t l = 0; l < cls.size.size(); ++l)
        if (cls.size[l] > 0) active.push_back(l);
    // budget: compositions of `atoms` over the active classes
    {
        unsigned long long r = 1;
        const std::size_t cap = options.max_configurations;
        for (std::size_t i = 1; i < active.size(); ++i) {
            r = r * (static_cast<unsigned long long>(atoms) + i) / i;
            if (r > cap)
                throw BudgetExceeded(cap + 1, cap,
                                     "class-sum enumeration exceeds the configuration budget");
        }
    }
    std::vector<double> lg(static_cast<std::size_t>(atoms) + 1);
    for (int k = 0; k <= atoms; ++k)
        lg[static_cast<std::size_t>(k)] = std::lgamma(static_cast<double>(k) + 1.0);
    std::vector<double> log_weight(cls.size.size(), 0.0);
    for (std::size_t l : active)
        log_weight[l] = std::log(static_cast<double>(cls.size[l]) / sites);
    std::vector<int> sums(cls.size.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int remaining) {
        if (idx + 1 == active.size()) {
            sums[active[idx]] = remaining;
            double logp = lg[static_cast<std::size_t>(atoms)];
            for (std::size_t l : active) {
                logp -= lg[static_cast<std::size_t>(sums[l])];
                logp += sums[l] * log_weight[l];
            }
            visit(sums, std::exp(logp));
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            sums[active[idx]] = v;
            rec(idx + 1, remaining - v);
        }
    };
    if (active.empty()) return;
    rec(0, atoms);
}

}

double Spectrum::mass() const {
    double s = 0.0;
    for (const auto& line : lines) s += line.probability;
    return s;
}

double Spectrum::mean() const {
    double s = 0.0;
    for (const auto& line : lines) s += line.omega * line.probability;
    return s;
}

double Spectrum::second_moment() const {
    double s = 0.0;
    for (const auto& line : lines) s += line.omega * line.omega * line.probability;
    return s;
}

double Spectrum::std_dev() const {
    const double m = mean();
    const double v = second_moment() - m * m;
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

double configuration_frequency(const std::vector<int>& occupations,
                               const LatticeGeometry& geometry) {
    if (occupations.size() != static_cast<std::size_t>(geometry.sites))
        throw DimensionError("occupation list does not match the number of wells");
    return FrequencyEvaluator(geometry)(occupations);
}

Spectrum spectrum(const AtomicState& state, const LatticeGeometry& geometry,
                  const EnumerationOptions& options) {
    validate_state(state, geometry);

    std::vector<SpectralLine> raw;

    if (const auto* mott = std::get_if<MottState>(&state)) {
        raw.push_back({configuration_frequency(mott->occupations, geometry), 1.0});
        return finalize_lines(std::move(raw));
    }

    const bool grouped = geometry.rational && geometry.p < geometry.sites;
    if (grouped) {
        const ResidueClasses cls = build_classes(state, geometry);
        if (const auto* sf1 = std::get_if<CoherentSFState>(&state)) {
            (void)sf1;
            // class sums of independent Poissons are Poisson with the summed
            // means, so reuse the product-state enumeration over one synthetic
            // well per class
            CoherentSFState grouped_state;
            for (double mean : cls.sf1_mean)
                grouped_state.alphas.push_back(std::sqrt(mean));
            const LatticeGeometry class_geometry = LatticeGeometry::from_spacing(cls.p, 1.0);
            for_each_configuration(grouped_state, class_geometry, options,
                                   [&](const std::vector<int>& sums, double logp) {
                                       raw.push_back({class_frequency(cls, sums), std::exp(logp)});
                                   });
        } else {
            const auto& sf2 = std::get<NumberSFState>(state);
            for_each_class_composition(sf2.total_atoms, cls, geometry.sites, options,
                                       [&](const std::vector<int>& sums, double prob) {
                                           raw.push_back({class_frequency(cls, sums), prob});
                                       });
        }
        return finalize_lines(std::move(raw));
    }

    const FrequencyEvaluator eval(geometry);
    for_each_configuration(state, geometry, options,
                           [&](const std::vector<int>& occ, double logp) {
                               raw.push_back({eval(occ), std::exp(logp)});
                           });
    return finalize_lines(std::move(raw));
}

std::vector<double> sample_frequencies(const AtomicState& state, const LatticeGeometry& geometry,
                                       std::size_t count, std::uint64_t seed) {
    validate_state(state, geometry);
    const FrequencyEvaluator eval(geometry);
    std::vector<double> draws;
    draws.reserve(count);
    sample_configurations(state, geometry, count, seed,
                          [&](const std::vector<int>& occ) { draws.push_back(eval(occ)); });
    return draws;
}

Spectrum sampled_spectrum(const AtomicState& state, const LatticeGeometry& geometry,
                          std::size_t count, std::uint64_t seed,
                          const std::optional<BinningSpec>& binning) {
    validate_state(state, geometry);
    if (count == 0) throw DomainError("sample count must be positive");
    const FrequencyEvaluator eval(geometry);
    Spectrum spec;

    if (eval.integer_exact()) {
        std::map<long long, std::size_t> counts;
        sample_configurations(state, geometry, count, seed,
                              [&](const std::vector<int>& occ) { ++counts[eval.integer_value(occ)]; });
        for (const auto& [omega, n] : counts)
            spec.lines.push_back({static_cast<double>(omega),
                                  static_cast<double>(n) / static_cast<double>(count)});
        return spec;
    }

    const BinningSpec bins = binning.value_or(BinningSpec{});
    if (!(bins.width > 0.0)) throw DomainError("bin width must be positive");
    std::map<long long, std::size_t> counts;
    sample_configurations(state, geometry, count, seed, [&](const std::vector<int>& occ) {
        const double omega = eval(occ);
        ++counts[static_cast<long long>(std::floor((omega - bins.origin) / bins.width))];
    });
    for (const auto& [idx, n] : counts)
        spec.lines.push_back({bins.origin + (static_cast<double>(idx) + 0.5) * bins.width,
                              static_cast<double>(n) / static_cast<double>(count)});
    spec.binning = bins;
    return spec;
}

Spectrum merge_lines(std::vector<SpectralLine> raw) { return finalize_lines(std::move(raw)); }

Spectrum bin_spectrum(const Spectrum& spectrum, const BinningSpec& bins) {
    if (!(bins.width > 0.0)) throw DomainError("bin width must be positive");
    std::map<long long, double> mass;
    for (const auto& line : spectrum.lines)
        mass[static_cast<long long>(std::floor((line.omega - bins.origin) / bins.width))] +=
            line.probability;
    Spectrum out;
    out.lines.reserve(mass.size());
    for (const auto& [idx, p] : mass)
        out.lines.push_back({bins.origin + (static_cast<double>(idx) + 0.5) * bins.width, p});
    out.binning = bins;
    out.truncated_mass = spectrum.truncated_mass;
    return out;
}

double sf2_number_difference_std(int total_atoms, const LatticeGeometry& geometry) {
    if (geometry.sites != 2)
        throw DomainError("the two-mode coupling fluctuation is defined for two wells only");
    if (total_atoms < 0) throw DimensionError("total atom number must be >= 0");
    if (geometry.rational && geometry.p == 1) return 0.0;
    const double one_minus_cos =
        (geometry.rational && geometry.p == 2) ? 2.0 : 1.0 - std::cos(geometry.phase());
    return std::sqrt(0.5 * total_atoms * one_minus_cos);
}

}
