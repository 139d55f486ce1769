#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "braggsim/dynamics.hpp"
#include "braggsim/errors.hpp"
#include "braggsim/io.hpp"
#include "braggsim/lattice_stats.hpp"
#include "braggsim/spectral.hpp"
#include "braggsim/states.hpp"
#include "braggsim/twowell.hpp"
#include "braggsim/version.hpp"

namespace {

using nlohmann::json;

struct CommonArgs {
    std::string state_kind;
    std::vector<int> occupations;
    std::vector<double> alphas;
    double mean_n = -1.0;
    int atoms = -1;
    int sites = 0;  // 0 = infer from lists, else 2
    std::string spacing;
    std::string method = "exact";
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    double epsilon = 1e-10;
    std::size_t budget = 10'000'000;
    double bin_width = 0.05;
    double t_max = 3.5;
    int steps = 1400;
    std::vector<double> times;
    std::string output;
    std::string outdir;
};

void add_state_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--state", a.state_kind, "atomic state: mott | sf1 | sf2")->required();
    cmd->add_option("--occupations", a.occupations, "per-well occupations (mott)")
        ->delimiter(',');
    cmd->add_option("--mean-n", a.mean_n, "mean total atom number (sf1, spread uniformly)");
    cmd->add_option("--alphas", a.alphas, "per-well coherent amplitudes (sf1)")->delimiter(',');
    cmd->add_option("--atoms", a.atoms, "total atom number (sf2)");
    cmd->add_option("--sites", a.sites, "number of lattice wells (default 2 or list length)");
}

void add_geometry_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--spacing", a.spacing,
                    "well spacing in units of the light wavelength: rational \"a/b\" or decimal")
        ->required();
}

void add_method_flags(CLI::App* cmd, CommonArgs& a, const std::string& methods) {
    cmd->add_option("--method", a.method, "computation route: " + methods);
    cmd->add_option("--samples", a.samples, "Monte Carlo draw count");
    cmd->add_option("--seed", a.seed, "Monte Carlo seed");
    cmd->add_option("--epsilon", a.epsilon, "enumeration tail mass to drop");
    cmd->add_option("--budget", a.budget, "configuration budget for exact enumeration");
}

void add_output_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--output", a.output, "output base name (default: subcommand name)");
    cmd->add_option("--outdir", a.outdir,
                    "output directory (default: $BRAGGSIM_OUTDIR or current directory)");
}

void add_time_flags(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--t-max", a.t_max, "time grid end, units 1/g");
    cmd->add_option("--steps", a.steps, "time grid step count");
    cmd->add_option("--times", a.times, "explicit time list, overrides the grid")
        ->delimiter(',');
}

int resolved_sites(const CommonArgs& a) {
    if (a.sites > 0) {
        if (a.state_kind == "mott" && !a.occupations.empty() &&
            a.occupations.size() != static_cast<std::size_t>(a.sites))
            throw braggsim::ValidationError("sites",
                                            "sites disagrees with the occupations list length");
        if (a.state_kind == "sf1" && !a.alphas.empty() &&
            a.alphas.size() != static_cast<std::size_t>(a.sites))
            throw braggsim::ValidationError("sites",
                                            "sites disagrees with the alphas list length");
        return a.sites;
    }
    if (a.state_kind == "mott" && !a.occupations.empty())
        return static_cast<int>(a.occupations.size());
    if (a.state_kind == "sf1" && !a.alphas.empty()) return static_cast<int>(a.alphas.size());
    return 2;
}

braggsim::AtomicState resolved_state(const CommonArgs& a, int sites) {
    if (a.state_kind == "mott") {
        if (a.occupations.empty())
            throw braggsim::ValidationError("occupations", "mott needs --occupations");
        return braggsim::MottState{a.occupations};
    }
    if (a.state_kind == "sf1") {
        const bool has_mean = a.mean_n >= 0.0;
        if (has_mean == !a.alphas.empty())
            throw braggsim::ValidationError("mean-n",
                                            "sf1 needs exactly one of --mean-n and --alphas");
        if (has_mean) return braggsim::CoherentSFState::uniform(sites, a.mean_n);
        braggsim::CoherentSFState s;
        s.alphas.assign(a.alphas.begin(), a.alphas.end());
        return s;
    }
    if (a.state_kind == "sf2") {
        if (a.atoms < 0) throw braggsim::ValidationError("atoms", "sf2 needs --atoms >= 0");
        return braggsim::NumberSFState{a.atoms};
    }
    throw braggsim::ValidationError("state", "state must be mott, sf1 or sf2");
}

braggsim::LatticeGeometry resolved_geometry(const CommonArgs& a, int sites) {
    const auto slash = a.spacing.find('/');
    try {
        if (slash != std::string::npos) {
            const long long num = std::stoll(a.spacing.substr(0, slash));
            const long long den = std::stoll(a.spacing.substr(slash + 1));
            return braggsim::LatticeGeometry::from_rational_spacing(sites, num, den);
        }
        return braggsim::LatticeGeometry::from_spacing(sites, std::stod(a.spacing));
    } catch (const braggsim::Error&) {
        throw;
    } catch (const std::exception&) {
        throw braggsim::ValidationError("spacing", "cannot parse spacing \"" + a.spacing + "\"");
    }
}

std::vector<double> resolved_times(const CommonArgs& a) {
    if (!a.times.empty()) {
        for (std::size_t i = 1; i < a.times.size(); ++i)
            if (!(a.times[i] > a.times[i - 1]))
                throw braggsim::ValidationError("times", "times must be strictly increasing");
        return a.times;
    }
    if (!(a.t_max > 0.0)) throw braggsim::ValidationError("t-max", "t-max must be positive");
    if (a.steps < 1) throw braggsim::ValidationError("steps", "steps must be >= 1");
    std::vector<double> t(static_cast<std::size_t>(a.steps) + 1);
    for (int i = 0; i <= a.steps; ++i)
        t[static_cast<std::size_t>(i)] = a.t_max * static_cast<double>(i) / a.steps;
    return t;
}

std::filesystem::path output_base(const CommonArgs& a, const std::string& fallback) {
    std::filesystem::path dir = a.outdir;
    if (dir.empty()) {
        if (const char* env = std::getenv("BRAGGSIM_OUTDIR")) dir = env;
        if (dir.empty()) dir = ".";
    }
    std::filesystem::create_directories(dir);
    return dir / (a.output.empty() ? fallback : a.output);
}

json state_manifest(const CommonArgs& a, int sites) {
    json j;
    j["state"] = a.state_kind;
    j["sites"] = sites;
    if (!a.occupations.empty()) j["occupations"] = a.occupations;
    if (a.mean_n >= 0.0) j["mean_n"] = a.mean_n;
    if (!a.alphas.empty()) j["alphas"] = a.alphas;
    if (a.atoms >= 0) j["atoms"] = a.atoms;
    return j;
}

json geometry_manifest(const braggsim::LatticeGeometry& g, const std::string& raw) {
    json j;
    j["spacing"] = raw;
    j["spacing_value"] = g.spacing;
    j["rational"] = g.rational;
    if (g.rational) {
        j["phase_numerator_q"] = g.q;
        j["phase_denominator_p"] = g.p;
    }
    return j;
}

void write_artifacts(const std::filesystem::path& base, const std::string* csv,
                     const json& result, json manifest,
                     std::chrono::steady_clock::time_point t0) {
    manifest["version"] = braggsim::version;
    manifest["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (csv) braggsim::write_text_file(base.string() + ".csv", *csv);
    braggsim::write_text_file(base.string() + ".json", result.dump(2) + "\n");
    braggsim::write_text_file(base.string() + ".manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << base.string() << (csv ? ".{csv,json,manifest.json}" : ".{json,manifest.json}")
              << "\n";
}

// ---- subcommand runners ----------------------------------------------------

struct SweepArgs {
    double start = 0.0;
    double stop = 0.5;
    int points = 0;  // 0 = no sweep
};

void run_spectrum(const CommonArgs& a, const SweepArgs& sweep,
                  std::chrono::steady_clock::time_point t0) {
    const int sites = resolved_sites(a);
    const auto state = resolved_state(a, sites);
    if (a.method != "exact" && a.method != "sampled")
        throw braggsim::ValidationError("method", "spectrum supports exact or sampled");

    braggsim::EnumerationOptions opt;
    opt.epsilon = a.epsilon;
    opt.max_configurations = a.budget;

    json manifest;
    manifest["command"] = "spectrum";
    manifest["parameters"] = state_manifest(a, sites);
    manifest["parameters"]["method"] = a.method;
    manifest["parameters"]["epsilon"] = a.epsilon;
    manifest["parameters"]["budget"] = a.budget;
    if (a.method == "sampled") {
        manifest["parameters"]["samples"] = a.samples;
        manifest["parameters"]["seed"] = a.seed;
        manifest["parameters"]["bin_width"] = a.bin_width;
    }

    const auto compute = [&](const braggsim::LatticeGeometry& g) {
        if (a.method == "sampled")
            return braggsim::sampled_spectrum(state, g, a.samples, a.seed,
                                              braggsim::BinningSpec{0.0, a.bin_width});
        return braggsim::spectrum(state, g, opt);
    };

    if (sweep.points > 0) {
        if (!(sweep.stop > sweep.start))
            throw braggsim::ValidationError("sweep", "sweep needs stop > start");
        std::string csv = braggsim::sweep_csv_header();
        json spacings = json::array();
        for (int i = 0; i < sweep.points; ++i) {
            const double d =
                sweep.start + (sweep.stop - sweep.start) * static_cast<double>(i) /
                                  std::max(1, sweep.points - 1);
            const auto g = braggsim::LatticeGeometry::from_spacing(sites, d);
            braggsim::append_sweep_csv(csv, d, compute(g));
            spacings.push_back(d);
        }
        manifest["parameters"]["sweep"] = {
            {"start", sweep.start}, {"stop", sweep.stop}, {"points", sweep.points}};
        json result;
        result["spacings"] = spacings;
        result["note"] = "long-format spectrum sweep; see the CSV";
        write_artifacts(output_base(a, "spectrum"), &csv, result, manifest, t0);
        return;
    }

    const auto geometry = resolved_geometry(a, sites);
    manifest["parameters"]["geometry"] = geometry_manifest(geometry, a.spacing);
    const auto spec = compute(geometry);
    const std::string csv = braggsim::to_csv(spec);
    write_artifacts(output_base(a, "spectrum"), &csv, braggsim::to_json(spec), manifest, t0);
}

void run_intensity(const CommonArgs& a, std::chrono::steady_clock::time_point t0) {
    const int sites = resolved_sites(a);
    const auto state = resolved_state(a, sites);
    const auto times = resolved_times(a);

    json manifest;
    manifest["command"] = "intensity";
    manifest["parameters"] = state_manifest(a, sites);
    manifest["parameters"]["method"] = a.method;
    manifest["parameters"]["t_max"] = a.t_max;
    manifest["parameters"]["steps"] = a.steps;
    if (!a.times.empty()) manifest["parameters"]["times"] = a.times;

    braggsim::TimeSeries series;
    if (a.method == "analytic") {
        if (a.state_kind != "sf1")
            throw braggsim::ValidationError(
                "method", "the analytic collapse envelope is defined for sf1");
        series = braggsim::closed_form_lattice_intensity(braggsim::mean_total_atoms(state),
                                                         sites, times);
        manifest["parameters"]["mean_n_resolved"] = braggsim::mean_total_atoms(state);
    } else if (a.method == "exact") {
        const auto geometry = resolved_geometry(a, sites);
        manifest["parameters"]["geometry"] = geometry_manifest(geometry, a.spacing);
        braggsim::EnumerationOptions opt;
        opt.epsilon = a.epsilon;
        opt.max_configurations = a.budget;
        series = braggsim::reflected_intensity(braggsim::spectrum(state, geometry, opt), times);
    } else {
        throw braggsim::ValidationError("method", "intensity supports exact or analytic");
    }
    const std::string csv = braggsim::to_csv(series);
    write_artifacts(output_base(a, "intensity"), &csv, braggsim::to_json(series), manifest, t0);
}

void run_photon_stats(const CommonArgs& a, int photons, double coherent_mean,
                      std::chrono::steady_clock::time_point t0) {
    const int sites = resolved_sites(a);
    if (sites != 2)
        throw braggsim::ValidationError("sites",
                                        "photon statistics are exact two-well computations");
    if (a.method != "exact")
        throw braggsim::ValidationError("method", "photon statistics support method exact only");
    if ((photons >= 0) == (coherent_mean >= 0.0))
        throw braggsim::ValidationError(
            "photons", "need exactly one of --photons and --coherent-mean");

    const auto state = resolved_state(a, sites);
    const auto geometry = resolved_geometry(a, sites);
    const auto times = resolved_times(a);

    json manifest;
    manifest["command"] = "photon-stats";
    manifest["parameters"] = state_manifest(a, sites);
    manifest["parameters"]["geometry"] = geometry_manifest(geometry, a.spacing);
    manifest["parameters"]["epsilon"] = a.epsilon;
    if (!a.times.empty())
        manifest["parameters"]["times"] = a.times;
    else {
        manifest["parameters"]["t_max"] = a.t_max;
        manifest["parameters"]["steps"] = a.steps;
    }

    braggsim::PhotonStatistics stats;
    if (photons >= 0) {
        manifest["parameters"]["photons"] = photons;
        stats = braggsim::photon_statistics(state, geometry, photons, times, a.epsilon);
    } else {
        manifest["parameters"]["coherent_mean"] = coherent_mean;
        stats = braggsim::photon_statistics_coherent_input(state, geometry, coherent_mean,
                                                           times, a.epsilon);
    }
    const std::string csv = braggsim::to_csv(stats);
    write_artifacts(output_base(a, "photon_stats"), &csv, braggsim::to_json(stats), manifest,
                    t0);
}

void run_collapse(const CommonArgs& a, std::chrono::steady_clock::time_point t0) {
    const int sites = resolved_sites(a);
    const auto state = resolved_state(a, sites);
    const auto geometry = resolved_geometry(a, sites);

    json manifest;
    manifest["command"] = "collapse";
    manifest["parameters"] = state_manifest(a, sites);
    manifest["parameters"]["geometry"] = geometry_manifest(geometry, a.spacing);

    const auto prediction = braggsim::predict_collapse_revival(state, geometry);
    write_artifacts(output_base(a, "collapse"), nullptr, braggsim::to_json(prediction),
                    manifest, t0);
}

struct LawArgs {
    std::string law;
    std::string state_kind = "sf1";
    int p = 0;
    int q = 1;
    double omega_max = 0.0;
    int points = 500;
};

void run_laws(const CommonArgs& a, const LawArgs& l, std::chrono::steady_clock::time_point t0) {
    json manifest;
    manifest["command"] = "laws";
    manifest["parameters"]["law"] = l.law;

    const auto kind_of = [&]() {
        if (l.state_kind == "sf1") return braggsim::StateKind::sf1;
        if (l.state_kind == "sf2") return braggsim::StateKind::sf2;
        throw braggsim::ValidationError("state-kind", "state-kind must be sf1 or sf2");
    };
    const auto mean_arg = [&]() -> double {
        if (a.mean_n >= 0.0 && a.atoms >= 0)
            throw braggsim::ValidationError("mean-n", "give one of --mean-n and --atoms");
        if (a.mean_n >= 0.0) return a.mean_n;
        if (a.atoms >= 0) return static_cast<double>(a.atoms);
        throw braggsim::ValidationError("mean-n", "this law needs --mean-n or --atoms");
    };

    if (l.law == "gaussian-total") {
        const double mu = mean_arg();
        manifest["parameters"]["mean_n"] = mu;
        const auto law = braggsim::gaussian_total_law(mu);
        const std::string csv = braggsim::to_csv(law, "x");
        write_artifacts(output_base(a, "laws"), &csv, braggsim::to_json(law), manifest, t0);
        return;
    }
    if (l.law == "even-odd") {
        const auto kind = kind_of();
        const double x = mean_arg();
        manifest["parameters"]["state_kind"] = l.state_kind;
        manifest["parameters"][kind == braggsim::StateKind::sf1 ? "mean_n" : "atoms"] = x;
        const auto law = braggsim::even_odd_difference_law(kind, x);
        const std::string csv = braggsim::to_csv(law, "x");
        write_artifacts(output_base(a, "laws"), &csv, braggsim::to_json(law), manifest, t0);
        return;
    }
    if (l.law == "p-class") {
        const auto kind = kind_of();
        const double x = mean_arg();
        if (l.p < 3)
            throw braggsim::ValidationError(
                "p", "p-class law needs --p >= 3 (p <= 2 is even-odd / gaussian-total)");
        const int sites = a.sites > 0 ? a.sites : l.p;
        braggsim::PClassOptions opt;
        opt.sample = a.method == "sampled";
        if (a.method != "exact" && a.method != "sampled")
            throw braggsim::ValidationError("method", "p-class supports exact or sampled");
        opt.samples = a.samples;
        opt.seed = a.seed;
        opt.bin_width = a.bin_width;
        opt.enumeration.epsilon = a.epsilon;
        opt.enumeration.max_configurations = a.budget;
        manifest["parameters"]["state_kind"] = l.state_kind;
        manifest["parameters"][kind == braggsim::StateKind::sf1 ? "mean_n" : "atoms"] = x;
        manifest["parameters"]["sites"] = sites;
        manifest["parameters"]["p"] = l.p;
        manifest["parameters"]["q"] = l.q;
        manifest["parameters"]["method"] = a.method;
        if (opt.sample) {
            manifest["parameters"]["samples"] = a.samples;
            manifest["parameters"]["seed"] = a.seed;
            manifest["parameters"]["bin_width"] = a.bin_width;
        }
        const auto spec = braggsim::p_class_law(kind, x, sites, l.p, l.q, opt);
        const std::string csv = braggsim::to_csv(spec);
        write_artifacts(output_base(a, "laws"), &csv, braggsim::to_json(spec), manifest, t0);
        return;
    }
    if (l.law == "rayleigh") {
        const double mu = mean_arg();
        manifest["parameters"]["mean_n"] = mu;
        const auto law = braggsim::rayleigh_walk_law(mu);
        const double omega_max = l.omega_max > 0.0 ? l.omega_max : 3.5 * std::sqrt(mu);
        const int points = std::max(2, l.points);
        manifest["parameters"]["omega_max"] = omega_max;
        manifest["parameters"]["points"] = points;
        std::string csv = "x,density\n";
        json xs = json::array(), ds = json::array();
        for (int i = 0; i < points; ++i) {
            const double x = omega_max * static_cast<double>(i) / (points - 1);
            const double d = law.pdf(x);
            csv += braggsim::format_double(x);
            csv += ',';
            csv += braggsim::format_double(d);
            csv += '\n';
            xs.push_back(x);
            ds.push_back(d);
        }
        json result = {{"x", xs},
                       {"density", ds},
                       {"mean", law.mean()},
                       {"std_dev", law.std_dev()},
                       {"mode", law.mode()}};
        write_artifacts(output_base(a, "laws"), &csv, result, manifest, t0);
        return;
    }
    throw braggsim::ValidationError(
        "law", "law must be gaussian-total, even-odd, p-class or rayleigh");
}

}  // namespace

int main(int argc, char** argv) {
    const auto t0 = std::chrono::steady_clock::now();
    CLI::App app{"two-mode cavity Bragg spectra of lattice atoms"};
    app.require_subcommand(1);
    app.set_version_flag("--version", braggsim::version);

    CommonArgs a;
    SweepArgs sweep;
    LawArgs laws;
    int photons = -1;
    double coherent_mean = -1.0;

    auto* sp = app.add_subcommand("spectrum", "frequency lines of the scattered light");
    add_state_flags(sp, a);
    sp->add_option("--spacing", a.spacing,
                   "well spacing in units of the light wavelength: rational \"a/b\" or decimal");
    add_method_flags(sp, a, "exact | sampled");
    sp->add_option("--bin-width", a.bin_width, "bin width for sampled spectra");
    sp->add_option("--sweep-start", sweep.start, "spacing sweep start (d/lambda)");
    sp->add_option("--sweep-stop", sweep.stop, "spacing sweep stop (d/lambda)");
    sp->add_option("--sweep-points", sweep.points, "spacing sweep point count (enables sweep)");
    add_output_flags(sp, a);

    auto* in = app.add_subcommand("intensity", "reflected-mode intensity versus time");
    add_state_flags(in, a);
    in->add_option("--spacing", a.spacing,
                   "well spacing in units of the light wavelength: rational \"a/b\" or decimal");
    add_method_flags(in, a, "exact | analytic");
    add_time_flags(in, a);
    add_output_flags(in, a);

    auto* ph = app.add_subcommand("photon-stats", "full photon number law on two wells");
    add_state_flags(ph, a);
    add_geometry_flags(ph, a);
    ph->add_option("--photons", photons, "photon number of the injected Fock drive");
    ph->add_option("--coherent-mean", coherent_mean, "mean photon number of a coherent drive");
    add_method_flags(ph, a, "exact");
    add_time_flags(ph, a);
    add_output_flags(ph, a);

    auto* co = app.add_subcommand("collapse", "analytic collapse rate and revival time");
    add_state_flags(co, a);
    add_geometry_flags(co, a);
    add_output_flags(co, a);

    auto* la = app.add_subcommand("laws", "large-lattice frequency laws");
    la->add_option("--law", laws.law, "gaussian-total | even-odd | p-class | rayleigh")
        ->required();
    la->add_option("--state-kind", laws.state_kind, "sf1 | sf2");
    la->add_option("--mean-n", a.mean_n, "mean total atom number (sf1 laws)");
    la->add_option("--atoms", a.atoms, "total atom number (sf2 laws)");
    la->add_option("--sites", a.sites, "lattice size for the p-class law");
    la->add_option("--p", laws.p, "residue class count (p-class law)");
    la->add_option("--q", laws.q, "phase numerator, coprime with p (p-class law)");
    la->add_option("--method", a.method, "exact | sampled (p-class law)");
    la->add_option("--samples", a.samples, "Monte Carlo draw count");
    la->add_option("--seed", a.seed, "Monte Carlo seed");
    la->add_option("--bin-width", a.bin_width, "bin width for sampled/oversized laws");
    la->add_option("--budget", a.budget, "configuration budget for exact enumeration");
    la->add_option("--omega-max", laws.omega_max, "density grid end (rayleigh law)");
    la->add_option("--points", laws.points, "density grid size (rayleigh law)");
    add_output_flags(la, a);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sp->parsed()) {
            if (a.spacing.empty() && sweep.points == 0)
                throw braggsim::ValidationError("spacing",
                                                "spectrum needs --spacing or a sweep");
            run_spectrum(a, sweep, t0);
        } else if (in->parsed()) {
            if (a.spacing.empty() && a.method != "analytic")
                throw braggsim::ValidationError("spacing", "intensity needs --spacing");
            run_intensity(a, t0);
        } else if (ph->parsed()) {
            run_photon_stats(a, photons, coherent_mean, t0);
        } else if (co->parsed()) {
            run_collapse(a, t0);
        } else if (la->parsed()) {
            run_laws(a, laws, t0);
        }
    } catch (const braggsim::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << " (required " << e.required << ", budget "
                  << e.budget << ")\nhint: use --method sampled with --samples/--seed\n";
        return 3;
    } catch (const braggsim::ValidationError& e) {
        std::cerr << "validation error: field \"" << e.field << "\": " << e.what() << "\n";
        return 2;
    } catch (const braggsim::DomainError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const braggsim::DimensionError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
