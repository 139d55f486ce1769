#include "braggsim/io.hpp"

#include <cstdio>
#include <fstream>

#include "braggsim/errors.hpp"

namespace braggsim {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void append_row(std::string& out, std::initializer_list<double> cells) {
    bool first = true;
    for (double c : cells) {
        if (!first) out += ',';
        out += format_double(c);
        first = false;
    }
    out += '\n';
}

}  // namespace

std::string to_csv(const Spectrum& spectrum) {
    std::string out = "omega,probability\n";
    for (const auto& line : spectrum.lines) append_row(out, {line.omega, line.probability});
    return out;
}

std::string to_csv(const TimeSeries& series) {
    std::string out = "t,intensity\n";
    for (std::size_t i = 0; i < series.times.size(); ++i)
        append_row(out, {series.times[i], series.values[i]});
    return out;
}

std::string to_csv(const PhotonStatistics& stats) {
    std::string out = "t,n_minus_k,probability\n";
    for (std::size_t i = 0; i < stats.times.size(); ++i)
        for (std::size_t j = 0; j < stats.table[i].size(); ++j)
            append_row(out, {stats.times[i], static_cast<double>(j), stats.table[i][j]});
    return out;
}

std::string to_csv(const DiscreteLaw& law, const std::string& value_header) {
    std::string out = value_header + ",probability\n";
    for (std::size_t i = 0; i < law.values.size(); ++i)
        append_row(out, {law.values[i], law.probabilities[i]});
    return out;
}

std::string to_csv(const QFunctionGrid& grid) {
    std::string out = "re,im,q\n";
    for (std::size_t i = 0; i < grid.re.size(); ++i)
        for (std::size_t j = 0; j < grid.im.size(); ++j)
            append_row(out, {grid.re[i], grid.im[j], grid.values[i * grid.im.size() + j]});
    return out;
}

std::string sweep_csv_header() { return "spacing,omega,probability\n"; }

void append_sweep_csv(std::string& out, double spacing, const Spectrum& spectrum) {
    for (const auto& line : spectrum.lines)
        append_row(out, {spacing, line.omega, line.probability});
}

nlohmann::json to_json(const Spectrum& spectrum) {
    nlohmann::json j;
    j["omega"] = nlohmann::json::array();
    j["probability"] = nlohmann::json::array();
    for (const auto& line : spectrum.lines) {
        j["omega"].push_back(line.omega);
        j["probability"].push_back(line.probability);
    }
    j["truncated_mass"] = spectrum.truncated_mass;
    if (spectrum.binning) {
        j["binning"] = {{"origin", spectrum.binning->origin}, {"width", spectrum.binning->width}};
    }
    return j;
}

nlohmann::json to_json(const TimeSeries& series) {
    return {{"t", series.times}, {"intensity", series.values}};
}

nlohmann::json to_json(const CollapseRevivalPrediction& prediction) {
    nlohmann::json j;
    j["collapse_rate"] = prediction.collapse_rate;
    if (prediction.collapse_rate > 0.0)
        j["collapse_time"] = 1.0 / prediction.collapse_rate;
    else
        j["collapse_time"] = nullptr;
    if (prediction.revival_time)
        j["revival_time"] = *prediction.revival_time;
    else
        j["revival_time"] = nullptr;
    j["regime"] = prediction.regime;
    j["state"] = prediction.state;
    if (!prediction.note.empty()) j["note"] = prediction.note;
    return j;
}

nlohmann::json to_json(const DiscreteLaw& law) {
    return {{"values", law.values},
            {"probabilities", law.probabilities},
            {"pre_normalization_mass", law.pre_normalization_mass}};
}

nlohmann::json to_json(const PhotonStatistics& stats) {
    nlohmann::json j = {{"t", stats.times},
                        {"n_tot", stats.n_tot},
                        {"probabilities", stats.table},
                        {"truncated_mass", stats.truncated_mass}};
    if (stats.input_mean_photons) j["input_mean_photons"] = *stats.input_mean_photons;
    return j;
}

nlohmann::json to_json(const CatStateDiagnostics& diagnostics) {
    nlohmann::json j;
    j["weight_all_reflected"] = diagnostics.weight_all_reflected;
    j["weight_none_reflected"] = diagnostics.weight_none_reflected;
    j["other_outcome_mass"] = diagnostics.other_outcome_mass;
    j["purity_given_all_reflected"] = diagnostics.purity_given_all_reflected;
    j["purity_given_none_reflected"] = diagnostics.purity_given_none_reflected;
    j["purity_unconditional"] = diagnostics.purity_unconditional;
    j["odd_total_mass_given_all"] = diagnostics.odd_total_mass_given_all;
    j["even_total_mass_given_none"] = diagnostics.even_total_mass_given_none;
    j["truncated_mass"] = diagnostics.truncated_mass;
    j["q_function"] = {{"re", diagnostics.q_function.re},
                       {"im", diagnostics.q_function.im},
                       {"values", diagnostics.q_function.values}};
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
    if (!out) throw Error("failed writing output file: " + path);
}

}
