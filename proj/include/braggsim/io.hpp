#pragma once

#include <string>

#include <json.hpp>

#include "braggsim/dynamics.hpp"
#include "braggsim/law.hpp"
#include "braggsim/spectral.hpp"
#include "braggsim/twowell.hpp"

namespace braggsim {

// Shortest round-trip decimal with 17 significant digits, '.' separator.
std::string format_double(double x);

// CSV bodies. Header line first, '\n' line endings, no trailing separator.
std::string to_csv(const Spectrum& spectrum);                 // omega,probability
std::string to_csv(const TimeSeries& series);                 // t,intensity
std::string to_csv(const PhotonStatistics& stats);            // t,n_minus_k,probability
std::string to_csv(const DiscreteLaw& law, const std::string& value_header);
std::string to_csv(const QFunctionGrid& grid);                // re,im,q

// Long-format CSV for spacing sweeps: spacing,omega,probability.
std::string sweep_csv_header();
void append_sweep_csv(std::string& out, double spacing, const Spectrum& spectrum);

nlohmann::json to_json(const Spectrum& spectrum);
nlohmann::json to_json(const TimeSeries& series);
nlohmann::json to_json(const CollapseRevivalPrediction& prediction);
nlohmann::json to_json(const DiscreteLaw& law);
nlohmann::json to_json(const PhotonStatistics& stats);
nlohmann::json to_json(const CatStateDiagnostics& diagnostics);

void write_text_file(const std::string& path, const std::string& content);

}
