#pragma once

#include <vector>

namespace braggsim {

// Discrete probability law on a finite support, normalized to unit mass.
// pre_normalization_mass records the mass the defining formula put on the
// represented support before renormalization (1 means nothing was dropped
// or rescaled beyond rounding).
struct DiscreteLaw {
    std::vector<double> values;
    std::vector<double> probabilities;
    double pre_normalization_mass = 1.0;

    double mass() const;
    double mean() const;
    double second_moment() const;   // about zero
    double variance() const;
};

}
