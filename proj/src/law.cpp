#include "braggsim/law.hpp"

namespace braggsim {

double DiscreteLaw::mass() const {
    double s = 0.0;
    for (double p : probabilities) s += p;
    return s;
}

double DiscreteLaw::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * probabilities[i];
    return s;
}

double DiscreteLaw::second_moment() const {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        s += values[i] * values[i] * probabilities[i];
    return s;
}

double DiscreteLaw::variance() const {
    const double m = mean();
    return second_moment() - m * m;
}

}
