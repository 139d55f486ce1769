#pragma once

namespace braggsim {

// Dawson integral F(x) = exp(-x^2) * Integral_0^x exp(u^2) du.
// Relative accuracy ~1e-13 on the whole real axis. Odd in x.
// Regions: Maclaurin series for |x| <= 1, Rybicki's sampled-exponential
// representation for 1 < |x| <= 30, asymptotic series in 1/x beyond.
double dawson(double x);

// Imaginary error function erfi(x) = (2/sqrt(pi)) exp(x^2) F(x).
// Overflows for |x| greater than about 26.6 (exp(x^2) passes DBL_MAX);
// quantities of the form x*F(x) should be computed via dawson directly.
double erfi(double x);

}
