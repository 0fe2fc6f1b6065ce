#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qgraph/numerics.hpp"

namespace qgraph {

/// Negative spectrum of the star graph with the cyclic coupling.
struct StarSpectrum {
    int degree = 0;
    std::vector<double> kappas;    // strictly increasing
    std::vector<double> energies;  // -kappa^2, same order
};

/// Number of bound states: (N-1)/2 for odd N, N/2 - 1 for even N.
inline int bound_state_count(int n)
{
    return n % 2 != 0 ? (n - 1) / 2 : n / 2 - 1;
}

/// Real reduction of (kappa - i)^N + (-1)^{N-1} (kappa + i)^N:
/// 2 Re (kappa + i)^N for odd N, 2 Im (kappa + i)^N for even N.
inline double spectral_polynomial(int n, double kappa)
{
    if (n < 3)
        throw std::invalid_argument("spectral_polynomial: degree must be >= 3");
    Complex z{1.0, 0.0};
    const Complex base{kappa, 1.0};
    for (int i = 0; i < n; ++i)
        z *= base;
    return n % 2 != 0 ? 2.0 * z.real() : 2.0 * z.imag();
}

/// Closed-form decay rates kappa_m = tan(pi m / N).
inline std::vector<double> bound_state_kappas_closed_form(int n)
{
    std::vector<double> out;
    for (int m = 1; m <= bound_state_count(n); ++m)
        out.push_back(std::tan(std::numbers::pi * m / n));
    return out;
}

/// Bound states found by root-finding the spectral polynomial, one bracket
/// per closed-form root bounded by tan(pi (m -+ 1/2) / N). The last bracket
/// is capped at 2 kappa_M + 1 because tan(pi (M + 1/2) / N) is the pole at
/// pi/2 for odd N. The kappa = 0 root is excluded by construction.
inline StarSpectrum bound_states(int n, const ToleranceConfig& tol = {})
{
    if (n < 3)
        throw std::invalid_argument("bound_states: degree must be >= 3");
    const int count = bound_state_count(n);
    StarSpectrum out{n, {}, {}};
    auto poly = [n](double kappa) { return spectral_polynomial(n, kappa); };
    for (int m = 1; m <= count; ++m) {
        const double lo = std::tan(std::numbers::pi * (m - 0.5) / n);
        const double hi = m < count ? std::tan(std::numbers::pi * (m + 0.5) / n)
                                    : 2.0 * std::tan(std::numbers::pi * m / n) + 1.0;
        const double kappa = find_root(poly, {lo, hi, poly(lo), poly(hi)}, tol);
        if (kappa <= tol.root_abs)
            continue;
        out.kappas.push_back(kappa);
        out.energies.push_back(-kappa * kappa);
    }
    return out;
}

} // namespace qgraph
