#pragma once

// Independent reference computations shared by the unit tests. Nothing here
// calls into the transform or operator code under test.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "packetlab/grid.hpp"

namespace oracle {

using packetlab::complex;

/// h sum_j f_j exp(-i xi_m x_j) by direct double loop, xi_m = -pi/h + 2 pi m / L.
inline std::vector<complex> direct_sdft(double h, long origin, const std::vector<complex>& f) {
    const std::size_t M = f.size();
    const double L = static_cast<double>(M) * h;
    std::vector<complex> out(M);
    for (std::size_t m = 0; m < M; ++m) {
        const double xi = -std::numbers::pi / h + 2.0 * std::numbers::pi * static_cast<double>(m) / L;
        complex acc{};
        for (std::size_t n = 0; n < M; ++n) {
            const double x = static_cast<double>(origin + static_cast<long>(n)) * h;
            acc += f[n] * std::polar(1.0, -xi * x);
        }
        out[m] = h * acc;
    }
    return out;
}

/// (1/L) sum_m F_m exp(i xi_m x_j) by direct double loop.
inline std::vector<complex> direct_isdft(double h, long origin, const std::vector<complex>& F) {
    const std::size_t M = F.size();
    const double L = static_cast<double>(M) * h;
    std::vector<complex> out(M);
    for (std::size_t n = 0; n < M; ++n) {
        const double x = static_cast<double>(origin + static_cast<long>(n)) * h;
        complex acc{};
        for (std::size_t m = 0; m < M; ++m) {
            const double xi = -std::numbers::pi / h + 2.0 * std::numbers::pi * static_cast<double>(m) / L;
            acc += F[m] * std::polar(1.0, xi * x);
        }
        out[n] = acc / L;
    }
    return out;
}

inline std::vector<complex> random_values(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    std::vector<complex> v(n);
    for (auto& z : v) z = {d(rng), d(rng)};
    return v;
}

inline double rel_l2(const std::vector<complex>& a, const std::vector<complex>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

inline double max_abs_diff(const std::vector<complex>& a, const std::vector<complex>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

template <class Field>
std::vector<complex> values(const Field& f) {
    return {f.values().begin(), f.values().end()};
}

/// h sum_j exp(-gamma (j h)^2) over the infinite lattice by Poisson summation:
/// sqrt(pi / gamma) sum_k exp(-pi^2 k^2 / (gamma h^2)).
inline double lattice_gaussian_mass(double gamma, double h) {
    double s = 0.0;
    for (int k = -3; k <= 3; ++k) s += std::exp(-std::numbers::pi * std::numbers::pi * k * k / (gamma * h * h));
    return std::sqrt(std::numbers::pi / gamma) * s;
}

/// Integral over [a, b] of exp(-x^2 / gamma), the squared Gaussian profile up to 2 pi / gamma.
inline double truncated_gaussian_square_integral(double gamma, double a, double b) {
    const double s = std::sqrt(gamma);
    return 0.5 * std::sqrt(std::numbers::pi * gamma) * (std::erf(b / s) - std::erf(a / s));
}

}  // namespace oracle
