#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "packetlab/error.hpp"
#include "packetlab/grid.hpp"

namespace packetlab {

/// Gaussian Fourier profile sqrt(2 pi / gamma) exp(-xi^2 / (2 gamma)); its inverse transform is exp(-gamma x^2 / 2).
inline double gaussian_profile(double gamma, double xi) {
    return std::sqrt(2.0 * std::numbers::pi / gamma) * std::exp(-xi * xi / (2.0 * gamma));
}

/// Concentration gamma = h^(-1/4), the default used throughout the figure presets.
inline double default_gamma(double h) { return std::pow(h, -0.25); }

/// Truncated Gaussian datum centered at eta0 / h with Fourier support [eta1 / h, eta2 / h).
struct PacketSpec {
    double eta0 = 0.0;
    double eta1 = -std::numbers::pi;
    double eta2 = std::numbers::pi;
    double gamma = 1.0;

    void validate() const {
        constexpr double pi = std::numbers::pi;
        constexpr double slack = 1e-12;
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw validation_error("packet: gamma must be positive, got " + std::to_string(gamma));
        if (!(eta1 < eta2))
            throw validation_error("packet: band requires eta1 < eta2");
        if (eta1 < -pi - slack || eta2 > pi + slack)
            throw validation_error("packet: band [eta1, eta2] must lie inside [-pi, pi]");
        if (eta0 < -pi - slack || eta0 > pi + slack)
            throw validation_error("packet: eta0 must lie inside [-pi, pi]");
    }
};

namespace detail {

// Half-open membership in [lo, hi) with a tolerance well below one bin.
inline bool in_band(double xi, double lo, double hi, double bin) {
    const double eps = 1e-9 * bin;
    return xi >= lo - eps && xi < hi - eps;
}

}  // namespace detail

inline SpectralField make_packet(const PacketSpec& spec, const Grid& grid) {
    spec.validate();
    const double h = grid.h();
    const double lo = spec.eta1 / h;
    const double hi = spec.eta2 / h;
    const double center = spec.eta0 / h;
    auto out = SpectralField::zeros(grid);
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const double xi = grid.wavenumber(m);
        if (detail::in_band(xi, lo, hi, grid.wavenumber_spacing()))
            out[m] = gaussian_profile(spec.gamma, xi - center);
    }
    return out;
}

/// The two special data: the split pick at the zone edge, or a full-band packet at eta0.
struct SpecialDatum {
    enum class Kind { pi_split, centered };
    Kind kind = Kind::centered;
    double eta0 = 0.0;

    static SpecialDatum pi_split() { return {Kind::pi_split, std::numbers::pi}; }
    static SpecialDatum centered(double eta0) { return {Kind::centered, eta0}; }
};

inline SpectralField make_special_data(const SpecialDatum& which, double gamma, const Grid& grid) {
    constexpr double pi = std::numbers::pi;
    if (which.kind == SpecialDatum::Kind::pi_split) {
        auto left = make_packet({-pi, -pi, 0.0, gamma}, grid);
        return left + make_packet({pi, 0.0, pi, gamma}, grid);
    }
    if (!(which.eta0 > -pi && which.eta0 < pi))
        throw validation_error("special data: centered eta0 must lie in (-pi, pi)");
    return make_packet({which.eta0, -pi, pi, gamma}, grid);
}

struct ScaleRegime {
    double gamma_h23 = 0.0;   // gamma h^{2/3}, should be small
    double inv_gamma = 0.0;   // 1 / gamma, should be small
    double max_gamma_h23 = 0.2;
    double min_gamma = 2.0;
    bool in_regime = false;
};

inline ScaleRegime scale_regime_check(double h, double gamma) {
    ScaleRegime r;
    r.gamma_h23 = gamma * std::pow(h, 2.0 / 3.0);
    r.inv_gamma = 1.0 / gamma;
    r.in_regime = r.gamma_h23 <= r.max_gamma_h23 && gamma >= r.min_gamma;
    return r;
}

}  // namespace packetlab
