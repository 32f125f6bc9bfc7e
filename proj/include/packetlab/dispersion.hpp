#pragma once

#include <cmath>
#include <concepts>
#include <numbers>
#include <string>
#include <vector>

#include "packetlab/error.hpp"

namespace packetlab {

/// Anything that can be evaluated as a dispersion relation at a physical wavenumber.
template <class S>
concept DispersionRelation = requires(const S& s, double xi) {
    { s.value(xi) } -> std::convertible_to<double>;
};

enum class SymbolKind { continuous, semidiscrete };

inline std::string to_string(SymbolKind k) {
    return k == SymbolKind::continuous ? "continuous" : "semidiscrete";
}

/**
 * Fourier symbol of the (discrete) Laplacian.
 *
 * continuous:   p(xi)   = xi^2
 * semidiscrete: p_h(xi) = 4 h^-2 sin^2(xi h / 2)
 *
 * The first and second derivatives are the group velocity and group
 * acceleration. The normalized form works in eta = xi h with h = 1.
 */
class Symbol {
public:
    static Symbol continuous(double h = 1.0) { return Symbol(SymbolKind::continuous, h); }
    static Symbol semidiscrete(double h) { return Symbol(SymbolKind::semidiscrete, h); }

    SymbolKind kind() const noexcept { return kind_; }
    double h() const noexcept { return h_; }

    double value(double xi) const noexcept {
        if (kind_ == SymbolKind::continuous) return xi * xi;
        const double s = std::sin(0.5 * xi * h_);
        return 4.0 * s * s / (h_ * h_);
    }
    double first_derivative(double xi) const noexcept {
        if (kind_ == SymbolKind::continuous) return 2.0 * xi;
        return 2.0 * std::sin(xi * h_) / h_;
    }
    double second_derivative(double xi) const noexcept {
        if (kind_ == SymbolKind::continuous) return 2.0;
        return 2.0 * std::cos(xi * h_);
    }

    // Normalized symbol q(eta) = h^2 p(eta / h), independent of h.
    double normalized_value(double eta) const noexcept {
        if (kind_ == SymbolKind::continuous) return eta * eta;
        const double s = std::sin(0.5 * eta);
        return 4.0 * s * s;
    }
    double normalized_first_derivative(double eta) const noexcept {
        return kind_ == SymbolKind::continuous ? 2.0 * eta : 2.0 * std::sin(eta);
    }
    double normalized_second_derivative(double eta) const noexcept {
        return kind_ == SymbolKind::continuous ? 2.0 : 2.0 * std::cos(eta);
    }

private:
    Symbol(SymbolKind kind, double h) : kind_(kind), h_(h) {
        if (!(h > 0.0) || !std::isfinite(h))
            throw validation_error("symbol: mesh step must be positive");
    }

    SymbolKind kind_;
    double h_;
};

enum class Derivative { first, second };

struct SymbolZero {
    double wavenumber;
    Derivative derivative;
};

/// Wavenumbers in the closed zone [-pi/h, pi/h] where the group velocity or acceleration vanishes.
inline std::vector<SymbolZero> pathology_report(const Symbol& s) {
    if (s.kind() == SymbolKind::continuous) return {{0.0, Derivative::first}};
    const double edge = std::numbers::pi / s.h();
    return {
        {-edge, Derivative::first},
        {0.0, Derivative::first},
        {edge, Derivative::first},
        {-0.5 * edge, Derivative::second},
        {0.5 * edge, Derivative::second},
    };
}

/**
 * Second-order Taylor model of a symbol about eta0, stored in normalized units:
 *
 *   q(eta) = c0 + c1 (eta - eta0) + c2 / 2 (eta - eta0)^2
 *
 * and evaluated at physical wavenumbers through q_h(xi) = h^-2 q(xi h).
 */
class QuadraticModel {
public:
    QuadraticModel(Symbol source, double eta0)
        : source_(source),
          eta0_(eta0),
          c0_(source.normalized_value(eta0)),
          c1_(source.normalized_first_derivative(eta0)),
          c2_(source.normalized_second_derivative(eta0)) {}

    double eta0() const noexcept { return eta0_; }
    double c0() const noexcept { return c0_; }
    double c1() const noexcept { return c1_; }
    double c2() const noexcept { return c2_; }
    double h() const noexcept { return source_.h(); }
    const Symbol& source() const noexcept { return source_; }

    double normalized(double eta) const noexcept {
        const double d = eta - eta0_;
        return c0_ + c1_ * d + 0.5 * c2_ * d * d;
    }
    double value(double xi) const noexcept {
        const double h = source_.h();
        return normalized(xi * h) / (h * h);
    }
    /// r(eta) = q_source(eta) - q(eta).
    double remainder(double eta) const noexcept {
        return source_.normalized_value(eta) - normalized(eta);
    }

private:
    Symbol source_;
    double eta0_;
    double c0_, c1_, c2_;
};

inline QuadraticModel taylor_split(const Symbol& s, double eta0) {
    if (!(eta0 > -std::numbers::pi - 1e-12 && eta0 <= std::numbers::pi + 1e-12))
        throw validation_error("taylor_split: eta0 must lie in (-pi, pi]");
    return QuadraticModel(s, eta0);
}

}  // namespace packetlab
