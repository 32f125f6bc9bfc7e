#pragma once

#include <cmath>
#include <string>

#include "packetlab/dispersion.hpp"
#include "packetlab/grid.hpp"

namespace packetlab {

/// Sign of the phase in exp(sign i t p(xi)). The default follows the
/// representation formula used for the figures; minus is its complex conjugate.
enum class PhaseSign : int { plus = 1, minus = -1 };

inline std::string to_string(PhaseSign s) { return s == PhaseSign::plus ? "+" : "-"; }

/// Exact evolution: multiplies every bin by exp(sign i t s(xi_m)).
template <DispersionRelation S>
SpectralField propagate(const SpectralField& F, const S& symbol, double t,
                        PhaseSign sign = PhaseSign::plus) {
    const Grid& g = F.grid();
    const double st = static_cast<double>(static_cast<int>(sign)) * t;
    auto out = F;
    for (std::size_t m = 0; m < g.size(); ++m)
        out[m] *= std::polar(1.0, st * symbol.value(g.wavenumber(m)));
    return out;
}

template <DispersionRelation S>
PhysicalField snapshot(const SpectralField& F0, const S& symbol, double t,
                       PhaseSign sign = PhaseSign::plus) {
    return isdft(propagate(F0, symbol, t, sign));
}

/// Discrete fractional derivative: multiplier p_h(xi)^{order/2} with h taken from the grid.
inline SpectralField fractional_derivative(const SpectralField& F, double order) {
    if (!(order >= 0.0)) throw validation_error("fractional_derivative: order must be >= 0");
    if (order == 0.0) return F;
    const Grid& g = F.grid();
    const Symbol p = Symbol::semidiscrete(g.h());
    auto out = F;
    for (std::size_t m = 0; m < g.size(); ++m)
        out[m] *= std::pow(p.value(g.wavenumber(m)), 0.5 * order);
    return out;
}

struct RemainderSplit {
    PhysicalField w;        // evolution under the full symbol
    PhysicalField u_tilde;  // evolution under its quadratic Taylor model
    PhysicalField v;        // w - u_tilde
};

/// Splits the evolution under `symbol` into the quadratic-model part about eta0 and the remainder.
template <DispersionRelation S>
RemainderSplit remainder_split(const SpectralField& F0, const S& symbol, const QuadraticModel& model,
                               double t, PhaseSign sign = PhaseSign::plus) {
    auto W = propagate(F0, symbol, t, sign);
    auto U = propagate(F0, model, t, sign);
    auto V = W - U;
    return {isdft(W), isdft(U), isdft(V)};
}

/// Semi-discrete evolution split about eta0 on the grid of F0.
inline RemainderSplit remainder_split(const SpectralField& F0, double eta0, double t,
                                      PhaseSign sign = PhaseSign::plus) {
    const Symbol p = Symbol::semidiscrete(F0.grid().h());
    return remainder_split(F0, p, taylor_split(p, eta0), t, sign);
}

}  // namespace packetlab
