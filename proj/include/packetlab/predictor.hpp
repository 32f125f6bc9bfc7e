#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "packetlab/bigrid.hpp"
#include "packetlab/error.hpp"

namespace packetlab {

/// Tolerance (normalized units) for landing exactly on a fold boundary.
inline constexpr double fold_tolerance = 1e-12;

/// Folds a normalized wavenumber into (-pi, pi].
inline double fold_wavenumber(double eta) {
    constexpr double pi = std::numbers::pi;
    double r = std::fmod(pi - eta, 2.0 * pi);
    if (r < 0.0) r += 2.0 * pi;
    return pi - r;
}

enum class CaseKind { unfiltered, A, B_i, B_ii, C };

inline std::string to_string(CaseKind c) {
    switch (c) {
        case CaseKind::unfiltered: return "unfiltered";
        case CaseKind::A: return "A";
        case CaseKind::B_i: return "B_i";
        case CaseKind::B_ii: return "B_ii";
        case CaseKind::C: return "C";
    }
    return "unfiltered";
}

/**
 * Classification of a bigrid datum by its carrier eta0.
 *
 * `eta0_star` is eta0 folded by multiples of 2 pi / 2^k into [-pi/2^k, pi/2^k];
 * `l_star` is the fold index (case C: eta0 = (2 l* + 1) pi / 2^k); `s` is
 * (1 + sign(eta0*)) / 2 and only meaningful in case B_ii. Averaged data carry
 * the label of the corresponding restriction case with `averaged` set.
 */
struct CaseLabel {
    CaseKind kind = CaseKind::unfiltered;
    bool averaged = false;
    int k = 0;
    double eta0 = 0.0;
    double eta0_star = 0.0;
    int l_star = 0;
    int s = 0;

    std::string name() const {
        const std::string base = to_string(kind);
        return averaged ? "D(" + base + ")" : base;
    }
};

inline CaseLabel classify(double eta0, int k, Projection projection) {
    constexpr double pi = std::numbers::pi;
    if (!(eta0 > -pi - fold_tolerance && eta0 <= pi + fold_tolerance))
        throw validation_error("classify: eta0 must lie in (-pi, pi]");
    if (k < 0) throw validation_error("classify: k must be >= 0");

    CaseLabel label;
    label.k = k;
    label.eta0 = eta0;
    label.eta0_star = eta0;
    if (k == 0 || projection == Projection::none) return label;

    label.averaged = projection == Projection::average;
    const double n = std::ldexp(1.0, k);
    const double half_cell = pi / n;

    const long l = std::lround(eta0 * n / (2.0 * pi));
    const double star = eta0 - 2.0 * pi * static_cast<double>(l) / n;
    label.l_star = static_cast<int>(l);
    label.eta0_star = star;

    if (std::abs(std::abs(star) - half_cell) < fold_tolerance) {
        label.kind = CaseKind::C;
        long lc = std::lround((eta0 * n / pi - 1.0) / 2.0);
        const long half = static_cast<long>(n) / 2;
        if (lc >= half) lc -= static_cast<long>(n);
        if (lc < -half) lc += static_cast<long>(n);
        label.l_star = static_cast<int>(lc);
        label.eta0_star = half_cell;
    } else if (std::abs(star) < fold_tolerance) {
        label.kind = std::abs(eta0 - pi) < fold_tolerance ? CaseKind::A : CaseKind::B_i;
        label.eta0_star = 0.0;
    } else {
        label.kind = CaseKind::B_ii;
        label.s = star > 0.0 ? 1 : 0;
    }
    return label;
}

/// A priori description of one wave packet of a (possibly filtered) datum.
struct PacketPrediction {
    int alias_index = 0;          // l in the case's alias enumeration
    double pick_eta = 0.0;        // normalized wavenumber of the spectral pick, (-pi, pi]
    double velocity = 0.0;        // dx/dt = -q'(pick) / h
    double amplitude_factor = 1;  // relative to the unfiltered packet amplitude
    double gamma_eff = 1.0;       // Fourier concentration used by the width law
    double q2 = 0.0;              // q''(pick), normalized units
    double decay_constant = 1.0;  // 1, or 1/2 for a packet cut at its own center

    bool surviving(double threshold = 1e-3) const { return amplitude_factor > threshold; }
};

struct Prediction {
    CaseLabel label;
    std::vector<PacketPrediction> packets;
    double h = 0.0;
};

inline Prediction predict_packets(double eta0, int k, Projection projection, double gamma, double h,
                                  double band_lo = -std::numbers::pi,
                                  double band_hi = std::numbers::pi) {
    constexpr double pi = std::numbers::pi;
    if (!(gamma > 0.0) || !(h > 0.0)) throw validation_error("predict: gamma and h must be positive");

    Prediction out;
    out.h = h;
    out.label = classify(eta0, k, projection);
    const CaseLabel& lab = out.label;
    const double c = (std::abs(eta0 - band_lo) < fold_tolerance || std::abs(eta0 - band_hi) < fold_tolerance)
                         ? 0.5
                         : 1.0;

    auto make = [&](int index, double pick, double factor) {
        PacketPrediction p;
        p.alias_index = index;
        p.pick_eta = fold_wavenumber(pick);
        p.velocity = -2.0 * std::sin(p.pick_eta) / h;
        p.amplitude_factor = factor;
        p.gamma_eff = gamma;
        p.q2 = 2.0 * std::cos(p.pick_eta);
        p.decay_constant = c;
        return p;
    };

    if (lab.kind == CaseKind::unfiltered) {
        out.packets.push_back(make(0, eta0, 1.0));
        return out;
    }

    const int n = 1 << k;
    const int half = n / 2;
    int lo = 0, hi = 0;
    std::vector<std::pair<int, double>> picks;
    switch (lab.kind) {
        case CaseKind::A:
        case CaseKind::B_i:
            lo = -half + 1;
            hi = half;
            for (int l = lo; l <= hi; ++l) picks.emplace_back(l, 2.0 * pi * l / n);
            break;
        case CaseKind::B_ii:
            lo = -half + 1 - lab.s;
            hi = half - lab.s;
            for (int l = lo; l <= hi; ++l) picks.emplace_back(l, lab.eta0_star + 2.0 * pi * l / n);
            break;
        case CaseKind::C:
            // Indexed as in v_l = 2 sin((2l - 1) pi / 2^k) / h.
            for (int l = -half + 1; l <= half; ++l) picks.emplace_back(l, (2.0 * l - 1.0) * pi / n);
            break;
        case CaseKind::unfiltered: break;
    }

    const double carrier = lab.averaged ? weight(k, eta0) : 1.0;
    for (const auto& [l, pick] : picks)
        out.packets.push_back(make(l, pick, carrier * weight(k, fold_wavenumber(pick))));
    return out;
}

struct Trajectory {
    double centroid;
    double width;
    double amplitude;
};

/// Quadratic-dispersion laws: x* + v t, (1/gamma + t^2 gamma q''^2)^{1/2}, c b (1 + t^2 gamma^2 q''^2)^{-1/4}.
inline Trajectory predict_trajectory(const PacketPrediction& p, double t, double x_star,
                                     double base_amplitude = 1.0) {
    const double g = p.gamma_eff;
    const double spread = t * t * g * g * p.q2 * p.q2;
    Trajectory tr;
    tr.centroid = x_star + p.velocity * t;
    tr.width = std::sqrt(1.0 / g + t * t * g * p.q2 * p.q2);
    tr.amplitude = p.decay_constant * p.amplitude_factor * base_amplitude * std::pow(1.0 + spread, -0.25);
    return tr;
}

/// Relations among the predicted velocities v_l = 2 sin(pick_l) / h of one case.
struct VelocityStructure {
    std::vector<std::pair<int, int>> opposite_pairs;  // v_a = -v_b
    std::vector<std::pair<int, int>> equal_pairs;     // v_a = v_b, packets that travel together
    std::vector<int> increasing_chain;                // strictly increasing v along these indices
};

inline VelocityStructure velocity_order_check(const Prediction& pred) {
    const auto& lab = pred.label;
    auto v = [&](int l) -> double {
        for (const auto& p : pred.packets)
            if (p.alias_index == l) return 2.0 * std::sin(p.pick_eta) / pred.h;
        throw std::logic_error("velocity_order_check: missing alias index " + std::to_string(l));
    };
    const double tol = 1e-9 * 2.0 / pred.h;
    auto fail = [&](const std::string& what) {
        throw std::logic_error("velocity_order_check (case " + lab.name() + ", k = " +
                               std::to_string(lab.k) + "): " + what);
    };

    VelocityStructure out;
    if (lab.kind == CaseKind::unfiltered) return out;
    const int n = 1 << lab.k;
    const int half = n / 2;

    if (lab.kind == CaseKind::A || lab.kind == CaseKind::B_i) {
        if (std::abs(v(0)) > tol) fail("the l = 0 packet must not move");
        for (int l = 1; l < half; ++l) {
            if (std::abs(v(l) + v(-l)) > tol) fail("v_l != -v_{-l}");
            out.opposite_pairs.emplace_back(l, -l);
        }
        return out;
    }

    if (lab.kind == CaseKind::B_ii) {
        const int s = lab.s;
        for (int l = 1 - s; l <= half - s; ++l) {
            if (std::abs(v(l) + v(-half + l)) > tol) fail("antisymmetric pairing violated");
            out.opposite_pairs.emplace_back(l, -half + l);
        }
        // Interleaved order 1, 2^{k-1}, 2, 2^{k-1} - 1, ... ; shifted by -s for
        // eta0* > 0 and mirrored to 2^{k-1} + 1 - a for eta0* < 0.
        int a = 1, b = half;
        bool take_low = true;
        while (a <= b) {
            const int idx = take_low ? a++ : b--;
            out.increasing_chain.push_back(s == 1 ? idx - 1 : half + 1 - idx);
            take_low = !take_low;
        }
    } else {  // C
        for (int l = 1; l <= n / 4; ++l) {
            if (std::abs(v(l) - v(half + 1 - l)) > tol) fail("equal-velocity pairing violated");
            out.equal_pairs.emplace_back(l, half + 1 - l);
        }
        for (int l = 1; l <= n / 4; ++l) out.increasing_chain.push_back(l);
    }
    for (std::size_t i = 1; i < out.increasing_chain.size(); ++i)
        if (!(v(out.increasing_chain[i - 1]) < v(out.increasing_chain[i]) - tol))
            fail("velocities are not strictly increasing along the interleaved chain");
    return out;
}

}  // namespace packetlab
