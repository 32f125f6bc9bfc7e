#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <future>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "packetlab/evolution.hpp"
#include "packetlab/grid.hpp"

namespace packetlab {

struct PacketMetrics {
    double mass = 0.0;       // h sum |u_j|^2
    double centroid = 0.0;   // mass-weighted mean position
    double width = 0.0;      // mass-weighted standard deviation about the centroid
    double peak_amp = 0.0;   // max |u_j|
    double peak_pos = 0.0;   // node of the maximum
};

/**
 * Moments of |u|^2 on the periodic window.
 *
 * The moments are taken over the period centered at the peak node, so a packet
 * that has wrapped across the window edge is measured as one piece. The
 * centroid is reported in window coordinates.
 */
inline PacketMetrics packet_metrics(const PhysicalField& u) {
    const Grid& g = u.grid();
    const double h = g.h();
    const double L = g.length();

    std::size_t ipeak = 0;
    double peak = -1.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = std::abs(u[i]);
        mass += a * a;
        if (a > peak) {
            peak = a;
            ipeak = i;
        }
    }
    mass *= h;
    if (!(mass > 0.0)) throw validation_error("packet_metrics: field is identically zero");

    const double xp = g.node(ipeak);
    double first = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double d = std::remainder(g.node(i) - xp, L);
        if (d >= 0.5 * L) d -= L;
        first += d * std::norm(u[i]);
    }
    const double shift = first * h / mass;
    double second = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double d = std::remainder(g.node(i) - xp, L);
        if (d >= 0.5 * L) d -= L;
        second += (d - shift) * (d - shift) * std::norm(u[i]);
    }

    PacketMetrics m;
    m.mass = mass;
    m.peak_amp = peak;
    m.peak_pos = xp;
    const double x0 = g.node(0);
    m.centroid = x0 + std::fmod(std::fmod(xp + shift - x0, L) + L, L);
    m.width = std::sqrt(std::max(0.0, second * h / mass));
    return m;
}

/// Signed displacement between two positions on the periodic window, in [-L/2, L/2).
inline double periodic_displacement(double from, double to, double length) {
    double d = std::remainder(to - from, length);
    if (d >= 0.5 * length) d -= length;
    return d;
}

struct BandComponent {
    double pick;          // normalized wavenumber at the band center
    SpectralField spectrum;
    PhysicalField field;
};

namespace detail {

// Signed normalized distance eta - pick folded into [-pi, pi).
inline double folded_offset(double eta, double pick) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double d = std::fmod(eta - pick + std::numbers::pi, two_pi);
    if (d < 0.0) d += two_pi;
    return d - std::numbers::pi;
}

}  // namespace detail

/**
 * Splits a spectrum into the half-open bands [pick - half_width, pick + half_width)
 * (normalized units, modulo 2 pi) and synthesizes each piece.
 */
inline std::vector<BandComponent> band_decompose(const SpectralField& F, std::span<const double> picks,
                                                 double half_width) {
    if (picks.empty()) return {};
    if (!(half_width > 0.0) || half_width > std::numbers::pi)
        throw validation_error("band_decompose: half width must lie in (0, pi]");
    for (std::size_t a = 0; a < picks.size(); ++a)
        for (std::size_t b = a + 1; b < picks.size(); ++b) {
            const double gap = std::abs(detail::folded_offset(picks[b], picks[a]));
            if (gap < 2.0 * half_width - 1e-12)
                throw validation_error("band_decompose: bands around picks " +
                                       std::to_string(picks[a]) + " and " +
                                       std::to_string(picks[b]) + " overlap");
        }

    const Grid& g = F.grid();
    const double tol = 1e-9 * g.wavenumber_spacing() * g.h();
    std::vector<BandComponent> out;
    out.reserve(picks.size());
    for (double pick : picks) {
        auto S = SpectralField::zeros(g);
        for (std::size_t m = 0; m < g.size(); ++m) {
            const double d = detail::folded_offset(g.normalized_wavenumber(m), pick);
            if (d >= -half_width - tol && d < half_width - tol) S[m] = F[m];
        }
        auto f = isdft(S);
        out.push_back({pick, std::move(S), std::move(f)});
    }
    return out;
}

/// Per-pick metrics; with two or more picks this is the only measurement offered.
inline std::vector<std::pair<double, PacketMetrics>> measure_packets(const SpectralField& F,
                                                                     std::span<const double> picks,
                                                                     double half_width) {
    std::vector<std::pair<double, PacketMetrics>> out;
    for (const auto& c : band_decompose(F, picks, half_width))
        out.emplace_back(c.pick, packet_metrics(c.field));
    return out;
}

/// Admissible time exponent: 2/q = 1/2 - 1/p, with q = infinity at p = 2.
inline double strichartz_time_exponent(double p) {
    if (!(p >= 2.0)) throw validation_error("strichartz: p must satisfy 2 <= p <= inf");
    if (std::isinf(p)) return 4.0;
    if (p == 2.0) return std::numeric_limits<double>::infinity();
    return 4.0 * p / (p - 2.0);
}

inline double lp_norm(const PhysicalField& u, double p) {
    if (std::isinf(p)) return u.max_abs();
    double s = 0.0;
    for (const auto& v : u.values()) s += std::pow(std::abs(v), p);
    return std::pow(u.grid().h() * s, 1.0 / p);
}

/// Uniform samples t_n = n T / N, n = 0..N-1, weighted by the rectangle rule.
struct TimeWindow {
    double T = 1.0;
    int n_samples = 64;

    double step() const { return T / static_cast<double>(n_samples); }
    double time(int n) const { return static_cast<double>(n) * step(); }
    void validate() const {
        if (!(T > 0.0)) throw validation_error("time window: T must be positive");
        if (n_samples < 16) throw validation_error("time window: n_samples must be >= 16");
    }
};

struct NormReport {
    double p = 2.0;
    double q = std::numeric_limits<double>::infinity();
    double T = 0.0;
    int n_samples = 0;
    double value = 0.0;             // mixed L^q_t l^p_x norm
    double ratio = 0.0;             // value / ||phi||
    std::vector<double> radii;
    double smoothing_value = 0.0;   // sup over radii of the local smoothing functional
    double smoothing_ratio = 0.0;   // smoothing_value / ||phi||^2
    double h = 0.0;
    double gamma = 0.0;
    std::string scenario_id;
};

namespace detail {

// Evaluates fn(0..n-1) on a few threads; results land by index so any
// reduction over them is independent of scheduling.
template <class Fn>
auto parallel_samples(int n, Fn fn) -> std::vector<decltype(fn(0))> {
    std::vector<decltype(fn(0))> out(static_cast<std::size_t>(n));
    const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(n, 1));
    std::vector<std::future<void>> jobs;
    for (int w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (int i = w; i < n; i += workers) out[static_cast<std::size_t>(i)] = fn(i);
        }));
    for (auto& j : jobs) j.get();
    return out;
}

}  // namespace detail

template <DispersionRelation S>
NormReport strichartz_norm(const SpectralField& F0, const S& symbol, double p, const TimeWindow& window,
                           PhaseSign sign = PhaseSign::plus) {
    window.validate();
    NormReport r;
    r.p = p;
    r.q = strichartz_time_exponent(p);
    r.T = window.T;
    r.n_samples = window.n_samples;
    r.h = F0.grid().h();

    const auto norms = detail::parallel_samples(
        window.n_samples, [&](int n) { return lp_norm(snapshot(F0, symbol, window.time(n), sign), p); });
    double acc = 0.0;
    for (double norm : norms) {
        if (std::isinf(r.q))
            acc = std::max(acc, norm);
        else
            acc += window.step() * std::pow(norm, r.q);
    }
    r.value = std::isinf(r.q) ? acc : std::pow(acc, 1.0 / r.q);
    const double n0 = l2_norm(F0);
    r.ratio = n0 > 0.0 ? r.value / n0 : 0.0;
    return r;
}

/// Default radius scan {L/16, L/8, L/4}.
inline std::vector<double> default_radii(const Grid& g) {
    const double L = g.length();
    return {L / 16.0, L / 8.0, L / 4.0};
}

/**
 * max over R of (1/R) int_0^T h sum_{|x_j| <= R} |d_h^{1/2} u(x_j, t)|^2 dt,
 * with the half derivative applied as the multiplier p_h^{1/4}.
 */
template <DispersionRelation S>
NormReport local_smoothing(const SpectralField& F0, const S& symbol, std::span<const double> radii,
                           const TimeWindow& window, PhaseSign sign = PhaseSign::plus) {
    window.validate();
    const Grid& g = F0.grid();
    if (radii.empty()) throw validation_error("local_smoothing: radius set is empty");
    for (double R : radii)
        if (!(R > 0.0) || R > 0.5 * g.length() + 1e-12)
            throw validation_error("local_smoothing: radii must lie in (0, L/2]");

    NormReport r;
    r.T = window.T;
    r.n_samples = window.n_samples;
    r.radii.assign(radii.begin(), radii.end());
    r.h = g.h();

    const auto D0 = fractional_derivative(F0, 0.5);
    const auto sums = detail::parallel_samples(window.n_samples, [&](int n) {
        const auto d = snapshot(D0, symbol, window.time(n), sign);
        std::vector<double> s(radii.size(), 0.0);
        for (std::size_t k = 0; k < radii.size(); ++k)
            for (std::size_t i = 0; i < g.size(); ++i)
                if (std::abs(g.node(i)) <= radii[k]) s[k] += std::norm(d[i]);
        return s;
    });
    std::vector<double> acc(radii.size(), 0.0);
    for (const auto& s : sums)
        for (std::size_t k = 0; k < radii.size(); ++k) acc[k] += window.step() * g.h() * s[k];
    double best = 0.0;
    for (std::size_t k = 0; k < radii.size(); ++k) best = std::max(best, acc[k] / radii[k]);
    r.smoothing_value = best;
    const double n0 = l2_norm(F0);
    r.smoothing_ratio = n0 > 0.0 ? best / (n0 * n0) : 0.0;
    return r;
}

struct RemainderSample {
    double t;
    double ratio;           // ||v||^2 / ||w||
    double relative_error;  // ||v|| / ||w||
};

/// ||v||^2 / ||w|| along the given times for the semi-discrete evolution split about eta0.
inline std::vector<RemainderSample> remainder_trace(const SpectralField& F0, double eta0,
                                                    std::span<const double> times,
                                                    PhaseSign sign = PhaseSign::plus) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0) throw validation_error("remainder_trace: times must be nonnegative");
        if (i > 0 && times[i] < times[i - 1])
            throw validation_error("remainder_trace: times must be sorted");
    }
    std::vector<RemainderSample> out;
    out.reserve(times.size());
    for (double t : times) {
        const auto split = remainder_split(F0, eta0, t, sign);
        const double w = l2_norm(split.w);
        const double v = l2_norm(split.v);
        out.push_back({t, w > 0.0 ? v * v / w : 0.0, w > 0.0 ? v / w : 0.0});
    }
    return out;
}

}  // namespace packetlab
