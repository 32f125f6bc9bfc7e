#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "packetlab/detail/fft.hpp"
#include "packetlab/error.hpp"

namespace packetlab {

using complex = std::complex<double>;

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/**
 * Uniform periodic window of M nodes x_j = j h, j in [origin, origin + M).
 *
 * The spectral view carries the M wavenumbers xi_m = -pi/h + m (2 pi / L),
 * m = 0..M-1, which sample the half-open zone [-pi/h, pi/h).
 */
class Grid {
public:
    static Grid make(double h, std::size_t size, bool centered = true) {
        if (!(h > 0.0) || !std::isfinite(h))
            throw validation_error("grid: mesh step must be positive and finite, got " +
                                   std::to_string(h));
        if (size < 2 || !is_power_of_two(size))
            throw validation_error("grid: node count must be a power of two >= 2, got " +
                                   std::to_string(size));
        const long origin = centered ? -static_cast<long>(size / 2) : 0L;
        return Grid(h, size, origin);
    }

    static Grid with_origin(double h, std::size_t size, long origin) {
        Grid g = make(h, size, false);
        g.origin_ = origin;
        return g;
    }

    double h() const noexcept { return h_; }
    std::size_t size() const noexcept { return size_; }
    long origin_index() const noexcept { return origin_; }
    double length() const noexcept { return static_cast<double>(size_) * h_; }
    double wavenumber_spacing() const noexcept { return 2.0 * std::numbers::pi / length(); }

    long index(std::size_t n) const noexcept { return origin_ + static_cast<long>(n); }
    double node(std::size_t n) const noexcept { return static_cast<double>(index(n)) * h_; }
    double wavenumber(std::size_t m) const noexcept {
        return -std::numbers::pi / h_ + static_cast<double>(m) * wavenumber_spacing();
    }
    /// Wavenumber in normalized units eta = xi h, lying in [-pi, pi).
    double normalized_wavenumber(std::size_t m) const noexcept { return wavenumber(m) * h_; }

    std::vector<long> indices() const {
        std::vector<long> out(size_);
        for (std::size_t n = 0; n < size_; ++n) out[n] = index(n);
        return out;
    }
    std::vector<double> nodes() const {
        std::vector<double> out(size_);
        for (std::size_t n = 0; n < size_; ++n) out[n] = node(n);
        return out;
    }
    std::vector<double> wavenumbers() const {
        std::vector<double> out(size_);
        for (std::size_t m = 0; m < size_; ++m) out[m] = wavenumber(m);
        return out;
    }

    /// Array slot of lattice index j, wrapping periodically.
    std::size_t slot(long j) const noexcept {
        const long n = static_cast<long>(size_);
        long r = (j - origin_) % n;
        if (r < 0) r += n;
        return static_cast<std::size_t>(r);
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    Grid(double h, std::size_t size, long origin) : h_(h), size_(size), origin_(origin) {}

    double h_;
    std::size_t size_;
    long origin_;
};

inline Grid make_grid(double h, std::size_t size, bool centered = true) {
    return Grid::make(h, size, centered);
}

struct physical_tag {};
struct spectral_tag {};

/// Complex samples tied to a grid: node values (physical) or wavenumber values (spectral).
template <class Tag>
class BasicField {
public:
    BasicField(Grid grid, std::vector<complex> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw validation_error("field: " + std::to_string(values_.size()) +
                                   " samples for a grid of " + std::to_string(grid_.size()));
        for (const auto& v : values_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw validation_error("field: non-finite sample");
    }

    static BasicField zeros(Grid grid) {
        return BasicField(grid, std::vector<complex>(grid.size()));
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const complex> values() const& noexcept { return values_; }
    std::span<complex> values() & noexcept { return values_; }
    // a temporary hands its storage over, so range-for over f(x).values() stays valid
    std::vector<complex> values() && noexcept { return std::move(values_); }
    const complex& operator[](std::size_t i) const noexcept { return values_[i]; }
    complex& operator[](std::size_t i) noexcept { return values_[i]; }

    BasicField& operator+=(const BasicField& other) {
        require_same_grid(other);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
        return *this;
    }
    BasicField& operator-=(const BasicField& other) {
        require_same_grid(other);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
        return *this;
    }
    BasicField& operator*=(complex a) {
        for (auto& v : values_) v *= a;
        return *this;
    }
    friend BasicField operator+(BasicField a, const BasicField& b) { return a += b; }
    friend BasicField operator-(BasicField a, const BasicField& b) { return a -= b; }
    friend BasicField operator*(complex a, BasicField f) { return f *= a; }

    double max_abs() const noexcept {
        double m = 0.0;
        for (const auto& v : values_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    void require_same_grid(const BasicField& other) const {
        if (!(grid_ == other.grid_)) throw validation_error("field: grid mismatch");
    }

    Grid grid_;
    std::vector<complex> values_;
};

using PhysicalField = BasicField<physical_tag>;
using SpectralField = BasicField<spectral_tag>;

/// Discrete l2(hZ) norm: (h sum |f_j|^2)^{1/2}.
inline double l2_norm(const PhysicalField& f) {
    double s = 0.0;
    for (const auto& v : f.values()) s += std::norm(v);
    return std::sqrt(f.grid().h() * s);
}

/// Norm of the synthesized field computed on the spectral side (Parseval).
inline double l2_norm(const SpectralField& F) {
    double s = 0.0;
    for (const auto& v : F.values()) s += std::norm(v);
    return std::sqrt(s / F.grid().length());
}

namespace detail {

// Phase relating the FFT of (-1)^n f_{origin+n} to the transform on the shifted zone:
// exp(-i xi_m x_origin) = (-1)^origin exp(-2 pi i m origin / M).
inline complex origin_phase(const Grid& g, std::size_t m) {
    // Reduce the integer phase exactly before going to floating point.
    const long o = g.origin_index();
    const long n = static_cast<long>(g.size());
    long mo = (static_cast<long>(m) * o) % n;
    if (mo < 0) mo += n;
    const double parity = (o % 2 == 0) ? 0.0 : std::numbers::pi;
    const double angle = parity - 2.0 * std::numbers::pi * static_cast<double>(mo) /
                                      static_cast<double>(n);
    return std::polar(1.0, angle);
}

inline double alternating_sign(std::size_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace detail

/// Semi-discrete Fourier transform: F(xi_m) = h sum_j f_j exp(-i xi_m x_j).
inline SpectralField sdft(const PhysicalField& f) {
    const Grid& g = f.grid();
    const std::size_t n = g.size();
    std::vector<complex> buf(n), out(n);
    for (std::size_t k = 0; k < n; ++k) buf[k] = detail::alternating_sign(k) * f[k];
    detail::dft(buf, out, FFTW_FORWARD);
    for (std::size_t m = 0; m < n; ++m) out[m] *= g.h() * detail::origin_phase(g, m);
    return SpectralField(g, std::move(out));
}

/// Inverse transform: f_j = (1 / 2 pi) (2 pi / L) sum_m F(xi_m) exp(i xi_m x_j).
inline PhysicalField isdft(const SpectralField& F) {
    const Grid& g = F.grid();
    const std::size_t n = g.size();
    std::vector<complex> buf(n), out(n);
    for (std::size_t m = 0; m < n; ++m) buf[m] = F[m] * std::conj(detail::origin_phase(g, m));
    detail::dft(buf, out, FFTW_BACKWARD);
    const double scale = 1.0 / g.length();
    for (std::size_t k = 0; k < n; ++k) out[k] *= scale * detail::alternating_sign(k);
    return PhysicalField(g, std::move(out));
}

}  // namespace packetlab
