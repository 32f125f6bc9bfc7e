#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "packetlab/error.hpp"
#include "packetlab/grid.hpp"

namespace packetlab {

/// Fourier multiplier of linear interpolation from a 2^k-times coarser grid:
/// b_k(eta) = prod_{j=1}^{k} cos^2(2^{j-2} eta).
inline double weight(int k, double eta) {
    if (k < 0) throw validation_error("weight: k must be nonnegative");
    double b = 1.0;
    double scale = 0.5;
    for (int j = 1; j <= k; ++j, scale *= 2.0) {
        const double c = std::cos(scale * eta);
        b *= c * c;
    }
    return b;
}

enum class Projection { none, restrict, average };

inline std::string to_string(Projection p) {
    switch (p) {
        case Projection::none: return "none";
        case Projection::restrict: return "restrict";
        case Projection::average: return "average";
    }
    return "none";
}

/// Fine grid of step h paired with the coarse grid of step 2^k h over the same window.
class BigridLevel {
public:
    static BigridLevel make(const Grid& fine, int k) {
        if (k < 1) throw validation_error("bigrid: k must be >= 1, got " + std::to_string(k));
        const std::size_t ratio = std::size_t{1} << k;
        const std::size_t n = fine.size();
        // Keep at least four coarse nodes.
        if (n < 4 * ratio)
            throw validation_error("bigrid: k = " + std::to_string(k) + " needs at least " +
                                   std::to_string(4 * ratio) + " fine nodes, grid has " +
                                   std::to_string(n));
        const long r = static_cast<long>(ratio);
        if (fine.origin_index() % r != 0)
            throw validation_error("bigrid: fine origin index must be a multiple of 2^k");
        Grid coarse = Grid::with_origin(fine.h() * static_cast<double>(ratio), n / ratio,
                                        fine.origin_index() / r);
        return BigridLevel(k, fine, coarse);
    }

    int k() const noexcept { return k_; }
    long ratio() const noexcept { return 1L << k_; }
    const Grid& fine() const noexcept { return fine_; }
    const Grid& coarse() const noexcept { return coarse_; }

private:
    BigridLevel(int k, Grid fine, Grid coarse) : k_(k), fine_(fine), coarse_(coarse) {}

    int k_;
    Grid fine_;
    Grid coarse_;
};

namespace detail {

inline void require_grid(const Grid& have, const Grid& want, const char* what) {
    if (!(have == want)) throw validation_error(std::string("bigrid: ") + what + " grid mismatch");
}

inline long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace detail

/// Gamma_k: piecewise-linear interpolation from the coarse grid onto the fine grid.
inline PhysicalField extend(const BigridLevel& level, const PhysicalField& coarse) {
    detail::require_grid(coarse.grid(), level.coarse(), "coarse");
    const Grid& fine = level.fine();
    const Grid& cg = level.coarse();
    const long n = level.ratio();
    auto out = PhysicalField::zeros(fine);
    for (std::size_t i = 0; i < fine.size(); ++i) {
        const long j = fine.index(i);
        const long J = detail::floor_div(j, n);
        const long r = j - J * n;
        const double a = static_cast<double>(n - r) / static_cast<double>(n);
        const double b = static_cast<double>(r) / static_cast<double>(n);
        out[i] = a * coarse[cg.slot(J)] + b * coarse[cg.slot(J + 1)];
    }
    return out;
}

/// Lambda_k^r: subsampling at the coarse nodes.
inline PhysicalField project_restrict(const BigridLevel& level, const PhysicalField& fine) {
    detail::require_grid(fine.grid(), level.fine(), "fine");
    const Grid& cg = level.coarse();
    const Grid& fg = level.fine();
    auto out = PhysicalField::zeros(cg);
    for (std::size_t i = 0; i < cg.size(); ++i) out[i] = fine[fg.slot(cg.index(i) * level.ratio())];
    return out;
}

/// Lambda_k^a: hat-weighted average of the 2^{k+1} - 1 fine values around each coarse node.
inline PhysicalField project_average(const BigridLevel& level, const PhysicalField& fine) {
    detail::require_grid(fine.grid(), level.fine(), "fine");
    const Grid& cg = level.coarse();
    const Grid& fg = level.fine();
    const long n = level.ratio();
    const double denom = static_cast<double>(n * n);
    auto out = PhysicalField::zeros(cg);
    for (std::size_t i = 0; i < cg.size(); ++i) {
        const long base = cg.index(i) * n;
        complex acc{};
        for (long r = 0; r < n; ++r) {
            acc += (static_cast<double>(n - r) / denom) * fine[fg.slot(base + r)];
            acc += (static_cast<double>(r) / denom) * fine[fg.slot(base + r - n)];
        }
        out[i] = acc;
    }
    return out;
}

inline PhysicalField project(const BigridLevel& level, const PhysicalField& fine, Projection p) {
    switch (p) {
        case Projection::restrict: return project_restrict(level, fine);
        case Projection::average: return project_average(level, fine);
        case Projection::none: break;
    }
    throw validation_error("bigrid: projection 'none' has no coarse image");
}

/// Gamma_k composed with the chosen projection; the filtered datum fed to the fine-grid scheme.
inline PhysicalField bigrid_filter(const BigridLevel& level, const PhysicalField& fine, Projection p) {
    if (p == Projection::none) {
        detail::require_grid(fine.grid(), level.fine(), "fine");
        return fine;
    }
    return extend(level, project(level, fine, p));
}

// Fourier-side representations. Fine and coarse spectra share the bin spacing
// 2 pi / L, so the coarse zone is a contiguous block of M / 2^k fine bins
// starting at offset (M - M / 2^k) / 2, and every alias shift is a whole
// number of bins.
namespace detail {

inline std::size_t coarse_offset(const BigridLevel& level) {
    return (level.fine().size() - level.coarse().size()) / 2;
}

inline std::size_t wrap(long i, std::size_t n) {
    long r = i % static_cast<long>(n);
    if (r < 0) r += static_cast<long>(n);
    return static_cast<std::size_t>(r);
}

}  // namespace detail

/// Fine spectrum of Gamma_k f: b_k(xi h) times the periodically extended coarse spectrum.
inline SpectralField extend_spectral(const BigridLevel& level, const SpectralField& coarse) {
    detail::require_grid(coarse.grid(), level.coarse(), "coarse");
    const Grid& fg = level.fine();
    const std::size_t mc = level.coarse().size();
    const long offset = static_cast<long>(detail::coarse_offset(level));
    auto out = SpectralField::zeros(fg);
    for (std::size_t m = 0; m < fg.size(); ++m) {
        const std::size_t mm = detail::wrap(static_cast<long>(m) - offset, mc);
        out[m] = weight(level.k(), fg.normalized_wavenumber(m)) * coarse[mm];
    }
    return out;
}

namespace detail {

inline SpectralField alias_sum(const BigridLevel& level, const SpectralField& fine, bool weighted) {
    require_grid(fine.grid(), level.fine(), "fine");
    const Grid& fg = level.fine();
    const Grid& cg = level.coarse();
    const std::size_t mc = cg.size();
    const long offset = static_cast<long>(coarse_offset(level));
    const long half = level.ratio() / 2;
    auto out = SpectralField::zeros(cg);
    for (std::size_t m = 0; m < mc; ++m) {
        complex acc{};
        for (long j = -half; j < half; ++j) {
            const long shift = j * static_cast<long>(mc);
            const std::size_t fm = wrap(offset + static_cast<long>(m) + shift, fg.size());
            double w = 1.0;
            if (weighted) {
                const double eta = cg.wavenumber(m) * fg.h() +
                                   2.0 * std::numbers::pi * static_cast<double>(j) /
                                       static_cast<double>(level.ratio());
                w = weight(level.k(), eta);
            }
            acc += w * fine[fm];
        }
        out[m] = acc;
    }
    return out;
}

}  // namespace detail

/// Coarse spectrum of Lambda_k^r f as the alias sum of the fine spectrum.
inline SpectralField project_restrict_spectral(const BigridLevel& level, const SpectralField& fine) {
    return detail::alias_sum(level, fine, false);
}

/// Coarse spectrum of Lambda_k^a f as the b_k-weighted alias sum.
inline SpectralField project_average_spectral(const BigridLevel& level, const SpectralField& fine) {
    return detail::alias_sum(level, fine, true);
}

}  // namespace packetlab
