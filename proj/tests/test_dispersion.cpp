#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "packetlab/dispersion.hpp"

using namespace packetlab;
constexpr double pi = std::numbers::pi;

namespace {

double central_difference(const std::function<double(double)>& f, double x, double step) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

// Zeros of f on [a, b] located by sign changes on a fine scan, refined by bisection.
std::vector<double> bisection_zeros(const std::function<double(double)>& f, double a, double b, int cells) {
    std::vector<double> out;
    const double dx = (b - a) / cells;
    for (int i = 0; i < cells; ++i) {
        double lo = a + i * dx, hi = lo + dx;
        double flo = f(lo), fhi = f(hi);
        if (flo == 0.0) {
            out.push_back(lo);
            continue;
        }
        if (flo * fhi > 0.0) continue;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        out.push_back(0.5 * (lo + hi));
    }
    if (f(b) == 0.0) out.push_back(b);
    return out;
}

std::vector<double> zeros_of(const std::vector<SymbolZero>& z, Derivative d) {
    std::vector<double> out;
    for (const auto& s : z)
        if (s.derivative == d) out.push_back(s.wavenumber);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST(Symbol, PathologicalDerivativesVanish) {
    const auto p = Symbol::semidiscrete(1.0);
    EXPECT_NEAR(p.first_derivative(pi), 0.0, 1e-15);
    EXPECT_NEAR(p.second_derivative(pi / 2), 0.0, 1e-15);
}

TEST(Symbol, ContinuousPolynomial) {
    const auto c = Symbol::continuous();
    EXPECT_EQ(c.value(3.0), 9.0);
    EXPECT_EQ(c.first_derivative(3.0), 6.0);
    EXPECT_EQ(c.second_derivative(3.0), 2.0);
}

TEST(Symbol, RejectsNonPositiveStep) {
    EXPECT_THROW(Symbol::semidiscrete(0.0), validation_error);
    EXPECT_THROW(Symbol::semidiscrete(-0.1), validation_error);
}

TEST(Symbol, DerivativesMatchFiniteDifferencesAcrossSteps) {
    std::mt19937_64 rng(1);
    for (double h : {1.0, 0.1, 2 * pi / 256}) {
        const auto p = Symbol::semidiscrete(h);
        std::uniform_real_distribution<double> xi(-pi / h, pi / h);
        // Step 1e-5 in normalized units.
        for (int i = 0; i < 100; ++i) {
            const double x = xi(rng);
            const double step = 1e-5 / h;
            const double d1 = central_difference([&](double s) { return p.value(s); }, x, step);
            const double d2 = central_difference([&](double s) { return p.first_derivative(s); }, x, step);
            EXPECT_NEAR(p.first_derivative(x), d1, 1e-7) << "h=" << h << " xi=" << x;
            EXPECT_NEAR(p.second_derivative(x), d2, 1e-7) << "h=" << h << " xi=" << x;
        }
    }
}

TEST(Symbol, UnitStepDerivativesMatchFiniteDifferences) {
    std::mt19937_64 rng(2);
    const auto p = Symbol::semidiscrete(1.0);
    std::uniform_real_distribution<double> xi(-pi, pi);
    for (int i = 0; i < 100; ++i) {
        const double x = xi(rng);
        EXPECT_NEAR(p.first_derivative(x), central_difference([&](double s) { return p.value(s); }, x, 1e-5), 1e-7);
        EXPECT_NEAR(p.second_derivative(x),
                    central_difference([&](double s) { return p.first_derivative(s); }, x, 1e-5), 1e-7);
    }
}

TEST(Symbol, PeriodicBoundedNonnegative) {
    std::mt19937_64 rng(3);
    const double h = 0.05;
    const auto p = Symbol::semidiscrete(h);
    std::uniform_real_distribution<double> xi(-pi / h, pi / h);
    for (int i = 0; i < 200; ++i) {
        const double x = xi(rng);
        const double v = p.value(x);
        EXPECT_NEAR(p.value(x + 2 * pi / h), v, 1e-12 * 4 / (h * h));
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 4 / (h * h) * (1 + 1e-15));
    }
}

TEST(Symbol, ConsistentWithContinuousAsStepShrinks) {
    for (double h : {1e-1, 1e-2, 1e-3})
        for (double x : {0.3, 1.0, 2.5}) {
            const double err = std::abs(Symbol::semidiscrete(h).value(x) - x * x);
            EXPECT_LE(err, std::pow(x, 4) * h * h / 12.0 * (1 + 1e-6)) << "h=" << h << " xi=" << x;
        }
}

TEST(Symbol, NormalizedFormIsStepIndependent) {
    const double h = 0.37;
    const auto p = Symbol::semidiscrete(h);
    for (double eta : {-2.0, 0.4, 3.0}) {
        EXPECT_NEAR(p.normalized_value(eta), h * h * p.value(eta / h), 1e-14);
        EXPECT_NEAR(p.normalized_first_derivative(eta), h * p.first_derivative(eta / h), 1e-14);
        EXPECT_NEAR(p.normalized_second_derivative(eta), p.second_derivative(eta / h), 1e-14);
    }
}

TEST(Pathology, SemidiscreteZeroSet) {
    const auto z = pathology_report(Symbol::semidiscrete(0.1));
    const auto first = zeros_of(z, Derivative::first);
    const auto second = zeros_of(z, Derivative::second);
    ASSERT_EQ(first.size(), 3u);
    ASSERT_EQ(second.size(), 2u);
    EXPECT_NEAR(first[0], -10 * pi, 1e-12);
    EXPECT_EQ(first[1], 0.0);
    EXPECT_NEAR(first[2], 10 * pi, 1e-12);
    EXPECT_NEAR(second[0], -5 * pi, 1e-12);
    EXPECT_NEAR(second[1], 5 * pi, 1e-12);
}

TEST(Pathology, ContinuousHasOnlyTheOrigin) {
    const auto z = pathology_report(Symbol::continuous());
    ASSERT_EQ(z.size(), 1u);
    EXPECT_EQ(z[0].wavenumber, 0.0);
    EXPECT_EQ(z[0].derivative, Derivative::first);
}

TEST(Pathology, NumericalScanReproducesReport) {
    const auto p = Symbol::semidiscrete(1.0);
    const auto report = pathology_report(p);
    // The scan cells are offset so that no zero sits on a cell edge except the closed ends.
    auto first = bisection_zeros([&](double x) { return p.first_derivative(x); }, -pi, pi, 1001);
    auto second = bisection_zeros([&](double x) { return p.second_derivative(x); }, -pi, pi, 1001);
    // sin(pi) evaluates to 1.2e-16 rather than 0, so the closed ends are checked by value.
    EXPECT_LT(std::abs(p.first_derivative(-pi)), 1e-10);
    EXPECT_LT(std::abs(p.first_derivative(pi)), 1e-10);
    first.erase(std::remove_if(first.begin(), first.end(), [](double x) { return std::abs(std::abs(x) - pi) < 1e-9; }),
                first.end());
    first.push_back(-pi);
    first.push_back(pi);
    std::sort(first.begin(), first.end());
    const auto want_first = zeros_of(report, Derivative::first);
    const auto want_second = zeros_of(report, Derivative::second);
    ASSERT_EQ(first.size(), want_first.size());
    ASSERT_EQ(second.size(), want_second.size());
    for (std::size_t i = 0; i < first.size(); ++i) EXPECT_NEAR(first[i], want_first[i], 1e-10);
    for (std::size_t i = 0; i < second.size(); ++i) EXPECT_NEAR(second[i], want_second[i], 1e-10);
}

TEST(Taylor, AtOrigin) {
    const auto q = taylor_split(Symbol::semidiscrete(0.1), 0.0);
    EXPECT_EQ(q.c0(), 0.0);
    EXPECT_EQ(q.c1(), 0.0);
    EXPECT_EQ(q.c2(), 2.0);
    for (double eta : {-1.0, 0.2, 2.0}) {
        const double s = std::sin(eta / 2);
        EXPECT_NEAR(q.remainder(eta), 4 * s * s - eta * eta, 1e-15);
    }
}

TEST(Taylor, AtZoneEdgeAgainstFiniteDifferences) {
    const auto p = Symbol::semidiscrete(1.0);
    const auto q = taylor_split(p, pi);
    EXPECT_NEAR(q.c0(), 4.0, 1e-15);
    EXPECT_NEAR(q.c1(), 0.0, 1e-15);
    EXPECT_NEAR(q.c2(), -2.0, 1e-15);
    const auto f = [](double e) { const double s = std::sin(e / 2); return 4 * s * s; };
    const double step = 1e-5;
    EXPECT_NEAR(q.c1(), (f(pi + step) - f(pi - step)) / (2 * step), 1e-8);
    EXPECT_NEAR(q.c2(), (f(pi + step) - 2 * f(pi) + f(pi - step)) / (step * step), 1e-5);
}

TEST(Taylor, CoefficientsMatchClosedForms) {
    const auto p = Symbol::semidiscrete(0.2);
    for (double eta0 : {-2.5, -0.3, 0.7, 2 * pi / 3, pi}) {
        const auto q = taylor_split(p, eta0);
        EXPECT_NEAR(q.c0(), 4 * std::pow(std::sin(eta0 / 2), 2), 1e-15);
        EXPECT_NEAR(q.c1(), 2 * std::sin(eta0), 1e-15);
        EXPECT_NEAR(q.c2(), 2 * std::cos(eta0), 1e-15);
    }
}

TEST(Taylor, RemainderIsCubic) {
    const auto p = Symbol::semidiscrete(1.0);
    for (double eta0 : {0.3, pi / 2, 2 * pi / 3}) {
        const auto q = taylor_split(p, eta0);
        // |r| <= max|q'''| / 6 |d|^3 with q''' = -2 sin.
        for (double d : {1e-1, 1e-2, 1e-3, -1e-2}) EXPECT_LE(std::abs(q.remainder(eta0 + d)) / std::pow(std::abs(d), 3), 2.0 / 6.0 + 1e-6);
    }
}

TEST(Taylor, ContinuousSymbolHasNoRemainder) {
    const auto c = Symbol::continuous(0.1);
    for (double eta0 : {-1.0, 0.0, 2.0}) {
        const auto q = taylor_split(c, eta0);
        for (double eta : {-3.0, 0.5, 2.9}) EXPECT_NEAR(q.remainder(eta), 0.0, 1e-13);
    }
}

TEST(Taylor, PhysicalRescaling) {
    const double h = 0.05;
    const auto q = taylor_split(Symbol::semidiscrete(h), 1.0);
    const double xi = 1.1 / h;
    EXPECT_NEAR(q.value(xi), q.normalized(1.1) / (h * h), 1e-9);
}

TEST(Taylor, RejectsOutOfZone) {
    EXPECT_THROW(taylor_split(Symbol::semidiscrete(1.0), 3.5), validation_error);
    EXPECT_THROW(taylor_split(Symbol::semidiscrete(1.0), -pi - 1e-6), validation_error);
}
