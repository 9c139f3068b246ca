#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "retrade/errors.hpp"
#include "retrade/rng.hpp"

namespace retrade {

namespace detail {

// 16-node Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <typename F>
double gauss_legendre(F&& f, double lo, double hi) {
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i) {
        double x = half * kGlNodes[static_cast<std::size_t>(i)];
        sum += kGlWeights[static_cast<std::size_t>(i)] * (f(mid + x) + f(mid - x));
    }
    return sum * half;
}

// Integrate f over [0, hi] with panels graded geometrically toward 0, so
// integrands with a kink or log singularity at the origin still converge.
template <typename F>
double graded_integral(F&& f, double hi) {
    if (hi <= 0.0) return 0.0;
    double total = 0.0;
    double right = hi;
    for (int j = 0; j < 64 && right > hi * 0x1.0p-60; ++j) {
        double left = right * 0.5;
        total += gauss_legendre(f, left, right);
        right = left;
    }
    return total;
}

}  // namespace detail

// Distribution of a scalar random variable: the coefficient and shock laws of
// the random-coefficient autoregression, trend-weight laws, etc.
struct DistSpec {
    enum class Family { degenerate, normal, uniform, two_point };

    Family family{Family::degenerate};
    double a{0.0};  // degenerate: value; normal: mean; uniform: lo; two_point: first value
    double b{0.0};  // normal: sd; uniform: hi; two_point: second value
    double p{0.5};  // two_point: prob of `a`

    static DistSpec degenerate(double value) { return {Family::degenerate, value, 0.0, 0.5}; }
    static DistSpec normal(double mean, double sd) { return {Family::normal, mean, sd, 0.5}; }
    static DistSpec uniform(double lo, double hi) { return {Family::uniform, lo, hi, 0.5}; }
    static DistSpec two_point(double x, double y, double prob_x = 0.5) {
        return {Family::two_point, x, y, prob_x};
    }

    void validate() const {
        switch (family) {
            case Family::degenerate:
                return;
            case Family::normal:
                if (!(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
                    throw DistributionError("normal: sd must be finite and >= 0");
                return;
            case Family::uniform:
                if (!(a < b)) throw DistributionError("uniform: requires lo < hi");
                return;
            case Family::two_point:
                if (!(p >= 0.0 && p <= 1.0))
                    throw DistributionError("two_point: probability outside [0,1]");
                return;
        }
        throw DistributionError("unknown distribution family");
    }

    // Degenerate draws consume no engine state; every other family consumes a
    // fixed number of draws per sample.
    double sample(Rng& rng) const {
        switch (family) {
            case Family::degenerate: return a;
            case Family::normal: return b == 0.0 ? a : rng.normal(a, b);
            case Family::uniform: return rng.uniform(a, b);
            case Family::two_point: return rng.uniform() < p ? a : b;
        }
        return 0.0;
    }

    // E|X|^kappa. Exact for the discrete and uniform families, graded
    // quadrature for the normal one.
    double abs_moment(double kappa) const {
        switch (family) {
            case Family::degenerate:
                return std::pow(std::abs(a), kappa);
            case Family::two_point:
                return p * std::pow(std::abs(a), kappa) + (1.0 - p) * std::pow(std::abs(b), kappa);
            case Family::uniform: {
                auto F = [kappa](double x) {
                    return (x >= 0 ? 1.0 : -1.0) * std::pow(std::abs(x), kappa + 1.0) / (kappa + 1.0);
                };
                return (F(b) - F(a)) / (b - a);
            }
            case Family::normal: {
                if (b == 0.0) return std::pow(std::abs(a), kappa);
                double inv = 1.0 / (b * std::sqrt(2.0 * std::numbers::pi));
                auto pdf = [this, inv](double x) {
                    double z = (x - a) / b;
                    return inv * std::exp(-0.5 * z * z);
                };
                auto f = [&](double x) { return std::pow(std::abs(x), kappa) * pdf(x); };
                double span = 12.0 * b;
                double pos = detail::graded_integral(f, std::max(0.0, a) + span);
                double neg = detail::graded_integral([&](double x) { return f(-x); },
                                                     std::max(0.0, -a) + span);
                return pos + neg;
            }
        }
        return 0.0;
    }

    // E log|X|; may be -infinity when the law has an atom at 0.
    double log_abs_moment() const {
        constexpr double neg_inf = -std::numeric_limits<double>::infinity();
        switch (family) {
            case Family::degenerate:
                return a == 0.0 ? neg_inf : std::log(std::abs(a));
            case Family::two_point: {
                if ((a == 0.0 && p > 0.0) || (b == 0.0 && p < 1.0)) return neg_inf;
                double la = a == 0.0 ? 0.0 : std::log(std::abs(a));
                double lb = b == 0.0 ? 0.0 : std::log(std::abs(b));
                return p * la + (1.0 - p) * lb;
            }
            case Family::uniform: {
                auto G = [](double x) { return x == 0.0 ? 0.0 : x * std::log(std::abs(x)) - x; };
                return (G(b) - G(a)) / (b - a);
            }
            case Family::normal: {
                if (b == 0.0) return a == 0.0 ? neg_inf : std::log(std::abs(a));
                double inv = 1.0 / (b * std::sqrt(2.0 * std::numbers::pi));
                auto pdf = [this, inv](double x) {
                    double z = (x - a) / b;
                    return inv * std::exp(-0.5 * z * z);
                };
                auto f = [&](double x) { return std::log(x) * pdf(x); };
                auto g = [&](double x) { return std::log(x) * pdf(-x); };
                double span = 12.0 * b;
                return detail::graded_integral(f, std::max(0.0, a) + span) +
                       detail::graded_integral(g, std::max(0.0, -a) + span);
            }
        }
        return neg_inf;
    }

    std::string describe() const {
        char buf[96];
        switch (family) {
            case Family::degenerate: std::snprintf(buf, sizeof buf, "degenerate(%g)", a); break;
            case Family::normal: std::snprintf(buf, sizeof buf, "normal(%g,%g)", a, b); break;
            case Family::uniform: std::snprintf(buf, sizeof buf, "uniform(%g,%g)", a, b); break;
            case Family::two_point:
                std::snprintf(buf, sizeof buf, "two_point(%g,%g,%g)", a, b, p);
                break;
        }
        return buf;
    }
};

}  // namespace retrade
