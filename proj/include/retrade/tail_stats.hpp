#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "retrade/errors.hpp"
#include "retrade/returns.hpp"

namespace retrade {

// Empirical survival function of |r| at each distinct observed magnitude.
struct CcdfCurve {
    std::vector<double> magnitude;  // ascending, distinct
    std::vector<double> survival;   // prob{|r| >= magnitude}; starts at 1, non-increasing
};

struct TailFit {
    double alpha{0.0};   // survival-function exponent
    double xmin{0.0};    // fitted lower cutoff
    double ks_stat{0.0}; // KS distance between empirical tail and fitted law
    std::size_t n_tail{0};
    double stderr_{0.0}; // asymptotic alpha / sqrt(n_tail)
};

struct AcfReport {
    std::vector<double> raw;   // lags 1..L (lag 0 is identically 1, not stored)
    std::vector<double> abs;   // same lags, absolute series
    double band{0.0};          // 1.96 / sqrt(T)
    bool abs_degenerate{false};          // |r| had zero variance; abs left as zeros
    bool infinite_variance_warning{false};  // set by callers when a tail fit gives alpha <= 2
};

inline std::vector<double> abs_magnitudes(std::span<const double> xs) {
    std::vector<double> m(xs.begin(), xs.end());
    for (double& x : m) x = std::abs(x);
    return m;
}

inline CcdfCurve ccdf(std::span<const double> series) {
    if (series.empty()) throw EmptySeriesError{};
    std::vector<double> m = abs_magnitudes(series);
    std::sort(m.begin(), m.end());
    CcdfCurve out;
    const double n = static_cast<double>(m.size());
    for (std::size_t i = 0; i < m.size();) {
        std::size_t j = i;
        while (j < m.size() && m[j] == m[i]) ++j;
        out.magnitude.push_back(m[i]);
        out.survival.push_back(static_cast<double>(m.size() - i) / n);
        i = j;
    }
    return out;
}

// Hill estimator on the k largest magnitudes:
//   alpha = k / sum_{i=1..k} log(x_(n-i+1) / x_(n-k)),  stderr = alpha / sqrt(k).
struct HillEstimate {
    double alpha{0.0};
    double stderr_{0.0};
};

inline HillEstimate hill(std::span<const double> series, std::size_t k) {
    const std::size_t n = series.size();
    if (k < 10) throw TailTooSmallError("hill: k must be at least 10");
    if (k >= n) throw TailTooSmallError("hill: k must be smaller than the sample size");
    std::vector<double> m = abs_magnitudes(series);
    std::sort(m.begin(), m.end());
    const double x_ref = m[n - k - 1];
    if (!(x_ref > 0.0)) throw ZeroMagnitudesError("hill: reference order statistic is zero");
    double sum = 0.0;
    for (std::size_t i = n - k; i < n; ++i) sum += std::log(m[i] / x_ref);
    if (!(sum > 0.0)) throw ZeroMagnitudesError("hill: degenerate tail (all magnitudes tied)");
    double alpha = static_cast<double>(k) / sum;
    return {alpha, alpha / std::sqrt(static_cast<double>(k))};
}

inline std::size_t hill_default_k(std::size_t n) {
    return std::max<std::size_t>(10, n / 100);  // top 1%, clamped
}

namespace detail {

// alpha and KS distance for the tail strictly above xmin, given magnitudes
// sorted ascending and suffix sums of log-magnitudes.
struct TailEval {
    double alpha, ks;
    std::size_t k;
};

inline TailEval eval_tail(const std::vector<double>& m, const std::vector<double>& logsuffix,
                          std::size_t first_above, double xmin) {
    const std::size_t n = m.size();
    const std::size_t k = n - first_above;
    double sum = logsuffix[first_above] - static_cast<double>(k) * std::log(xmin);
    double alpha = static_cast<double>(k) / sum;
    double ks = 0.0;
    for (std::size_t i = first_above; i < n; ++i) {
        double fit = 1.0 - std::pow(xmin / m[i], alpha);
        double lo = static_cast<double>(i - first_above) / static_cast<double>(k);
        double hi = static_cast<double>(i - first_above + 1) / static_cast<double>(k);
        ks = std::max(ks, std::max(std::abs(fit - lo), std::abs(fit - hi)));
    }
    return {alpha, ks, k};
}

}  // namespace detail

// Power-law tail fit with the cutoff chosen to minimize the KS distance
// between the empirical tail and the fitted law; alpha is the tail MLE
// (hill with x_(n-k) forced to the cutoff).
inline TailFit fit_powerlaw(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 100) throw TooShortError("fit_powerlaw: need at least 100 observations");
    std::vector<double> m = abs_magnitudes(series);
    std::sort(m.begin(), m.end());

    std::vector<double> logsuffix(n + 1, 0.0);
    bool any_positive = false;
    for (std::size_t i = n; i-- > 0;) {
        double lx = m[i] > 0.0 ? std::log(m[i]) : 0.0;
        logsuffix[i] = logsuffix[i + 1] + lx;
        any_positive |= m[i] > 0.0;
    }
    if (!any_positive) throw NoValidTailError("fit_powerlaw: no positive magnitudes");

    // Candidate cutoffs: distinct observed magnitudes, thinned to a quantile
    // grid for large samples. Tails smaller than 10 points are refused.
    std::vector<std::size_t> candidates;
    const std::size_t max_candidates = 256;
    std::size_t step = std::max<std::size_t>(1, n / max_candidates);
    for (std::size_t i = 0; i + 10 < n; i += step) {
        if (m[i] <= 0.0) continue;
        if (!candidates.empty() && m[candidates.back()] == m[i]) continue;
        candidates.push_back(i);
    }
    if (candidates.empty()) throw NoValidTailError("fit_powerlaw: no admissible cutoff");

    TailFit best;
    bool found = false;
    for (std::size_t idx : candidates) {
        double xmin = m[idx];
        std::size_t first_above =
            static_cast<std::size_t>(std::upper_bound(m.begin(), m.end(), xmin) - m.begin());
        if (n - first_above < 10) continue;
        detail::TailEval e = detail::eval_tail(m, logsuffix, first_above, xmin);
        if (!found || e.ks < best.ks_stat) {
            best.alpha = e.alpha;
            best.xmin = xmin;
            best.ks_stat = e.ks;
            best.n_tail = e.k;
            best.stderr_ = e.alpha / std::sqrt(static_cast<double>(e.k));
            found = true;
        }
    }
    if (!found) throw NoValidTailError("fit_powerlaw: every candidate tail was too small");
    return best;
}

// Rough goodness screen: a fitted tail whose KS distance is large relative to
// its size, or that kept almost no points, is reported as a poor fit.
inline bool poor_fit(const TailFit& fit, std::size_t n) {
    return fit.ks_stat * std::sqrt(static_cast<double>(fit.n_tail)) > 1.36 ||
           fit.n_tail < n / 1000;
}

// Hill estimates across a decade of tail sizes. Genuine power laws plateau;
// thin-tailed samples drift upward as k shrinks.
struct HillProfile {
    std::vector<std::size_t> k;
    std::vector<double> alpha;
    bool stable{false};
};

inline HillProfile hill_profile(std::span<const double> series, std::size_t k_max) {
    HillProfile prof;
    for (std::size_t k = k_max; k >= 10 && k >= k_max / 16; k /= 4) {
        HillEstimate h = hill(series, k);
        prof.k.push_back(k);
        prof.alpha.push_back(h.alpha);
    }
    double lo = prof.alpha[0], hi = prof.alpha[0];
    for (double a : prof.alpha) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    prof.stable = lo > 0.0 && hi / lo <= 1.25;
    return prof;
}

// Plain biased sample autocorrelation (divides by T), matching the
// +-1.96/sqrt(T) band convention. Computes both the raw and the
// absolute-value series.
inline AcfReport acf(std::span<const double> series, std::size_t max_lag) {
    const std::size_t T = series.size();
    if (max_lag == 0) throw Error("acf: max_lag must be positive");
    if (T <= 10 * max_lag) throw TooShortError("acf: need T > 10 * max_lag");

    auto correlate = [T, max_lag](std::span<const double> x, std::vector<double>& out) -> bool {
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(T);
        double c0 = 0.0;
        for (double v : x) c0 += (v - mean) * (v - mean);
        if (c0 == 0.0) return false;
        out.resize(max_lag);
        for (std::size_t lag = 1; lag <= max_lag; ++lag) {
            double ck = 0.0;
            for (std::size_t t = 0; t + lag < T; ++t)
                ck += (x[t] - mean) * (x[t + lag] - mean);
            out[lag - 1] = ck / c0;
        }
        return true;
    };

    AcfReport report;
    report.band = 1.96 / std::sqrt(static_cast<double>(T));
    if (!correlate(series, report.raw))
        throw ZeroVarianceError("acf: series has zero variance");
    std::vector<double> mags = abs_magnitudes(series);
    if (!correlate(mags, report.abs)) {
        report.abs.assign(max_lag, 0.0);
        report.abs_degenerate = true;
    }
    return report;
}

}  // namespace retrade
