// Copyright 2026 The Adaptive ZNE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AZNE_FILTERING_HPP
#define AZNE_FILTERING_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace azne {

struct GaussianComponent {
    double mean = 0;
    double sigma = 1;
    double weight = 1;
};

/// Raised when a sample carries no spread at all.
class DegenerateSample : public std::invalid_argument {
   public:
    explicit DegenerateSample(const std::string &what) : std::invalid_argument(what) {}
};

/// One-dimensional Gaussian mixture. When the two-component model does not beat a single
/// Gaussian on BIC, a component collapses onto the variance floor, or the fitted density has a
/// single mode, the fit is reported as one component with weight 1 and `collapsed` set.
struct MixtureFit {
    std::vector<GaussianComponent> components;
    std::size_t primary_index = 0;
    std::vector<std::array<double, 2>> responsibilities;
    double loglik = 0;
    std::vector<double> loglik_trace;
    bool converged = false;
    std::size_t iterations = 0;
    bool collapsed = false;
    double bic_one = 0;
    double bic_two = 0;
    /// Whether the two-component density has two local maxima.
    bool bimodal = false;

    const GaussianComponent &primary() const { return components[primary_index]; }

    bool in_secondary(std::size_t i) const {
        return !collapsed && components.size() == 2 && responsibilities[i][1 - primary_index] > 0.5;
    }
};

inline constexpr double variance_floor = 1e-12;

namespace detail {

inline double log_normal_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (std::log(2 * std::numbers::pi * var) + d * d / var);
}

inline GaussianComponent moments(std::span<const double> data) {
    double m = 0;
    for (double v : data) m += v;
    m /= static_cast<double>(data.size());
    double ss = 0;
    for (double v : data) ss += (v - m) * (v - m);
    return {m, std::sqrt(std::max(ss / static_cast<double>(data.size()), variance_floor)), 1.0};
}

/// Scans the mixture density between the two means for a dip.
inline bool has_two_modes(const std::array<GaussianComponent, 2> &c) {
    const double lo = std::min(c[0].mean, c[1].mean), hi = std::max(c[0].mean, c[1].mean);
    if (!(hi > lo)) return false;
    auto density = [&](double x) {
        double d = 0;
        for (const auto &g : c) {
            const double z = (x - g.mean) / g.sigma;
            d += g.weight / g.sigma * std::exp(-0.5 * z * z);
        }
        return d;
    };
    constexpr int steps = 512;
    double prev = density(lo);
    bool falling = false;
    for (int i = 1; i <= steps; ++i) {
        const double d = density(lo + (hi - lo) * i / steps);
        if (d < prev * (1 - 1e-12)) falling = true;
        if (falling && d > prev * (1 + 1e-12)) return true;
        prev = d;
    }
    return false;
}

inline double single_loglik(std::span<const double> data, const GaussianComponent &c) {
    double ll = 0;
    for (double v : data) ll += log_normal_pdf(v, c.mean, c.sigma * c.sigma);
    return ll;
}

}  // namespace detail

struct GmmOptions {
    std::size_t max_iterations = 500;
    double tolerance = 1e-8;
};

/// Two-component EM started from the lower and upper halves of the sorted data. The result
/// does not depend on input order. `seed` is accepted for interface stability; the
/// initialization is deterministic and draws nothing.
inline MixtureFit fit_gmm_1d(std::span<const double> data, std::size_t components = 2, std::uint64_t seed = 0,
                             const GmmOptions &opt = {}) {
    (void)seed;
    if (components != 2) throw std::invalid_argument("only two-component mixtures are supported");
    const std::size_t n = data.size();
    if (n < 2 * components) throw std::invalid_argument("mixture fit needs at least 2T points");
    for (double v : data) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in mixture data");
    }
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) throw DegenerateSample("degenerate sample: all points identical");

    // Work on the sorted copy so that summation order, and thus every bit of the result,
    // is independent of the input order.
    std::span<const double> xs(sorted);
    const std::size_t half = n / 2;
    std::array<GaussianComponent, 2> c{detail::moments(xs.subspan(0, half)), detail::moments(xs.subspan(half))};
    c[0].weight = c[1].weight = 0.5;

    MixtureFit fit;
    std::vector<std::array<double, 2>> resp(n);
    double prev = -std::numeric_limits<double>::infinity();
    bool floored = false;
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        double ll = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double l0 = std::log(c[0].weight) + detail::log_normal_pdf(xs[i], c[0].mean, c[0].sigma * c[0].sigma);
            double l1 = std::log(c[1].weight) + detail::log_normal_pdf(xs[i], c[1].mean, c[1].sigma * c[1].sigma);
            double m = std::max(l0, l1);
            double lse = m + std::log(std::exp(l0 - m) + std::exp(l1 - m));
            resp[i] = {std::exp(l0 - lse), std::exp(l1 - lse)};
            ll += lse;
        }
        fit.loglik_trace.push_back(ll);
        fit.iterations = it + 1;
        if (ll - prev < opt.tolerance) {
            fit.converged = true;
            fit.loglik = ll;
            break;
        }
        prev = ll;
        fit.loglik = ll;
        for (int t = 0; t < 2; ++t) {
            double w = 0, mu = 0;
            for (std::size_t i = 0; i < n; ++i) {
                w += resp[i][t];
                mu += resp[i][t] * xs[i];
            }
            if (w <= 0) {
                floored = true;
                break;
            }
            mu /= w;
            double var = 0;
            for (std::size_t i = 0; i < n; ++i) var += resp[i][t] * (xs[i] - mu) * (xs[i] - mu);
            var /= w;
            if (var <= variance_floor) {
                var = variance_floor;
                floored = true;
            }
            c[t] = {mu, std::sqrt(var), w / static_cast<double>(n)};
        }
        if (floored) break;
    }

    if (!floored) {
        double ll = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double l0 = std::log(c[0].weight) + detail::log_normal_pdf(xs[i], c[0].mean, c[0].sigma * c[0].sigma);
            double l1 = std::log(c[1].weight) + detail::log_normal_pdf(xs[i], c[1].mean, c[1].sigma * c[1].sigma);
            double m = std::max(l0, l1);
            ll += m + std::log(std::exp(l0 - m) + std::exp(l1 - m));
        }
        fit.loglik = ll;
    }

    const GaussianComponent single = detail::moments(xs);
    const double ll1 = detail::single_loglik(xs, single);
    const double logn = std::log(static_cast<double>(n));
    fit.bic_one = -2 * ll1 + 2 * logn;
    fit.bic_two = -2 * fit.loglik + 5 * logn;

    // Responsibilities are reported in the caller's order.
    auto responsibilities_for = [&](double v) -> std::array<double, 2> {
        double l0 = std::log(c[0].weight) + detail::log_normal_pdf(v, c[0].mean, c[0].sigma * c[0].sigma);
        double l1 = std::log(c[1].weight) + detail::log_normal_pdf(v, c[1].mean, c[1].sigma * c[1].sigma);
        double m = std::max(l0, l1);
        double lse = m + std::log(std::exp(l0 - m) + std::exp(l1 - m));
        return {std::exp(l0 - lse), std::exp(l1 - lse)};
    };

    // A flat-topped single mode (e.g. an already trimmed sample) can also earn a better BIC
    // with two overlapping halves; such a split has no dip between the means.
    fit.bimodal = !floored && detail::has_two_modes(c);
    if (floored || !(fit.bic_two < fit.bic_one) || !fit.bimodal) {
        fit.collapsed = true;
        fit.components = {single};
        fit.primary_index = 0;
        fit.loglik = ll1;
        fit.responsibilities.assign(n, {1.0, 0.0});
        return fit;
    }
    fit.components = {c[0], c[1]};
    if (c[0].weight > c[1].weight || (c[0].weight == c[1].weight && c[0].mean <= c[1].mean)) {
        fit.primary_index = 0;
    } else {
        fit.primary_index = 1;
    }
    fit.responsibilities.resize(n);
    for (std::size_t i = 0; i < n; ++i) fit.responsibilities[i] = responsibilities_for(data[i]);
    return fit;
}

enum class FilterReason { none, secondary_component, two_sigma, degenerate_passthrough };

inline const char *reason_name(FilterReason r) {
    switch (r) {
        case FilterReason::none:
            return "";
        case FilterReason::secondary_component:
            return "secondary_component";
        case FilterReason::two_sigma:
            return "two_sigma";
        case FilterReason::degenerate_passthrough:
            return "degenerate_passthrough";
    }
    return "?";
}

inline FilterReason reason_from_name(const std::string &s) {
    if (s.empty() || s == "none") return FilterReason::none;
    if (s == "secondary_component") return FilterReason::secondary_component;
    if (s == "two_sigma") return FilterReason::two_sigma;
    if (s == "degenerate_passthrough") return FilterReason::degenerate_passthrough;
    throw std::invalid_argument("unknown filter reason '" + s + "'");
}

struct FilterDecision {
    bool retained = true;
    FilterReason reason = FilterReason::none;
};

/// Outcome of filtering one group of values.
struct GroupFilter {
    std::vector<FilterDecision> decisions;
    std::optional<MixtureFit> fit;
    /// Too small to fit, or the mixture was unusable.
    bool passthrough = false;
    /// Primary component used for the 2-sigma cut.
    GaussianComponent primary;
};

struct MixtureFilterOptions {
    std::size_t min_group = 4;
    /// When the mixture fails, use a single Gaussian 2-sigma rule (true) or keep everything (false).
    bool single_gaussian_fallback = true;
    double n_sigma = 2.0;
};

/// Drops values in the secondary mixture component (responsibility > 0.5), then values more
/// than n_sigma primary standard deviations from the primary mean.
inline GroupFilter filter_mixture(std::span<const double> values, const MixtureFilterOptions &opt,
                                  std::uint64_t seed = 0) {
    GroupFilter g;
    g.decisions.assign(values.size(), {});
    auto passthrough = [&] {
        g.passthrough = true;
        for (auto &d : g.decisions) d.reason = FilterReason::degenerate_passthrough;
        return g;
    };
    if (values.size() < opt.min_group) return passthrough();
    try {
        g.fit = fit_gmm_1d(values, 2, seed);
        g.primary = g.fit->primary();
    } catch (const DegenerateSample &) {
        if (!opt.single_gaussian_fallback) return passthrough();
        // All values are identical, so none deviates.
        g.primary = {values[0], 0, 1};
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (g.fit && g.fit->in_secondary(i)) {
            g.decisions[i] = {false, FilterReason::secondary_component};
        } else if (std::abs(values[i] - g.primary.mean) > opt.n_sigma * g.primary.sigma) {
            g.decisions[i] = {false, FilterReason::two_sigma};
        }
    }
    return g;
}

/// Run-level filter on per-run initial error strengths.
inline GroupFilter filter_runs_epsilon0(std::span<const double> epsilon0s, std::uint64_t seed = 0) {
    MixtureFilterOptions opt;
    opt.min_group = 4;
    opt.single_gaussian_fallback = true;
    return filter_mixture(epsilon0s, opt, seed);
}

/// Per-group filter on expectation values; each group (one noise level) is handled independently.
/// Groups of identical values or with fewer than 8 entries pass through unfiltered.
inline std::vector<GroupFilter> filter_global(const std::vector<std::vector<double>> &groups, std::uint64_t seed = 0) {
    MixtureFilterOptions opt;
    opt.min_group = 8;
    opt.single_gaussian_fallback = false;
    std::vector<GroupFilter> out;
    out.reserve(groups.size());
    for (const auto &g : groups) out.push_back(filter_mixture(g, opt, seed));
    return out;
}

struct Point2 {
    double x = 0;
    double y = 0;
};

struct Gaussian2D {
    double mean_x = 0, mean_y = 0;
    double sigma_x = 1, sigma_y = 1;
    double rho = 0;

    double covariance() const { return rho * sigma_x * sigma_y; }

    /// Squared Mahalanobis distance.
    double distance2(double x, double y) const {
        const double u = (x - mean_x) / sigma_x;
        const double v = (y - mean_y) / sigma_y;
        return (u * u - 2 * rho * u * v + v * v) / (1 - rho * rho);
    }
};

inline constexpr double max_abs_correlation = 1 - 1e-9;

/// Sample means, sample standard deviations (n - 1) and Pearson correlation.
inline Gaussian2D fit_gaussian2d(std::span<const Point2> points) {
    const std::size_t n = points.size();
    if (n < 3) throw std::invalid_argument("2D Gaussian fit needs at least 3 points");
    double mx = 0, my = 0;
    for (const auto &p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, syy = 0, sxy = 0;
    for (const auto &p : points) {
        sxx += (p.x - mx) * (p.x - mx);
        syy += (p.y - my) * (p.y - my);
        sxy += (p.x - mx) * (p.y - my);
    }
    if (!(sxx > 0) || !(syy > 0)) throw DegenerateSample("2D Gaussian fit: zero variance in a coordinate");
    Gaussian2D g;
    g.mean_x = mx;
    g.mean_y = my;
    g.sigma_x = std::sqrt(sxx / static_cast<double>(n - 1));
    g.sigma_y = std::sqrt(syy / static_cast<double>(n - 1));
    g.rho = sxy / std::sqrt(sxx * syy);
    if (!(std::abs(g.rho) < max_abs_correlation)) {
        throw DegenerateSample("2D Gaussian fit: coordinates are perfectly correlated");
    }
    return g;
}

/// Keeps points inside the 2-sigma ellipse (squared Mahalanobis distance <= 4).
inline std::vector<bool> filter_2d(std::span<const Point2> points, const Gaussian2D &model, double n_sigma = 2.0) {
    std::vector<bool> keep(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        keep[i] = model.distance2(points[i].x, points[i].y) <= n_sigma * n_sigma;
    }
    return keep;
}

}  // namespace azne

#endif
