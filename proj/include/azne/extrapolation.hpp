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

#ifndef AZNE_EXTRAPOLATION_HPP
#define AZNE_EXTRAPOLATION_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace azne {

/// One expectation value at noise coordinate x (a scaling factor, or a measured error strength).
struct Sample {
    double x = 0;
    double value = 0;
    std::uint64_t run_id = 0;
    std::uint64_t twirl_id = 0;
    bool retained = true;
};

enum class FitModel { exponential, linear, mean_fallback };

inline const char *model_name(FitModel m) {
    switch (m) {
        case FitModel::exponential:
            return "exponential";
        case FitModel::linear:
            return "linear";
        case FitModel::mean_fallback:
            return "mean-fallback";
    }
    return "?";
}

/// params: (a, b, c) for c + a exp(-b x); (slope, intercept) for linear; (mean) for the fallback.
struct FitResult {
    FitModel model = FitModel::mean_fallback;
    std::vector<double> params;
    double zero_noise_value = 0;
    double residual_rms = 0;
    bool degenerate = false;
    std::size_t iterations = 0;
};

namespace detail {

struct Points {
    std::vector<double> x, y;
    std::size_t distinct_x = 0;
};

inline Points retained_points(std::span<const Sample> samples) {
    Points p;
    std::set<double> xs;
    for (const Sample &s : samples) {
        if (!s.retained) continue;
        if (!std::isfinite(s.x) || !std::isfinite(s.value)) throw std::invalid_argument("non-finite sample");
        p.x.push_back(s.x);
        p.y.push_back(s.value);
        xs.insert(s.x);
    }
    if (p.x.empty()) throw std::invalid_argument("no retained samples to fit");
    p.distinct_x = xs.size();
    return p;
}

inline FitResult mean_fallback(const Points &p) {
    FitResult r;
    r.model = FitModel::mean_fallback;
    double m = 0;
    for (double v : p.y) m += v;
    m /= static_cast<double>(p.y.size());
    double ss = 0;
    for (double v : p.y) ss += (v - m) * (v - m);
    r.params = {m};
    r.zero_noise_value = m;
    r.residual_rms = std::sqrt(ss / static_cast<double>(p.y.size()));
    r.degenerate = true;
    return r;
}

inline FitResult linear_fit(const Points &p) {
    if (p.distinct_x < 2) return mean_fallback(p);
    const double n = static_cast<double>(p.x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        mx += p.x[i];
        my += p.y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        sxx += (p.x[i] - mx) * (p.x[i] - mx);
        sxy += (p.x[i] - mx) * (p.y[i] - my);
    }
    FitResult r;
    r.model = FitModel::linear;
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    r.params = {slope, intercept};
    r.zero_noise_value = intercept;
    double ss = 0;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        double e = intercept + slope * p.x[i] - p.y[i];
        ss += e * e;
    }
    r.residual_rms = std::sqrt(ss / n);
    return r;
}

inline double exp_rss(const Points &p, const Eigen::Vector3d &q) {
    double ss = 0;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        double e = q[2] + q[0] * std::exp(-q[1] * p.x[i]) - p.y[i];
        ss += e * e;
    }
    return ss;
}

}  // namespace detail

/// Ordinary least squares in x; the zero-noise value is the intercept.
inline FitResult fit_linear(std::span<const Sample> samples) {
    return detail::linear_fit(detail::retained_points(samples));
}

struct ExponentialFitOptions {
    std::size_t max_iterations = 200;
    double step_tolerance = 1e-10;
    /// F statistic of the exponential against the straight line below which the extra
    /// curvature parameter is treated as absent and the linear fit is reported instead.
    double curvature_f_threshold = 4.0;
};

/// Least squares fit of c + a exp(-b x) with b >= 0, by damped Gauss-Newton (Levenberg-Marquardt)
/// started from a log-linear regression against a shifted floor. Falls back to the linear fit
/// (flagged degenerate) when b collapses to 0, the iteration fails, or curvature is not
/// supported by the data; to the mean with fewer than two distinct x.
inline FitResult fit_exponential(std::span<const Sample> samples, const ExponentialFitOptions &opt = {}) {
    const detail::Points p = detail::retained_points(samples);
    if (p.distinct_x < 2) return detail::mean_fallback(p);
    FitResult linear = detail::linear_fit(p);
    auto fallback = [&] {
        FitResult r = linear;
        r.degenerate = true;
        return r;
    };
    if (p.distinct_x < 3 || p.x.size() < 3) return fallback();

    const auto [ymin_it, ymax_it] = std::minmax_element(p.y.begin(), p.y.end());
    const double ymin = *ymin_it, ymax = *ymax_it;
    const double span = ymax - ymin;
    if (!(span > 1e-14 * std::max(1.0, std::abs(ymax)))) return fallback();

    // Decreasing data approach the floor from above (a > 0), increasing data from below.
    const double sign = linear.params[0] <= 0 ? 1.0 : -1.0;
    const double margin = 0.05 * span + 1e-6;
    const double c0 = sign > 0 ? ymin - margin : ymax + margin;
    double sx = 0, sz = 0, sxx = 0, sxz = 0;
    const double n = static_cast<double>(p.x.size());
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        double z = std::log(sign * (p.y[i] - c0));
        sx += p.x[i];
        sz += z;
        sxx += p.x[i] * p.x[i];
        sxz += p.x[i] * z;
    }
    const double slope = (n * sxz - sx * sz) / (n * sxx - sx * sx);
    const double icpt = (sz - slope * sx) / n;
    Eigen::Vector3d q(sign * std::exp(icpt), std::max(-slope, 1e-6), c0);

    double rss = detail::exp_rss(p, q);
    double mu = 1e-3;
    std::size_t it = 0;
    bool converged = false;
    for (; it < opt.max_iterations; ++it) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            const double e = std::exp(-q[1] * p.x[i]);
            const double r = q[2] + q[0] * e - p.y[i];
            Eigen::Vector3d j(e, -q[0] * p.x[i] * e, 1.0);
            jtj += j * j.transpose();
            jtr += j * r;
        }
        bool accepted = false;
        Eigen::Vector3d step = Eigen::Vector3d::Zero();
        while (mu < 1e12) {
            Eigen::Matrix3d damped = jtj;
            damped.diagonal() += mu * jtj.diagonal().cwiseMax(1e-300);
            step = damped.ldlt().solve(-jtr);
            Eigen::Vector3d trial = q + step;
            trial[1] = std::max(trial[1], 0.0);
            step = trial - q;
            double trial_rss = detail::exp_rss(p, trial);
            if (std::isfinite(trial_rss) && trial_rss <= rss) {
                q = trial;
                rss = trial_rss;
                mu = std::max(mu / 3, 1e-12);
                accepted = true;
                break;
            }
            mu *= 4;
        }
        if (!accepted || step.cwiseAbs().maxCoeff() < opt.step_tolerance) {
            converged = true;
            ++it;
            break;
        }
    }
    // An iteration that runs out of budget is chasing an unbounded decay rate (a step-like
    // curve through the group means); that is treated as a failed fit.
    if (!converged || !q.allFinite() || !(q[1] > 1e-12)) return fallback();
    const double rss_lin = linear.residual_rms * linear.residual_rms * n;
    if (p.x.size() > 3) {
        const double dof = n - 3;
        const double f = rss > 0 ? (rss_lin - rss) / (rss / dof) : std::numeric_limits<double>::infinity();
        if (!(f >= opt.curvature_f_threshold)) return fallback();
    }
    FitResult r;
    r.model = FitModel::exponential;
    r.params = {q[0], q[1], q[2]};
    r.zero_noise_value = q[0] + q[2];
    r.residual_rms = std::sqrt(rss / n);
    r.iterations = it;
    return r;
}

}  // namespace azne

#endif
