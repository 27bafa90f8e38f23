// Copyright 2026 The gaussnc Authors
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

// Globally adaptive Gauss-Kronrod (10/21) integration on finite intervals,
// plus the helper that turns an analytic log-envelope into a truncation
// point for half-line integrals.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "gaussnc/error.hpp"

namespace gaussnc {

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;
    // Half-line integrals are cut where the analytic envelope has dropped to
    // abs_tol * exp(-truncation_margin).
    double truncation_margin = 8.0;

    void validate() const {
        if (!(abs_tol > 0.0 && abs_tol <= 1e-4) || !(rel_tol > 0.0 && rel_tol <= 1e-4)) {
            fail(ErrorKind::InvalidArgument, "quadrature config: tolerances must lie in (0, 1e-4]");
        }
        if (max_subdivisions < 20) {
            fail(ErrorKind::InvalidArgument, "quadrature config: max_subdivisions must be >= 20");
        }
        if (!(truncation_margin >= 5.0)) {
            fail(ErrorKind::InvalidArgument, "quadrature config: truncation_margin must be >= 5");
        }
    }

    double log_cutoff() const { return std::log(abs_tol) - truncation_margin; }

    QuadratureConfig tightened(double factor) const {
        QuadratureConfig c = *this;
        c.abs_tol *= factor;
        c.rel_tol *= factor;
        return c;
    }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    bool diverged = false;
};

namespace detail {

inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Weights of the embedded 10-point Gauss rule on kKronrodNodes[1], [3], ..., [9].
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool at_roundoff;
};

template <class F>
Segment gauss_kronrod_21(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[10];
    double gauss = 0.0;
    double absolute = std::abs(kronrod);
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kKronrodWeights[j] * (f1 + f2);
        absolute += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
    }
    const double value = kronrod * half;
    const double raw_error = std::abs((kronrod - gauss) * half);
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * absolute * std::abs(half);
    const bool tiny = std::abs(half) <= 1e-14 * std::max(std::abs(center), 1e-300);
    return {a, b, value, std::max(raw_error, floor), raw_error <= floor || tiny};
}

inline double neumaier_sum(std::span<const double> xs) {
    double sum = 0.0;
    double comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

}  // namespace detail

/// Integrates f over [a, b]. Interior breakpoints (sorted or not, outside
/// points ignored) seed the initial partition. Intervals whose Kronrod/Gauss
/// difference sits at the rounding floor are never split further; when only
/// such intervals remain the result is reported converged with the rounding
/// floor as its error estimate.
template <class F>
IntegralResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg,
                         std::span<const double> breakpoints = {}) {
    cfg.validate();
    if (!(std::isfinite(a) && std::isfinite(b))) {
        fail(ErrorKind::InvalidArgument, "integrate: limits must be finite");
    }
    if (a == b) return {0.0, 0.0, true, false};
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> cuts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto by_error = [](const detail::Segment& x, const detail::Segment& y) {
        // Roundoff-limited segments sink to the bottom of the heap.
        if (x.at_roundoff != y.at_roundoff) return x.at_roundoff;
        return x.error < y.error;
    };
    std::vector<detail::Segment> heap;
    heap.reserve(cuts.size() + 2 * static_cast<std::size_t>(cfg.max_subdivisions));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        heap.push_back(detail::gauss_kronrod_21(f, cuts[i], cuts[i + 1]));
    }
    std::make_heap(heap.begin(), heap.end(), by_error);

    std::vector<double> scratch;
    auto totals = [&](double& value, double& error) {
        scratch.clear();
        error = 0.0;
        for (const auto& s : heap) {
            scratch.push_back(s.value);
            error += s.error;
        }
        value = detail::neumaier_sum(scratch);
    };

    double value = 0.0;
    double error = 0.0;
    for (int splits = 0;; ++splits) {
        totals(value, error);
        if (!std::isfinite(value) || !std::isfinite(error)) {
            return {sign * value, error, false, false};
        }
        const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
        if (error <= target || heap.front().at_roundoff) {
            return {sign * value, error, true, false};
        }
        if (splits >= cfg.max_subdivisions) {
            return {sign * value, error, false, false};
        }
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const detail::Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        heap.push_back(detail::gauss_kronrod_21(f, worst.a, mid));
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(detail::gauss_kronrod_21(f, mid, worst.b));
        std::push_heap(heap.begin(), heap.end(), by_error);
    }
}

/// Smallest x >= start (to within bisection resolution) at which a
/// log-envelope that is eventually decreasing has fallen below log_target.
/// Doubles the step until the envelope is below target, then bisects.
template <class LogEnvelope>
double envelope_cutoff(LogEnvelope&& log_env, double start, double log_target, double max_x = 1e7) {
    double lo = std::max(start, 0.0);
    if (log_env(lo) <= log_target && lo > 0.0) return lo;
    double step = std::max(1.0, lo);
    double hi = lo + step;
    while (log_env(hi) > log_target) {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
        if (hi > max_x) fail(ErrorKind::NonConvergence, "envelope_cutoff: envelope does not decay");
    }
    for (int it = 0; it < 60 && hi - lo > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (log_env(mid) > log_target ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace gaussnc
