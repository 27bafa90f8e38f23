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

// Brute-force integral routes that run independently of the hypergeometric
// closed forms:
//
//   * p(n) as a single radial phase-space integral against the Laguerre
//     Wigner function of |n>,
//   * the half-line Fourier-Bessel transform with kernel J0(2 sqrt(x t)),
//   * P(I) as a K-integral, including detection of its exponential growth in
//     the squeezed regime,
//   * two-sided numerical checks of the definite integrals
//       int e^{-ax} J0(2 sqrt(bx)) I0(cx) dx   and   int e^{-ax} x^n I0(bx) dx.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "gaussnc/error.hpp"
#include "gaussnc/gaussian_state.hpp"
#include "gaussnc/quadrature.hpp"
#include "gaussnc/specfun.hpp"

namespace gaussnc::oracle {

/// p(n) = (-1)^n (4/(alpha beta)) int_0^inf exp{-2L - L(1/alpha^2 + 1/beta^2)}
///        L_n(4L) I0(L |1/beta^2 - 1/alpha^2|) dL.
inline IntegralResult radial_pnd(const PhysicalGaussianState& s, int n, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (n < 0 || n > 200) fail(ErrorKind::InvalidArgument, "radial_pnd: n must lie in [0, 200]");
    const double alpha = s.alpha();
    const double beta = s.beta();
    const double ia = 1.0 / (alpha * alpha);
    const double ib = 1.0 / (beta * beta);
    const double spread = std::abs(ib - ia);
    // -2L - L(ia + ib) + L |ib - ia| = -2L (1 + min(ia, ib)); I0 enters scaled.
    const double rate = 2.0 + 2.0 * std::min(ia, ib);
    const double prefactor = (n % 2 == 0 ? 4.0 : -4.0) / (alpha * beta);

    auto integrand = [&](double L) {
        return prefactor * std::exp(-rate * L) * specfun::bessel_i0e(L * spread) *
               specfun::laguerre(n, 0, 4.0 * L);
    };
    // |L_n(x)| <= L_n(-x) bounds the Laguerre factor for every x >= 0.
    auto log_envelope = [&](double L) {
        return std::log(std::abs(prefactor)) + std::log(specfun::laguerre(n, 0, -4.0 * L)) - rate * L;
    };
    const double upper = envelope_cutoff(log_envelope, 2.0 * n + 1.0, cfg.log_cutoff());

    // One initial panel per half oscillation of L_n(4L) over its zero range.
    const int panels = std::max(16, 2 * n + 4);
    const double zero_range = std::min(upper, n + 2.0);
    std::vector<double> cuts;
    for (int i = 1; i < panels; ++i) cuts.push_back(zero_range * i / panels);
    for (double x = zero_range * 2.0; x < upper; x *= 2.0) cuts.push_back(x);
    return integrate(integrand, 0.0, upper, cfg, cuts);
}

namespace detail {

inline constexpr int kDirectBesselZeros = 8;
inline constexpr int kMaxBesselPanels = 20000;

// Repeated averaging of neighbouring partial sums; damps the alternation of
// the panel sums of an oscillatory tail.
inline double iterated_average(std::vector<double> sums, double& spread) {
    spread = 0.0;
    while (sums.size() > 1) {
        spread = std::abs(sums[sums.size() - 1] - sums[sums.size() - 2]);
        for (std::size_t i = 0; i + 1 < sums.size(); ++i) sums[i] = 0.5 * (sums[i] + sums[i + 1]);
        sums.pop_back();
    }
    return sums.front();
}

}  // namespace detail

/// g(x) = int_0^upper f(t) J0(2 sqrt(x t)) dt. The caller guarantees |f| is
/// negligible beyond `upper`. The first eight kernel zeros are breakpoints of
/// one adaptive integral; later half-periods are integrated panel by panel
/// and their partial sums accelerated by iterated averaging.
template <class F>
IntegralResult fourier_bessel(F&& f, double x, double upper, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (!(x >= 0.0)) fail(ErrorKind::InvalidArgument, "fourier_bessel: transform variable must be >= 0");
    if (!(upper > 0.0) || !std::isfinite(upper)) {
        fail(ErrorKind::InvalidArgument, "fourier_bessel: truncation bound must be positive and finite");
    }
    auto integrand = [&](double t) { return f(t) * specfun::bessel_j0(2.0 * std::sqrt(x * t)); };
    auto zero_at = [&](int j) {
        const double r = specfun::bessel_j0_zero(j);
        return r * r / (4.0 * x);
    };
    if (x == 0.0 || zero_at(detail::kDirectBesselZeros + 1) >= upper) {
        std::vector<double> cuts;
        if (x > 0.0) {
            for (int j = 1; j <= detail::kDirectBesselZeros; ++j) cuts.push_back(zero_at(j));
        }
        return integrate(integrand, 0.0, upper, cfg, cuts);
    }

    const QuadratureConfig panel_cfg = cfg.tightened(0.1);
    std::vector<double> head_cuts;
    for (int j = 1; j < detail::kDirectBesselZeros; ++j) head_cuts.push_back(zero_at(j));
    double lo = zero_at(detail::kDirectBesselZeros);
    IntegralResult head = integrate(integrand, 0.0, lo, panel_cfg, head_cuts);
    double error = head.error_estimate;
    bool converged = head.converged;

    std::vector<double> partial{head.value};
    double running = head.value;
    double last_panel = std::abs(head.value);
    int j = detail::kDirectBesselZeros;
    while (lo < upper) {
        if (++j - detail::kDirectBesselZeros > detail::kMaxBesselPanels) {
            return {running, error, false, false};
        }
        const double hi = std::min(zero_at(j), upper);
        const IntegralResult panel = integrate(integrand, lo, hi, panel_cfg);
        converged = converged && panel.converged;
        error += panel.error_estimate;
        running += panel.value;
        last_panel = std::abs(panel.value);
        partial.push_back(running);
        lo = hi;
    }
    // The plain sum is off by about one panel where f is cut; averaging the
    // last partial sums is used when its spread is smaller than that.
    // Acceleration needs a full window of tail panels past the head.
    constexpr std::size_t kWindow = 12;
    double value = running;
    double cut_error = last_panel;
    if (partial.size() > kWindow) {
        double spread = 0.0;
        const double averaged = detail::iterated_average(
            std::vector<double>(partial.end() - static_cast<std::ptrdiff_t>(kWindow), partial.end()), spread);
        if (spread < cut_error) {
            value = averaged;
            cut_error = spread;
        }
    }
    error += cut_error;
    const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
    return {value, error, converged && error <= target, false};
}

/// Log of the non-oscillatory size of the K-integrand of P(I):
/// e^{K/2} e^{-K(alpha^2+beta^2)/4} I0(K(alpha^2-beta^2)/4) times the J0
/// envelope.
inline double kintegrand_log_magnitude(const PhysicalGaussianState& s, double I, double K) {
    const double a2 = s.alpha() * s.alpha();
    const double b2 = s.beta() * s.beta();
    const double arg = 0.25 * K * (a2 - b2);
    double log_mag = 0.5 * K * (1.0 - b2) + std::log(specfun::bessel_i0e(arg));
    const double kernel_arg = 2.0 * std::sqrt(I * K);
    if (kernel_arg > 1.0) log_mag += 0.5 * std::log(2.0 / (std::numbers::pi * kernel_arg));
    return log_mag;
}

/// Growth test: sample the log-magnitude on a geometric grid from K = 50 at
/// ten points per decade, smooth the slope d(log mag)/d(log K) over three
/// neighbours and report growth when it stays positive for two full decades.
inline bool kintegral_grows(const PhysicalGaussianState& s, double I) {
    constexpr int kPerDecade = 10;
    constexpr int kDecades = 10;
    constexpr int kSamples = kPerDecade * kDecades + 1;
    std::vector<double> logk(kSamples);
    std::vector<double> logm(kSamples);
    for (int j = 0; j < kSamples; ++j) {
        const double K = 50.0 * std::pow(10.0, static_cast<double>(j) / kPerDecade);
        logk[static_cast<std::size_t>(j)] = std::log(K);
        logm[static_cast<std::size_t>(j)] = kintegrand_log_magnitude(s, I, K);
    }
    std::vector<double> slope(kSamples - 1);
    for (std::size_t j = 0; j + 1 < logk.size(); ++j) {
        slope[j] = (logm[j + 1] - logm[j]) / (logk[j + 1] - logk[j]);
    }
    int run = 0;
    for (std::size_t j = 1; j + 1 < slope.size(); ++j) {
        const double smoothed = (slope[j - 1] + slope[j] + slope[j + 1]) / 3.0;
        run = smoothed > 0.0 ? run + 1 : 0;
        if (run >= 2 * kPerDecade) return true;
    }
    return false;
}

/// P(I) = int_0^inf dK e^{K/2} J0(2 sqrt(IK)) e^{-K(alpha^2+beta^2)/4}
///        I0(K(alpha^2-beta^2)/4).
/// Converges for beta > 1; for beta < 1 the integrand grows like
/// e^{K(1-beta^2)/2}/sqrt(K) and the result is flagged `diverged`.
inline IntegralResult p_of_I_kintegral(const PhysicalGaussianState& s, double I, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (!(I >= 0.0)) fail(ErrorKind::InvalidArgument, "p_of_I_kintegral: I must be >= 0");
    const double b2 = s.beta() * s.beta();
    if (near_one(s.beta())) {
        fail(ErrorKind::Inconclusive, "p_of_I_kintegral: beta within boundary_eps of 1, growth test inconclusive");
    }
    if (kintegral_grows(s, I)) {
        return {std::numeric_limits<double>::quiet_NaN(), 0.0, false, true};
    }
    const double a2 = s.alpha() * s.alpha();
    const double decay = 0.5 * (b2 - 1.0);
    auto f = [&](double K) { return std::exp(-decay * K) * specfun::bessel_i0e(0.25 * K * (a2 - b2)); };
    const double upper = -cfg.log_cutoff() / decay;
    return fourier_bessel(f, I, upper, cfg);
}

/// Both sides of a definite-integral identity.
struct IdentityCheck {
    IntegralResult lhs;
    IntegralResult rhs;

    double relative_difference() const {
        return std::abs(lhs.value - rhs.value) / std::max(std::abs(rhs.value), std::numeric_limits<double>::min());
    }
};

/// int_0^inf e^{-ax} J0(2 sqrt(bx)) I0(cx) dx
///   = (a^2-c^2)^{-1/2} exp(-ab/(a^2-c^2)) I0(cb/(a^2-c^2)),  a > |c| >= 0, b > 0.
inline IdentityCheck verify_laplace_bessel_i0(double a, double b, double c, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (!(a > std::abs(c)) || !(b > 0.0)) {
        fail(ErrorKind::InvalidArgument, "verify_laplace_bessel_i0: requires a > |c| >= 0 and b > 0");
    }
    const double ac = std::abs(c);
    const double rate = a - ac;
    auto f = [&](double x) { return std::exp(-rate * x) * specfun::bessel_i0e(ac * x); };
    IdentityCheck out;
    out.lhs = fourier_bessel(f, b, -cfg.log_cutoff() / rate, cfg);
    const double d = a * a - c * c;
    const double arg = ac * b / d;
    out.rhs = {std::exp(-a * b / d + arg) * specfun::bessel_i0e(arg) / std::sqrt(d), 0.0, true, false};
    return out;
}

/// int_0^inf e^{-ax} x^n I0(bx) dx = n!/a^{n+1} F((n+1)/2, n/2+1; 1; b^2/a^2),
/// a > |b| >= 0, n <= 50.
inline IdentityCheck verify_hypergeom_moment(double a, double b, int n, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (!(a > std::abs(b)) || n < 0 || n > 50) {
        fail(ErrorKind::InvalidArgument, "verify_hypergeom_moment: requires a > |b| >= 0 and 0 <= n <= 50");
    }
    const double ab = std::abs(b);
    const double rate = a - ab;
    const double peak = n / rate;
    const double shift = n > 0 ? n * std::log(peak) - rate * peak : 0.0;
    auto log_env = [&](double x) { return (n > 0 ? n * std::log(x) : 0.0) - rate * x - shift; };
    auto f = [&](double x) {
        if (x == 0.0) return n == 0 ? specfun::bessel_i0e(0.0) : 0.0;
        return std::exp(log_env(x)) * specfun::bessel_i0e(ab * x);
    };
    const double upper = envelope_cutoff(log_env, std::max(peak, 1.0), cfg.log_cutoff());
    std::vector<double> cuts;
    if (peak > 0.0) {
        for (double frac : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) cuts.push_back(frac * peak);
    }
    IdentityCheck out;
    out.lhs = integrate(f, 0.0, upper, cfg, cuts);
    const double scale = std::exp(shift);
    out.lhs.value *= scale;
    out.lhs.error_estimate *= scale;

    const double z = (b / a) * (b / a);
    const double omz = (a - ab) * (a + ab) / (a * a);
    const specfun::ScaledValue f21 = specfun::gauss_2f1_scaled(0.5 * (n + 1), 0.5 * n + 1.0, 1.0, z, omz);
    const double log_rhs = specfun::log_factorial(n) - (n + 1) * std::log(a) + f21.log_abs();
    out.rhs = {std::exp(log_rhs), 0.0, true, false};
    return out;
}

/// Applies the transform twice: g = FB[f] on [0, f_upper], then FB[g] on
/// [0, g_upper] at each sample point. The transform is its own inverse.
template <class F>
std::vector<IntegralResult> fourier_bessel_round_trip(F&& f, double f_upper, double g_upper,
                                                      std::span<const double> samples,
                                                      const QuadratureConfig& cfg = {}) {
    const QuadratureConfig inner = cfg.tightened(1e-2);
    auto g = [&](double K) { return fourier_bessel(f, K, f_upper, inner).value; };
    std::vector<IntegralResult> out;
    out.reserve(samples.size());
    for (double x : samples) out.push_back(fourier_bessel(g, x, g_upper, cfg));
    return out;
}

}  // namespace gaussnc::oracle
