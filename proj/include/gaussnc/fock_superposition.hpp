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

// Truncated Fock-space superpositions
//
//     |psi> = e^{-|a|^2/2} sum_n a^n / sqrt(n!) e^{i phase(n)} |n>,
//
// whose photon statistics are Poissonian for every phase(n), and their Wigner
// functions via the displaced parity operator.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "gaussnc/error.hpp"
#include "gaussnc/specfun.hpp"

namespace gaussnc::fock {

using Complex = std::complex<double>;

inline constexpr int kMaxCutoff = 400;

/// phase(n) = 0, slope * n, or gamma * n^2.
struct PhaseSpec {
    enum class Kind { Zero, Linear, Quadratic };

    Kind kind = Kind::Zero;
    double parameter = 0.0;

    static PhaseSpec zero() { return {}; }
    static PhaseSpec linear(double slope) { return {Kind::Linear, slope}; }
    static PhaseSpec quadratic(double gamma) {
        if (gamma == 0.0 || !std::isfinite(gamma)) {
            fail(ErrorKind::InvalidArgument, "phase: Quadratic requires a finite gamma != 0");
        }
        return {Kind::Quadratic, gamma};
    }

    double at(int n) const {
        switch (kind) {
            case Kind::Zero: return 0.0;
            case Kind::Linear: return parameter * n;
            case Kind::Quadratic: return parameter * static_cast<double>(n) * n;
        }
        return 0.0;
    }
};

class FockVector {
  public:
    /// Requires sum |c_n|^2 in [1 - 1e-10, 1] up to rounding.
    static FockVector from_coefficients(std::vector<Complex> coeffs) {
        if (coeffs.empty()) fail(ErrorKind::InvalidArgument, "fock: needs at least c_0");
        if (static_cast<int>(coeffs.size()) - 1 > kMaxCutoff) fail(ErrorKind::InvalidArgument, "fock: cutoff exceeds 400");
        double norm = 0.0;
        for (const Complex& c : coeffs) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                fail(ErrorKind::InvalidArgument, "fock: coefficients must be finite");
            }
            norm += std::norm(c);
        }
        if (norm < 1.0 - 1e-10 || norm > 1.0 + 1e-13) {
            fail(ErrorKind::InvalidArgument, "fock: squared norm must lie in [1 - 1e-10, 1]");
        }
        return FockVector(std::move(coeffs));
    }

    const std::vector<Complex>& coeffs() const { return coeffs_; }
    int cutoff() const { return static_cast<int>(coeffs_.size()) - 1; }

  private:
    explicit FockVector(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {}

    std::vector<Complex> coeffs_;
};

/// Cutoff: smallest N whose dropped amplitude norm sqrt(sum_{n>N} e^{-l} l^n/n!)
/// is below t = min(tail_tol, 1e-12), l = |amplitude|^2. Bounding the norm
/// rather than the mass keeps the Wigner error at O(t) instead of O(sqrt(t)).
inline FockVector make_state(Complex amplitude, const PhaseSpec& phase, double tail_tol = 1e-12) {
    const double lambda = std::norm(amplitude);
    if (!std::isfinite(lambda) || lambda > 25.0) fail(ErrorKind::InvalidArgument, "fock: |amplitude|^2 must be <= 25");
    if (!(tail_tol >= 1e-14)) fail(ErrorKind::InvalidArgument, "fock: tail_tol must be >= 1e-14");
    if (phase.kind == PhaseSpec::Kind::Quadratic && phase.parameter == 0.0) {
        fail(ErrorKind::InvalidArgument, "phase: Quadratic requires gamma != 0");
    }
    if (lambda == 0.0) return FockVector::from_coefficients({Complex(1.0, 0.0)});

    const double target = std::min(tail_tol, 1e-12);
    const double mass_target = target * target;
    constexpr int kScan = 2 * kMaxCutoff;
    std::vector<double> poisson(kScan + 1);
    for (int n = 0; n <= kScan; ++n) {
        poisson[static_cast<std::size_t>(n)] = std::exp(-lambda + n * std::log(lambda) - specfun::log_factorial(n));
    }
    std::vector<double> tail(kScan + 2, 0.0);  // tail[n] = sum_{m >= n} poisson[m]
    for (int n = kScan; n >= 0; --n) {
        tail[static_cast<std::size_t>(n)] = tail[static_cast<std::size_t>(n) + 1] + poisson[static_cast<std::size_t>(n)];
    }
    int cutoff = 0;
    while (tail[static_cast<std::size_t>(cutoff) + 1] >= mass_target) {
        if (++cutoff > kMaxCutoff) fail(ErrorKind::InvalidArgument, "fock: cutoff would exceed 400");
    }

    const double log_abs = 0.5 * std::log(lambda);
    const double arg = std::arg(amplitude);
    std::vector<Complex> coeffs(static_cast<std::size_t>(cutoff) + 1);
    for (int n = 0; n <= cutoff; ++n) {
        const double mag = std::exp(-0.5 * lambda + n * log_abs - 0.5 * specfun::log_factorial(n));
        coeffs[static_cast<std::size_t>(n)] = std::polar(mag, n * arg + phase.at(n));
    }
    return FockVector::from_coefficients(std::move(coeffs));
}

inline double pnd(const FockVector& f, int n) {
    if (n < 0 || n > f.cutoff()) fail(ErrorKind::InvalidArgument, "fock: n outside [0, cutoff]");
    return std::norm(f.coeffs()[static_cast<std::size_t>(n)]);
}

struct WignerSample {
    double value = 0.0;
    double displaced_tail = 0.0;  // 1 - sum_m |<m|D(-z)|psi>|^2 over the retained m
    bool cutoff_warning = false;  // displaced_tail > 1e-8
};

namespace detail {

// Number of output Fock levels needed to hold D(-z)|psi>.
inline int displaced_cutoff(int cutoff, double reach) {
    const double extra = reach * reach + 8.0 * reach + 16.0;
    return cutoff + static_cast<int>(std::ceil(extra));
}

}  // namespace detail

/// W(q, p) = (1/pi) sum_m (-1)^m |<m|D(-z)|psi>|^2, z = (q + i p)/sqrt(2),
/// with <m|D(g)|n> = sqrt(n!/m!) g^{m-n} e^{-|g|^2/2} L_n^{(m-n)}(|g|^2) for
/// m >= n and the conjugate-symmetric form otherwise. The normalisation
/// gives 1/pi for the vacuum at the origin.
inline WignerSample wigner_sample(const FockVector& f, double q, double p) {
    const Complex z(q / std::numbers::sqrt2, p / std::numbers::sqrt2);
    if (!(std::abs(z) <= 10.0)) fail(ErrorKind::InvalidArgument, "fock: |z| must be <= 10");
    const std::vector<Complex>& c = f.coeffs();
    const int n_in = f.cutoff();
    const Complex g = -z;
    const double x = std::norm(g);

    double mean_n = 0.0;
    for (int n = 0; n <= n_in; ++n) mean_n += n * std::norm(c[static_cast<std::size_t>(n)]);
    const double amplitude = std::sqrt(mean_n);
    const int m_out = std::min(detail::displaced_cutoff(n_in, amplitude + std::abs(g)), 1000);

    std::vector<Complex> phi(static_cast<std::size_t>(m_out) + 1, Complex(0.0, 0.0));
    if (x == 0.0) {
        for (int n = 0; n <= n_in; ++n) phi[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(n)];
    } else {
        const double log_g = 0.5 * std::log(x);
        const double arg_g = std::arg(g);
        const double arg_neg_conj = std::arg(-std::conj(g));
        std::vector<double> lag;
        // m >= n: offset k = m - n, Laguerre index n.
        for (int k = 0; k <= m_out; ++k) {
            const int len = std::min(n_in, m_out - k) + 1;
            lag.assign(static_cast<std::size_t>(len), 0.0);
            specfun::laguerre_sequence(k, x, lag);
            for (int n = 0; n < len; ++n) {
                const int m = n + k;
                const double log_mag = 0.5 * (specfun::log_factorial(n) - specfun::log_factorial(m)) + k * log_g - 0.5 * x;
                const Complex elem = std::polar(std::exp(log_mag) * lag[static_cast<std::size_t>(n)], k * arg_g);
                phi[static_cast<std::size_t>(m)] += elem * c[static_cast<std::size_t>(n)];
            }
        }
        // m < n: offset k = n - m, Laguerre index m.
        for (int k = 1; k <= n_in; ++k) {
            const int len = n_in - k + 1;
            lag.assign(static_cast<std::size_t>(len), 0.0);
            specfun::laguerre_sequence(k, x, lag);
            for (int m = 0; m < len; ++m) {
                const int n = m + k;
                const double log_mag = 0.5 * (specfun::log_factorial(m) - specfun::log_factorial(n)) + k * log_g - 0.5 * x;
                const Complex elem = std::polar(std::exp(log_mag) * lag[static_cast<std::size_t>(m)], k * arg_neg_conj);
                phi[static_cast<std::size_t>(m)] += elem * c[static_cast<std::size_t>(n)];
            }
        }
    }

    double w = 0.0;
    double mass = 0.0;
    for (int m = 0; m <= m_out; ++m) {
        const double pm = std::norm(phi[static_cast<std::size_t>(m)]);
        w += (m % 2 == 0 ? pm : -pm);
        mass += pm;
    }
    double norm = 0.0;
    for (const Complex& cn : c) norm += std::norm(cn);
    WignerSample out;
    out.value = w / std::numbers::pi;
    out.displaced_tail = std::max(0.0, norm - mass);
    out.cutoff_warning = out.displaced_tail > 1e-8;
    return out;
}

inline double wigner_eval(const FockVector& f, double q, double p) { return wigner_sample(f, q, p).value; }

struct WignerMinimum {
    double value = 0.0;
    double q = 0.0;
    double p = 0.0;
};

/// Grid minimum over [-half_width, half_width]^2, refined by 20 rounds of
/// coordinate descent (golden-section line search along q then p, bracket
/// halved each round).
inline WignerMinimum min_wigner(const FockVector& f, double half_width = 6.0, int grid_points = 101) {
    if (grid_points < 51) fail(ErrorKind::InvalidArgument, "min_wigner: grid_points must be >= 51");
    if (!(half_width > 0.0) || half_width * std::numbers::sqrt2 > 10.0) {
        fail(ErrorKind::InvalidArgument, "min_wigner: half_width must lie in (0, 10/sqrt(2)]");
    }
    const double h = 2.0 * half_width / (grid_points - 1);
    WignerMinimum best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (int i = 0; i < grid_points; ++i) {
        const double q = -half_width + i * h;
        for (int j = 0; j < grid_points; ++j) {
            const double p = -half_width + j * h;
            const double w = wigner_eval(f, q, p);
            if (w < best.value) best = {w, q, p};
        }
    }

    auto clamp = [&](double v) { return std::clamp(v, -half_width, half_width); };
    auto line_min = [&](double center, double radius, auto&& eval) {
        constexpr double kGolden = 0.6180339887498949;
        double lo = clamp(center - radius);
        double hi = clamp(center + radius);
        double x1 = hi - kGolden * (hi - lo);
        double x2 = lo + kGolden * (hi - lo);
        double f1 = eval(x1);
        double f2 = eval(x2);
        for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kGolden * (hi - lo);
                f1 = eval(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kGolden * (hi - lo);
                f2 = eval(x2);
            }
        }
        return f1 < f2 ? std::pair{x1, f1} : std::pair{x2, f2};
    };

    double radius = h;
    for (int round = 0; round < 20; ++round) {
        auto [q, wq] = line_min(best.q, radius, [&](double t) { return wigner_eval(f, t, best.p); });
        if (wq < best.value) best = {wq, q, best.p};
        auto [p, wp] = line_min(best.p, radius, [&](double t) { return wigner_eval(f, best.q, t); });
        if (wp < best.value) best = {wp, best.q, p};
        radius *= 0.5;
    }
    return best;
}

}  // namespace gaussnc::fock
