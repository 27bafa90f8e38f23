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

// Special functions used throughout the library: Bessel J0/J1/I0, associated
// Laguerre polynomials, Gamma at half-integers and the Gauss hypergeometric
// function for real arguments below one.
//
// Everything here is pure; the only static data is the immutable
// log-factorial table, built on first use.

#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gaussnc/error.hpp"

namespace gaussnc {

/// Relative distance from a regime boundary (beta = 1, alpha*beta = 1,
/// z = 1) below which a state is treated as sitting on the boundary.
inline constexpr double kBoundaryEps = 1e-10;

namespace specfun {

struct AccuracyBudget {
    double rel_tol = 1e-10;
    int max_terms = 1000;

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) {
            fail(ErrorKind::InvalidArgument, "accuracy budget: rel_tol must lie in (0, 1e-3]");
        }
        if (max_terms < 50) {
            fail(ErrorKind::InvalidArgument, "accuracy budget: max_terms must be >= 50");
        }
    }
};

namespace detail {

inline void require_finite(double x, const char* who) {
    if (!std::isfinite(x)) {
        fail(ErrorKind::InvalidArgument, std::string(who) + ": argument must be finite");
    }
}

// Hankel asymptotic expansion of J_nu for nu in {0, 1}, truncated at the
// smallest term.
inline double bessel_j_asymptotic(int nu, double x) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 80; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * k * x);
        const double mag = std::abs(term);
        if (mag >= last || mag < 1e-17) break;
        last = mag;
        // k even contributes to P with sign (-1)^(k/2), k odd to Q with (-1)^((k-1)/2).
        const int quarter = (k / 2) % 2;
        const double signed_term = quarter == 0 ? term : -term;
        if (k % 2 == 0) {
            p += signed_term;
        } else {
            q += signed_term;
        }
    }
    const double w = x - (0.5 * nu + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(w) - q * std::sin(w));
}

inline constexpr double kJ0SeriesLimit = 12.0;
inline constexpr double kI0SeriesLimit = 15.0;

// Power series in extended precision; the alternating terms reach ~4e3 at
// the seam so double would lose four digits.
inline double bessel_j0_series(double x) {
    const long double y = static_cast<long double>(x) * x / 4.0L;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= -y / (static_cast<long double>(k) * k);
        sum += term;
        if (k > y && std::abs(term) < 1e-21L) break;
    }
    return static_cast<double>(sum);
}

inline double bessel_j1_series(double x) {
    const long double y = static_cast<long double>(x) * x / 4.0L;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= -y / (static_cast<long double>(k) * (k + 1));
        sum += term;
        if (k > y && std::abs(term) < 1e-21L) break;
    }
    return static_cast<double>(sum * x / 2.0L);
}

inline double bessel_i0_series(double x) {
    const double y = x * x / 4.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= y / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// e^{-x} I0(x) for x > kI0SeriesLimit from the asymptotic series, which has
// all positive terms for order zero.
inline double bessel_i0e_asymptotic(double x) {
    double term = 1.0;
    double sum = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 80; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd / (8.0 * k * x);
        if (term >= last || term < 1e-17 * sum) break;
        last = term;
        sum += term;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

struct SignedLog {
    double log_abs;  // log|value|; -inf for zero
    int sign;        // -1, 0 or +1
};

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

// log|Gamma(x)| and sign via Lanczos (g = 7) plus reflection. sign == 0 marks
// a pole, i.e. 1/Gamma(x) == 0.
inline SignedLog log_gamma_signed(double x) {
    static constexpr std::array<double, 9> kLanczos = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (is_nonpositive_integer(x)) {
        return {std::numeric_limits<double>::infinity(), 0};
    }
    if (x < 0.5) {
        const double s = std::sin(std::numbers::pi * x);
        const SignedLog reflected = log_gamma_signed(1.0 - x);
        return {std::log(std::numbers::pi / std::abs(s)) - reflected.log_abs, s > 0 ? 1 : -1};
    }
    const double xm = x - 1.0;
    double a = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm + static_cast<double>(i));
    const double t = xm + 7.5;
    return {0.5 * std::log(2.0 * std::numbers::pi) + (xm + 0.5) * std::log(t) - t + std::log(a), 1};
}

inline constexpr int kLogFactorialTableSize = 1024;

inline const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
    static const std::array<double, kLogFactorialTableSize> table = [] {
        std::array<double, kLogFactorialTableSize> t{};
        long double acc = 0.0L;
        t[0] = 0.0;
        for (int k = 1; k < kLogFactorialTableSize; ++k) {
            acc += std::log(static_cast<long double>(k));
            t[static_cast<std::size_t>(k)] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

}  // namespace detail

/// log(n!) for 0 <= n < 1024.
inline double log_factorial(int n) {
    if (n < 0 || n >= detail::kLogFactorialTableSize) {
        fail(ErrorKind::InvalidArgument, "log_factorial: n out of range");
    }
    return detail::log_factorial_table()[static_cast<std::size_t>(n)];
}

/// J0(x): extended-precision power series for |x| <= 12, Hankel asymptotic
/// expansion beyond. Even in x.
inline double bessel_j0(double x) {
    detail::require_finite(x, "bessel_j0");
    const double ax = std::abs(x);
    return ax <= detail::kJ0SeriesLimit ? detail::bessel_j0_series(ax)
                                        : detail::bessel_j_asymptotic(0, ax);
}

/// J1(x), odd in x. Same split as bessel_j0.
inline double bessel_j1(double x) {
    detail::require_finite(x, "bessel_j1");
    const double ax = std::abs(x);
    const double v = ax <= detail::kJ0SeriesLimit ? detail::bessel_j1_series(ax)
                                                  : detail::bessel_j_asymptotic(1, ax);
    return x < 0 ? -v : v;
}

/// Exponentially scaled I0: e^{-|x|} I0(x). Never overflows.
inline double bessel_i0e(double x) {
    detail::require_finite(x, "bessel_i0e");
    const double ax = std::abs(x);
    if (ax <= detail::kI0SeriesLimit) return detail::bessel_i0_series(ax) * std::exp(-ax);
    return detail::bessel_i0e_asymptotic(ax);
}

/// I0(x). Throws Overflow once e^{|x|} is no longer representable; integrand
/// code should use bessel_i0e and carry the exponent separately.
inline double bessel_i0(double x) {
    detail::require_finite(x, "bessel_i0");
    const double ax = std::abs(x);
    if (ax <= detail::kI0SeriesLimit) return detail::bessel_i0_series(ax);
    if (ax > 700.0) fail(ErrorKind::Overflow, "bessel_i0: e^|x| exceeds the double range");
    return detail::bessel_i0e_asymptotic(ax) * std::exp(ax);
}

/// s-th positive zero of J0 (s >= 1): McMahon's expansion polished by Newton.
inline double bessel_j0_zero(int s) {
    if (s < 1) fail(ErrorKind::InvalidArgument, "bessel_j0_zero: s must be >= 1");
    const double b = (s - 0.25) * std::numbers::pi;
    const double b2 = b * b;
    double x = b + 1.0 / (8.0 * b) - 31.0 / (384.0 * b * b2) + 3779.0 / (15360.0 * b * b2 * b2);
    for (int it = 0; it < 4; ++it) {
        const double j1 = bessel_j1(x);
        if (j1 == 0.0) break;
        x += bessel_j0(x) / j1;
    }
    return x;
}

/// Fills out[m] = L_m^{(k)}(x) for m = 0 .. out.size()-1 by the three-term
/// recurrence.
inline void laguerre_sequence(int k, double x, std::span<double> out) {
    detail::require_finite(x, "laguerre");
    if (k < 0) fail(ErrorKind::InvalidArgument, "laguerre: k must be >= 0");
    if (out.empty()) return;
    out[0] = 1.0;
    if (out.size() == 1) return;
    out[1] = 1.0 + k - x;
    for (std::size_t m = 1; m + 1 < out.size(); ++m) {
        const double md = static_cast<double>(m);
        out[m + 1] = ((2.0 * md + 1.0 + k - x) * out[m] - (md + k) * out[m - 1]) / (md + 1.0);
    }
}

/// Associated Laguerre polynomial L_n^{(k)}(x), n <= 500.
inline double laguerre(int n, int k, double x) {
    detail::require_finite(x, "laguerre");
    if (n < 0 || n > 500) fail(ErrorKind::InvalidArgument, "laguerre: n must lie in [0, 500]");
    if (k < 0) fail(ErrorKind::InvalidArgument, "laguerre: k must be >= 0");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 + k - x;
    for (int m = 1; m < n; ++m) {
        const double next = ((2.0 * m + 1.0 + k - x) * cur - (m + k) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// log Gamma(m + 1/2) by summing logs of the recurrence factors.
inline double log_gamma_half(int m) {
    if (m < 0) fail(ErrorKind::InvalidArgument, "gamma_half: m must be >= 0");
    long double acc = 0.5L * std::log(std::numbers::pi_v<long double>);
    for (int k = 0; k < m; ++k) acc += std::log(k + 0.5L);
    return static_cast<double>(acc);
}

/// Gamma(m + 1/2) = sqrt(pi) (1/2)(3/2)...(m - 1/2).
inline double gamma_half(int m) {
    if (m < 0 || m > 200) fail(ErrorKind::InvalidArgument, "gamma_half: m must lie in [0, 200]");
    double g = std::sqrt(std::numbers::pi);
    for (int k = 0; k < m; ++k) g *= k + 0.5;
    if (!std::isfinite(g)) fail(ErrorKind::Overflow, "gamma_half: result exceeds the double range");
    return g;
}

/// A value stored as mantissa * exp(log_scale); lets 2F1 carry factors like
/// (1-z)^{-n-1/2} that leave the double range.
struct ScaledValue {
    double mantissa = 0.0;
    double log_scale = 0.0;

    double value() const { return mantissa * std::exp(log_scale); }
    double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
};

namespace detail {

inline ScaledValue add_scaled(ScaledValue a, ScaledValue b) {
    if (a.mantissa == 0.0) return b;
    if (b.mantissa == 0.0) return a;
    const double la = a.log_abs();
    const double lb = b.log_abs();
    const double top = std::max(la, lb);
    const double sa = (a.mantissa > 0 ? 1.0 : -1.0) * std::exp(la - top);
    const double sb = (b.mantissa > 0 ? 1.0 : -1.0) * std::exp(lb - top);
    return {sa + sb, top};
}

// Direct Gauss series sum_k (a)_k (b)_k / ((c)_k k!) z^k. Terminates early
// when a or b is a nonpositive integer.
inline double hyp2f1_series(double a, double b, double c, double z, const AccuracyBudget& budget) {
    double term = 1.0;
    double sum = 1.0;
    double comp = 0.0;
    for (int k = 0; k < budget.max_terms; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        if (term == 0.0) return sum + comp;
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        if (std::abs(term) <= 1e-17 * std::abs(sum + comp)) return sum + comp;
    }
    if (std::abs(term) <= budget.rel_tol * std::abs(sum + comp)) return sum + comp;
    fail(ErrorKind::NonConvergence, "gauss_2f1: series did not converge within max_terms");
}

inline ScaledValue hyp2f1_scaled(double a, double b, double c, double z, double omz,
                                 const AccuracyBudget& budget);

// Linear transformation to 1 - z; valid when c - a - b is not an integer.
inline ScaledValue hyp2f1_one_minus_z(double a, double b, double c, double z, double omz,
                                      const AccuracyBudget& budget) {
    const SignedLog gc = log_gamma_signed(c);
    const SignedLog g_cab = log_gamma_signed(c - a - b);
    const SignedLog g_ca = log_gamma_signed(c - a);
    const SignedLog g_cb = log_gamma_signed(c - b);
    const SignedLog g_abc = log_gamma_signed(a + b - c);
    const SignedLog g_a = log_gamma_signed(a);
    const SignedLog g_b = log_gamma_signed(b);

    ScaledValue first{};
    if (g_ca.sign != 0 && g_cb.sign != 0) {
        const double f = hyp2f1_series(a, b, a + b - c + 1.0, omz, budget);
        first = {gc.sign * g_cab.sign * g_ca.sign * g_cb.sign * f,
                 gc.log_abs + g_cab.log_abs - g_ca.log_abs - g_cb.log_abs};
    }
    ScaledValue second{};
    if (g_a.sign != 0 && g_b.sign != 0) {
        const double f = hyp2f1_series(c - a, c - b, c - a - b + 1.0, omz, budget);
        second = {gc.sign * g_abc.sign * g_a.sign * g_b.sign * f,
                  gc.log_abs + g_abc.log_abs - g_a.log_abs - g_b.log_abs +
                      (c - a - b) * std::log(omz)};
    }
    (void)z;
    return add_scaled(first, second);
}

inline ScaledValue hyp2f1_scaled(double a, double b, double c, double z, double omz,
                                 const AccuracyBudget& budget) {
    if (z == 0.0) return {1.0, 0.0};
    const bool terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if (terminating) return {hyp2f1_series(a, b, c, z, budget), 0.0};
    if (omz < kBoundaryEps && a + b - c >= 0.0) {
        fail(ErrorKind::Divergence, "gauss_2f1: series diverges as z -> 1 (1 - z below boundary_eps)");
    }
    // Euler: F(a,b;c;z) = (1-z)^{c-a-b} F(c-a,c-b;c;z), terminating here.
    if (is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b)) {
        return {hyp2f1_series(c - a, c - b, c, z, budget), (c - a - b) * std::log(omz)};
    }
    // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a,c-b;c;z/(z-1)) maps z < 0 into (0, 1).
    if (z < 0.0) {
        const double zp = z / (z - 1.0);
        ScaledValue inner = hyp2f1_scaled(a, c - b, c, zp, 1.0 / omz, budget);
        inner.log_scale += -a * std::log(omz);
        return inner;
    }
    const double gap = c - a - b;
    if (z <= 0.75 || gap == std::nearbyint(gap)) return {hyp2f1_series(a, b, c, z, budget), 0.0};
    return hyp2f1_one_minus_z(a, b, c, z, omz, budget);
}

inline void check_2f1_args(double a, double b, double c, double z, double omz) {
    require_finite(a, "gauss_2f1");
    require_finite(b, "gauss_2f1");
    require_finite(c, "gauss_2f1");
    require_finite(z, "gauss_2f1");
    if (is_nonpositive_integer(c)) fail(ErrorKind::InvalidArgument, "gauss_2f1: c must not be a nonpositive integer");
    if (!(z < 1.0) || !(omz > 0.0)) fail(ErrorKind::InvalidArgument, "gauss_2f1: argument must satisfy z < 1");
}

}  // namespace detail

/// Gauss hypergeometric 2F1(a, b; c; z) for real z < 1, in scaled form.
/// `one_minus_z` lets callers pass 1 - z computed without cancellation.
inline ScaledValue gauss_2f1_scaled(double a, double b, double c, double z, double one_minus_z,
                                    const AccuracyBudget& budget = {}) {
    budget.validate();
    detail::check_2f1_args(a, b, c, z, one_minus_z);
    return detail::hyp2f1_scaled(a, b, c, z, one_minus_z, budget);
}

inline double gauss_2f1(double a, double b, double c, double z, const AccuracyBudget& budget = {}) {
    const ScaledValue v = gauss_2f1_scaled(a, b, c, z, 1.0 - z, budget);
    const double out = v.value();
    if (!std::isfinite(out)) fail(ErrorKind::Overflow, "gauss_2f1: value exceeds the double range");
    return out;
}

}  // namespace specfun
}  // namespace gaussnc
