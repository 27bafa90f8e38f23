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

// Photon statistics of Gaussian states: p(n) in closed form, certified
// finite distributions, the intensity density P(I), the generating function
// q(K) and its inversion, the Q statistic and the local criteria l(n).
//
// Notation used throughout, with a = alpha^2 - 1, b = beta^2 - 1:
//   u = alpha^2 beta^2 - 1,  d = alpha^2 - beta^2,  D = (alpha^2+1)(beta^2+1).

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

#include "gaussnc/error.hpp"
#include "gaussnc/gaussian_state.hpp"
#include "gaussnc/quadrature.hpp"
#include "gaussnc/quadrature_oracle.hpp"
#include "gaussnc/specfun.hpp"

namespace gaussnc::stats {

enum class Regime { Nonsqueezed, Squeezed, MarginalBeta1, SqueezedVacuum };

constexpr std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Nonsqueezed: return "Nonsqueezed";
        case Regime::Squeezed: return "Squeezed";
        case Regime::MarginalBeta1: return "MarginalBeta1";
        case Regime::SqueezedVacuum: return "SqueezedVacuum";
    }
    return "Unknown";
}

inline Regime regime_of(const PhysicalGaussianState& s) {
    if (near_one(s.beta())) return Regime::MarginalBeta1;
    if (s.beta() > 1.0) return Regime::Nonsqueezed;
    return near_one(s.alpha() * s.beta()) ? Regime::SqueezedVacuum : Regime::Squeezed;
}

inline constexpr int kMaxPhotonNumber = 200;
inline constexpr double kNegativeClamp = 1e-14;

namespace detail {

struct StateParams {
    double a;    // alpha^2 - 1
    double b;    // beta^2 - 1
    double u;    // alpha^2 beta^2 - 1
    double d;    // alpha^2 - beta^2
    double ap;   // alpha^2 + 1
    double bp;   // beta^2 + 1
};

inline StateParams params_of(const PhysicalGaussianState& s) {
    const double al = s.alpha();
    const double be = s.beta();
    const double ab = al * be;
    StateParams p{(al - 1.0) * (al + 1.0), (be - 1.0) * (be + 1.0), (ab - 1.0) * (ab + 1.0),
                  (al - be) * (al + be),   al * al + 1.0,           be * be + 1.0};
    for (double x : {p.a, p.b, p.u, p.d, p.ap, p.bp}) {
        if (!std::isfinite(x)) fail(ErrorKind::Overflow, "pnd: alpha, beta outside the representable range");
    }
    return p;
}

inline double clamp_probability(double v, const char* who) {
    if (!std::isfinite(v)) fail(ErrorKind::Overflow, std::string(who) + ": probability not finite");
    if (v >= 0.0) return v;
    if (v > -kNegativeClamp) return 0.0;
    fail(ErrorKind::NegativeProbability, std::string(who) + ": negative probability " + std::to_string(v));
}

// log p(n) for beta > 1:
//   p(n) = 2 (ab)^{-1/2} (ab/u)^{n+1} F((n+1)/2, n/2+1; 1; (d/u)^2).
inline double log_pnd_nonsqueezed(const StateParams& q, int n) {
    const double z = (q.d / q.u) * (q.d / q.u);
    const double omz = (q.a * q.ap) * (q.b * q.bp) / (q.u * q.u);
    const specfun::ScaledValue f = specfun::gauss_2f1_scaled(0.5 * (n + 1), 0.5 * n + 1.0, 1.0, z, omz);
    return std::log(2.0) - 0.5 * (std::log(q.a) + std::log(q.b)) +
           (n + 1) * (std::log(q.a) + std::log(q.b) - std::log(q.u)) + f.log_abs();
}

// log p(n) for beta < 1, alpha beta > 1, with w = (u/d)^2:
//   n = 2m:   2/sqrt(pi) (a|b|)^{n+1/2} d^{-n-1} Gamma(m+1/2)/m! F(m+1/2, m+1/2; 1/2; w)
//   n = 2m+1: 2/sqrt(pi) (a|b|)^{n+1/2} d^{-n-1} 2u/d Gamma(m+3/2)/m! F(m+3/2, m+3/2; 3/2; w)
inline double log_pnd_squeezed(const StateParams& q, int n) {
    const double nb = -q.b;
    const double w = (q.u / q.d) * (q.u / q.d);
    const double omw = (q.a * q.ap) * (nb * q.bp) / (q.d * q.d);
    const int m = n / 2;
    double log_p = std::log(2.0) - 0.5 * std::log(std::numbers::pi) + (n + 0.5) * (std::log(q.a) + std::log(nb)) -
                   (n + 1) * std::log(q.d) - specfun::log_factorial(m);
    if (n % 2 == 0) {
        const specfun::ScaledValue f = specfun::gauss_2f1_scaled(m + 0.5, m + 0.5, 0.5, w, omw);
        log_p += specfun::log_gamma_half(m) + f.log_abs();
    } else {
        const specfun::ScaledValue f = specfun::gauss_2f1_scaled(m + 1.5, m + 1.5, 1.5, w, omw);
        log_p += std::log(2.0) + std::log(q.u) - std::log(q.d) + specfun::log_gamma_half(m + 1) + f.log_abs();
    }
    return log_p;
}

// Terminating Gauss series; one of a, b is a nonpositive integer and every
// term is nonnegative for the arguments used below.
template <class T>
T terminating_2f1(T a, T b, T c, T z) {
    T term = 1;
    T sum = 1;
    for (int k = 0; term != 0 && k < 1000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
        sum += term;
    }
    return sum;
}

// The same closed forms after the Euler transformation
// F(a, b; c; x) = (1-x)^{c-a-b} F(c-a, c-b; c; x), which turns each 2F1 into
// a terminating polynomial with positive coefficients and collapses the
// prefactors to powers of u/D or d/D:
//   beta > 1:  p(n) = 2 u^n D^{-n-1/2} F((1-n)/2, -n/2; 1; (d/u)^2)
//   beta < 1:  p(2m)   = 2 C(2m,m) 4^{-m} d^n D^{-n-1/2} F(-m, -m; 1/2; w)
//              p(2m+1) = 2 (2m+1) C(2m,m) 4^{-m} (u/d) d^n D^{-n-1/2} F(-m, -m; 3/2; w)
// Evaluated in long double. Returns NaN when a factor leaves the double range.
inline long double direct_pnd(double alpha, double beta, int n, bool squeezed) {
    using T = long double;
    const T a2 = static_cast<T>(alpha) * alpha;
    const T b2 = static_cast<T>(beta) * beta;
    const T big_d = (a2 + 1) * (b2 + 1);
    const T u = a2 * b2 - 1;
    const T d = a2 - b2;
    T value = 2 / std::sqrt(big_d);
    if (!squeezed) {
        const T z = (d / u) * (d / u);
        value *= std::pow(u / big_d, n) * terminating_2f1<T>(T(1 - n) / 2, T(-n) / 2, 1, z);
    } else {
        const int m = n / 2;
        const T w = (u / d) * (u / d);
        T central = 1;  // C(2m, m) / 4^m
        for (int k = 1; k <= m; ++k) central *= (k - T(0.5)) / k;
        value *= central * std::pow(d / big_d, n);
        if (n % 2 == 0) {
            value *= terminating_2f1<T>(-m, -m, T(0.5), w);
        } else {
            value *= (2 * m + 1) * (u / d) * terminating_2f1<T>(-m, -m, T(1.5), w);
        }
    }
    const double as_double = static_cast<double>(value);
    if (!std::isfinite(as_double) || (value != 0 && std::abs(as_double) < 1e-280)) {
        return std::numeric_limits<long double>::quiet_NaN();
    }
    return value;
}

// Tight settings for the quadrature fallback on regime boundaries.
inline QuadratureConfig boundary_config() {
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-14;
    cfg.rel_tol = 1e-13;
    cfg.max_subdivisions = 4000;
    return cfg;
}

}  // namespace detail

struct PndEvaluation {
    double value = 0.0;
    long double extended = 0.0L;  // value before rounding to double
    bool extended_precision = false;  // extended carries long double accuracy
    Regime regime = Regime::Nonsqueezed;
    bool via_quadrature = false;
};

/// p(n) with regime routing: closed forms away from the boundaries, the
/// radial quadrature on beta = 1 and alpha beta = 1. The closed forms run
/// in direct arithmetic and fall back to log space only when a factor would
/// under- or overflow.
inline PndEvaluation pnd_evaluate(const PhysicalGaussianState& s, int n) {
    if (n < 0 || n > kMaxPhotonNumber) fail(ErrorKind::InvalidArgument, "pnd: n must lie in [0, 200]");
    PndEvaluation out;
    out.regime = regime_of(s);
    if (out.regime == Regime::MarginalBeta1 || out.regime == Regime::SqueezedVacuum) {
        const IntegralResult r = oracle::radial_pnd(s, n, detail::boundary_config());
        if (!r.converged) fail(ErrorKind::NonConvergence, "pnd: radial quadrature did not converge");
        out.value = detail::clamp_probability(r.value, "pnd");
        out.extended = out.value;
        out.via_quadrature = true;
        return out;
    }
    const detail::StateParams q = detail::params_of(s);
    const bool squeezed = out.regime == Regime::Squeezed;
    const long double direct = detail::direct_pnd(s.alpha(), s.beta(), n, squeezed);
    if (!std::isnan(direct)) {
        out.value = detail::clamp_probability(static_cast<double>(direct), "pnd");
        out.extended = direct;
        out.extended_precision = true;
        return out;
    }
    const double log_p = squeezed ? detail::log_pnd_squeezed(q, n) : detail::log_pnd_nonsqueezed(q, n);
    if (std::isnan(log_p) || log_p == std::numeric_limits<double>::infinity()) {
        fail(ErrorKind::Overflow, "pnd: closed form left the double range");
    }
    out.value = detail::clamp_probability(std::exp(log_p), "pnd");
    out.extended = out.value;
    return out;
}

inline double pnd_closed(const PhysicalGaussianState& s, int n) { return pnd_evaluate(s, n).value; }

/// The explicit expressions for n <= 5, polynomials in u and d over
/// D^{n+1/2}; valid in every regime.
inline double pnd_low_order(const PhysicalGaussianState& s, int n) {
    if (n < 0 || n > 5) fail(ErrorKind::InvalidArgument, "pnd_low_order: n must lie in [0, 5]");
    const detail::StateParams q = detail::params_of(s);
    const double u = q.u;
    const double u2 = u * u;
    const double d2 = q.d * q.d;
    const double big_d = q.ap * q.bp;
    const double scale = std::pow(big_d, -(n + 0.5));
    double poly = 0.0;
    switch (n) {
        case 0: poly = 2.0; break;
        case 1: poly = 2.0 * u; break;
        case 2: poly = d2 + 2.0 * u2; break;
        case 3: poly = u * (3.0 * d2 + 2.0 * u2); break;
        case 4: poly = 0.25 * (3.0 * d2 * d2 + 24.0 * d2 * u2 + 8.0 * u2 * u2); break;
        case 5: poly = 0.25 * u * (15.0 * d2 * d2 + 40.0 * d2 * u2 + 8.0 * u2 * u2); break;
    }
    return detail::clamp_probability(poly * scale, "pnd_low_order");
}

/// Probability generating function sum_n p(n) t^n
///   = 2 / sqrt((alpha^2 + 1 - t a)(beta^2 + 1 - t b)),
/// finite for 0 <= t < radius.
inline double pgf(const PhysicalGaussianState& s, double t) {
    const detail::StateParams q = detail::params_of(s);
    const double fa = q.ap - t * q.a;
    const double fb = q.bp - t * q.b;
    if (!(fa > 0.0) || !(fb > 0.0)) fail(ErrorKind::InvalidArgument, "pgf: t outside the radius of convergence");
    return 2.0 / std::sqrt(fa * fb);
}

/// Smallest positive singularity of the generating function (infinity for
/// the vacuum).
inline double pgf_radius(const PhysicalGaussianState& s) {
    const detail::StateParams q = detail::params_of(s);
    double r = std::numeric_limits<double>::infinity();
    if (q.a > 0.0) r = std::min(r, q.ap / q.a);
    if (q.b > 0.0) r = std::min(r, q.bp / q.b);
    return r;
}

struct TailBound {
    double probability = 0.0;  // bound on sum_{n > n_max} p(n)
    double mean = 0.0;         // bound on sum_{n > n_max} n p(n)
};

/// Since p(n) >= 0, p(n) <= G(t) t^{-n} for every 1 < t < radius; summing
/// the geometric envelope and minimising over t gives a rigorous bound.
inline TailBound tail_bound(const PhysicalGaussianState& s, int n_max) {
    const double radius = pgf_radius(s);
    if (!std::isfinite(radius)) return {0.0, 0.0};
    const double m = n_max + 1.0;
    auto log_bound = [&](double t) {
        return std::log(pgf(s, t)) - n_max * std::log(t) - std::log(t - 1.0);
    };
    // log_bound is convex in t; golden-section search on (1, radius).
    constexpr double kGolden = 0.6180339887498949;
    double lo = 1.0;
    double hi = radius;
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = log_bound(x1);
    double f2 = log_bound(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = log_bound(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = log_bound(x2);
        }
    }
    const double t = f1 < f2 ? x1 : x2;
    const double x = 1.0 / t;
    const double g = pgf(s, t);
    TailBound out;
    out.probability = std::exp(std::min(f1, f2));
    // sum_{n >= m} n x^n = x^m (m - (m - 1) x) / (1 - x)^2
    out.mean = g * std::exp(m * std::log(x)) * (m - (m - 1.0) * x) / ((1.0 - x) * (1.0 - x));
    return out;
}

/// p(0..n_max) with a bound on the omitted tail. Immutable. Alongside the
/// double values it keeps the long double values they were rounded from, so
/// that alternating sums over the distribution (q_generating) lose less.
class PhotonDistribution {
  public:
    /// Negative entries above -1e-14 are clamped to zero; the total
    /// sum + tail must be 1 to within 1e-8.
    static PhotonDistribution from_probabilities(std::vector<double> probs, double tail) {
        std::vector<long double> wide(probs.begin(), probs.end());
        return from_extended(std::move(wide), tail, std::numeric_limits<double>::epsilon());
    }

    /// As above from long double values; entry n carries relative accuracy
    /// precision + per_order * n.
    static PhotonDistribution from_extended(std::vector<long double> wide, double tail, double precision,
                                            double per_order = 0.0) {
        if (wide.empty()) fail(ErrorKind::InvalidArgument, "distribution: needs at least p(0)");
        if (!(tail >= 0.0) || !std::isfinite(tail)) {
            fail(ErrorKind::InvalidArgument, "distribution: tail bound must be finite and >= 0");
        }
        std::vector<double> probs(wide.size());
        for (std::size_t i = 0; i < wide.size(); ++i) {
            probs[i] = detail::clamp_probability(static_cast<double>(wide[i]), "distribution");
            if (probs[i] == 0.0) wide[i] = 0.0L;
        }
        const double total = gaussnc::detail::neumaier_sum(probs) + tail;
        if (std::abs(total - 1.0) > 1e-8) {
            fail(ErrorKind::InvalidArgument, "distribution: probabilities plus tail must sum to 1 within 1e-8");
        }
        return PhotonDistribution(std::move(probs), std::move(wide), tail, precision, per_order);
    }

    const std::vector<double>& probs() const { return probs_; }
    const std::vector<long double>& extended_probs() const { return wide_; }
    /// Relative accuracy of extended_probs()[n].
    double precision(int n) const { return precision_ + per_order_ * n; }
    /// Worst case over the stored entries.
    double precision() const { return precision(n_max()); }
    int n_max() const { return static_cast<int>(probs_.size()) - 1; }
    double tail_bound() const { return tail_; }
    double p(int n) const {
        if (n < 0 || n > n_max()) fail(ErrorKind::InvalidArgument, "distribution: n outside [0, n_max]");
        return probs_[static_cast<std::size_t>(n)];
    }

  private:
    PhotonDistribution(std::vector<double> probs, std::vector<long double> wide, double tail, double precision,
                       double per_order)
        : probs_(std::move(probs)), wide_(std::move(wide)), tail_(tail), precision_(precision), per_order_(per_order) {}

    std::vector<double> probs_;
    std::vector<long double> wide_;
    double tail_;
    double precision_;
    double per_order_;
};

namespace detail {

// p(0..n) accumulated one term at a time, with the compensated remainder
// 1 - sum p(k). Since the full distribution sums to exactly 1, the remainder
// is the tail itself; when every p(k) carries long double accuracy it is a
// far tighter bound than the generating-function envelope.
class DistributionBuilder {
  public:
    explicit DistributionBuilder(const PhysicalGaussianState& s) : s_(s) {}

    void extend() {
        const int n = static_cast<int>(wide_.size());
        const PndEvaluation e = pnd_evaluate(s_, n);
        all_extended_ = all_extended_ && e.extended_precision;
        wide_.push_back(e.extended);
        weighted_.push_back(n * e.value);
        const long double t = sum_ + e.extended;
        comp_ += std::abs(sum_) >= std::abs(e.extended) ? (sum_ - t) + e.extended : (e.extended - t) + sum_;
        sum_ = t;
    }

    int n_max() const { return static_cast<int>(wide_.size()) - 1; }

    // The power and terminating sum lose about one long double ulp per order.
    double per_order() const { return all_extended_ ? 8.0 * std::numeric_limits<long double>::epsilon() : 0.0; }
    double precision() const {
        return all_extended_ ? per_order() : std::numeric_limits<double>::epsilon();
    }

    /// Tail bound: the smaller of the envelope bound and the remainder plus
    /// its rounding slack (used only when the terms are long double accurate).
    TailBound tail() const {
        TailBound bound = tail_bound(s_, n_max());
        if (all_extended_) {
            const long double rest = 1.0L - (sum_ + comp_);
            const double slack = 4.0 * (n_max() + 1) * (precision() + per_order() * n_max());
            const double remainder = static_cast<double>(std::max(rest, 0.0L)) + slack;
            bound.probability = std::min(bound.probability, remainder);
        }
        return bound;
    }

    PhotonDistribution finish() && {
        const TailBound bound = tail();
        const double mean = gaussnc::detail::neumaier_sum(weighted_);
        const double expected = mean_photon(s_);
        if (std::abs(mean - expected) > 1e-8 * std::max(1.0, expected) + bound.mean) {
            fail(ErrorKind::NonConvergence, "distribution: mean photon number check failed");
        }
        return PhotonDistribution::from_extended(std::move(wide_), bound.probability, precision(), per_order());
    }

  private:
    const PhysicalGaussianState& s_;
    std::vector<long double> wide_;
    std::vector<double> weighted_;
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
    bool all_extended_ = true;
};

}  // namespace detail

/// p(0..n_max) with a rigorous tail bound for that cut.
inline PhotonDistribution truncated_distribution(const PhysicalGaussianState& s, int n_max) {
    if (n_max < 0 || n_max > kMaxPhotonNumber) {
        fail(ErrorKind::InvalidArgument, "truncated_distribution: n_max must lie in [0, 200]");
    }
    detail::DistributionBuilder b(s);
    for (int n = 0; n <= n_max; ++n) b.extend();
    return std::move(b).finish();
}

/// p(0..N_max) with N_max the first cut whose tail bound meets target_tail.
/// The mean sum n p(n) must reproduce mean_photon(s).
inline PhotonDistribution full_distribution(const PhysicalGaussianState& s, double target_tail) {
    if (!(target_tail >= 1e-14 && target_tail <= 1e-4)) {
        fail(ErrorKind::InvalidArgument, "full_distribution: target_tail must lie in [1e-14, 1e-4]");
    }
    if (near_one(s.alpha()) && near_one(s.beta())) {
        return PhotonDistribution::from_probabilities({1.0}, 0.0);
    }
    detail::DistributionBuilder b(s);
    b.extend();
    while (b.tail().probability > target_tail) {
        if (b.n_max() + 1 > kMaxPhotonNumber) {
            fail(ErrorKind::NonConvergence, "full_distribution: tail not certified within n = 200");
        }
        b.extend();
    }
    return std::move(b).finish();
}

/// P(I) = 2 (ab)^{-1/2} exp[-I(1/a + 1/b)] I0[I(1/a - 1/b)] for alpha, beta > 1.
inline double p_of_I(const PhysicalGaussianState& s, double I) {
    if (!(I >= 0.0)) fail(ErrorKind::InvalidArgument, "p_of_I: I must be >= 0");
    if (s.beta() < 1.0 - kBoundaryEps) {
        fail(ErrorKind::DistributionValued, "regime: P(I) is a distribution for beta < 1, not a function");
    }
    if (near_one(s.alpha()) || near_one(s.beta())) {
        fail(ErrorKind::Marginal, "regime: P(I) contains a delta function for alpha = 1 or beta = 1");
    }
    const detail::StateParams q = detail::params_of(s);
    const double ia = 1.0 / q.a;
    const double ib = 1.0 / q.b;
    const double arg = I * std::abs(ia - ib);
    return 2.0 / std::sqrt(q.a * q.b) * std::exp(-I * (ia + ib) + arg) * specfun::bessel_i0e(arg);
}

/// p(n) = int_0^inf P(I) e^{-I} I^n / n! dI by quadrature.
inline double pnd_from_p_of_I(const PhysicalGaussianState& s, int n, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (n < 0 || n > kMaxPhotonNumber) fail(ErrorKind::InvalidArgument, "pnd_from_p_of_I: n must lie in [0, 200]");
    (void)p_of_I(s, 0.0);  // regime checks
    const detail::StateParams q = detail::params_of(s);
    // P(I) e^{-I} <= 2 (ab)^{-1/2} exp(-I (alpha^2 + 1)/(alpha^2 - 1))
    const double rate = q.ap / q.a;
    const double log_norm = std::log(2.0) - 0.5 * std::log(q.a * q.b) - specfun::log_factorial(n);
    auto log_env = [&](double I) { return log_norm - rate * I + (n > 0 ? n * std::log(I) : 0.0); };
    auto integrand = [&](double I) {
        if (I == 0.0) return n == 0 ? p_of_I(s, 0.0) : 0.0;
        return p_of_I(s, I) * std::exp(-I + n * std::log(I) - specfun::log_factorial(n));
    };
    const double peak = n / rate;
    const double upper = envelope_cutoff(log_env, std::max(peak, 1.0), cfg.log_cutoff());
    std::vector<double> cuts;
    if (peak > 0.0) {
        for (double frac : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) cuts.push_back(frac * peak);
    }
    const IntegralResult r = integrate(integrand, 0.0, upper, cfg, cuts);
    if (!r.converged) fail(ErrorKind::NonConvergence, "pnd_from_p_of_I: quadrature did not converge");
    return r.value;
}

struct GeneratingValue {
    double value = 0.0;
    double error_bound = 0.0;
    bool cancellation_warning = false;  // K > 4 N_max: terms grow before decaying
};

/// q(K) = sum_n (-K)^n p(n) / n!, compensated. The error bound covers the
/// omitted tail and rounding in the alternating sum.
inline GeneratingValue q_generating(const PhotonDistribution& d, double K) {
    if (!(K >= 0.0) || !std::isfinite(K)) fail(ErrorKind::InvalidArgument, "q_generating: K must be finite and >= 0");
    if (d.tail_bound() > 1e-10) {
        fail(ErrorKind::InvalidArgument, "q_generating: distribution tail bound must be <= 1e-10");
    }
    // Long double weights K^n/n! built by recurrence; the accuracy of the
    // stored p(n) then dominates the rounding.
    long double weight = 1.0L;
    long double sum = 0.0L;
    long double comp = 0.0L;
    long double rounding = 0.0L;  // sum of precision(n) |term_n|
    double remaining = 1.0 + d.tail_bound();  // probability mass not yet added
    int n = 0;
    for (; n <= d.n_max(); ++n) {
        if (n > 0) weight *= static_cast<long double>(K) / n;
        if (!std::isfinite(static_cast<double>(weight))) fail(ErrorKind::Overflow, "q_generating: K^n/n! overflows");
        // Past the peak of K^n/n! the rest is bounded by weight * remaining.
        if (n > K && static_cast<double>(weight) * remaining <= 0.25 * static_cast<double>(rounding)) break;
        const long double pn = d.extended_probs()[static_cast<std::size_t>(n)];
        const long double term = (n % 2 == 0 ? 1.0L : -1.0L) * pn * weight;
        const long double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        rounding += d.precision(n) * std::abs(term);
        remaining -= static_cast<double>(pn);
    }
    GeneratingValue out;
    out.value = static_cast<double>(sum + comp);
    const int m = d.n_max() + 1;
    const double peak_weight =
        K < m ? std::exp(m * std::log(K) - specfun::log_factorial(m)) : std::exp(K);
    const double err = static_cast<double>(rounding);
    const double truncation = n <= d.n_max() ? err : d.tail_bound() * peak_weight;
    out.error_bound = truncation + 4.0 * err;
    out.cancellation_warning = K > 4.0 * d.n_max();
    return out;
}

/// Relative accuracy targeted by p_of_I_inversion.
inline constexpr double kInversionTolerance = 1e-4;

/// P(I) = e^I int_0^inf q(K) J0(2 sqrt(IK)) dK for classical fixtures. The
/// K-integral stops where the rounding bound of q reaches |q|; fails with
/// NonConvergence when the dropped oscillatory tail is not negligible.
inline double p_of_I_inversion(const PhotonDistribution& d, double I, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    if (!(I >= 0.0)) fail(ErrorKind::InvalidArgument, "p_of_I_inversion: I must be >= 0");
    constexpr double kStep = 0.25;
    double k_cut = kStep;
    GeneratingValue at_cut = q_generating(d, k_cut);
    while (std::abs(at_cut.value) > at_cut.error_bound) {
        k_cut += kStep;
        at_cut = q_generating(d, k_cut);
        if (k_cut > 4.0 * d.n_max() + 50.0) {
            fail(ErrorKind::NonConvergence, "p_of_I_inversion: generating function does not decay");
        }
    }
    auto q = [&](double K) { return q_generating(d, K).value; };
    const IntegralResult body = oracle::fourier_bessel(q, I, k_cut, cfg);
    if (!body.converged) fail(ErrorKind::NonConvergence, "p_of_I_inversion: K-integral did not converge");

    // Dropped tail: |q| keeps the decay rate it shows over the last stretch
    // where it is resolved, times the J0 envelope at the cut.
    const double k2 = std::max(0.5 * k_cut, k_cut - 4.0);
    const double k1 = std::max(0.0, k2 - 4.0);
    const double q1 = std::abs(q_generating(d, k1).value);
    const double q2 = std::abs(q_generating(d, k2).value);
    const double decay = q1 > q2 && q2 > 0.0 && k2 > k1 ? std::log(q1 / q2) / (k2 - k1) : 0.0;
    const double q_cut = std::abs(at_cut.value) + at_cut.error_bound;
    const double kernel = 2.0 * std::sqrt(I * k_cut);
    const double envelope = kernel > 1.0 ? std::sqrt(2.0 / (std::numbers::pi * kernel)) : 1.0;
    const double value = std::exp(I) * body.value;
    const double dropped = decay > 0.0 ? std::exp(I) * q_cut * envelope / decay
                                       : std::numeric_limits<double>::infinity();
    if (dropped > std::max(cfg.abs_tol, kInversionTolerance * std::abs(value))) {
        fail(ErrorKind::NonConvergence, "p_of_I_inversion: truncated K-integral oscillation amplitude did not decay");
    }
    return value;
}

/// 2{(alpha^2-1)^2 + (beta^2-1)^2} / (alpha^2 + beta^2 - 2)^2.
inline double mandel_q(const PhysicalGaussianState& s) {
    const detail::StateParams q = detail::params_of(s);
    const double sum = q.a + q.b;
    if (sum <= kBoundaryEps) fail(ErrorKind::VacuumDegenerate, "mandel_q: undefined for the vacuum (0/0)");
    return 2.0 * (q.a * q.a + q.b * q.b) / (sum * sum);
}

/// (sum n(n-1) p(n) - N^2) / N^2 with N = sum n p(n), from p(0..n_max). The
/// cut must leave a tail below 1e-12.
inline double moment_ratio_oracle(const PhysicalGaussianState& s, int n_max) {
    if (n_max < 2 || n_max > kMaxPhotonNumber) {
        fail(ErrorKind::InvalidArgument, "moment_ratio_oracle: n_max must lie in [2, 200]");
    }
    if (tail_bound(s, n_max).probability > 1e-12) {
        fail(ErrorKind::InvalidArgument, "moment_ratio_oracle: tail beyond n_max is not below 1e-12");
    }
    std::vector<double> first;
    std::vector<double> second;
    for (int n = 0; n <= n_max; ++n) {
        const double p = pnd_closed(s, n);
        first.push_back(n * p);
        second.push_back(n * (n - 1.0) * p);
    }
    const double mean = gaussnc::detail::neumaier_sum(first);
    const double factorial2 = gaussnc::detail::neumaier_sum(second);
    if (!(mean > 0.0)) fail(ErrorKind::VacuumDegenerate, "moment_ratio_oracle: zero mean photon number");
    return (factorial2 - mean * mean) / (mean * mean);
}

/// l(n) = (n+1) p(n-1) p(n+1) - n p(n)^2.
inline double l_criterion(const PhotonDistribution& d, int n) {
    if (n < 1 || n + 1 > d.n_max()) fail(ErrorKind::InvalidArgument, "l_criterion: requires 1 <= n and n + 1 <= n_max");
    return (n + 1) * d.p(n - 1) * d.p(n + 1) - n * d.p(n) * d.p(n);
}

}  // namespace gaussnc::stats
