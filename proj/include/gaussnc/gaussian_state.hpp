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

// Centered single-mode Gaussian Wigner states
//
//     W(q, p) = sqrt(det G) / pi * exp(-(q p) G (q p)^T),   G = (A B; B C),
//
// their validation (A + C > 0, 0 < det G <= 1), rotation to the normal form
// G = R diag(1/alpha^2, 1/beta^2) R^T with alpha >= beta, classification,
// and the phase-space functions derived from them.

#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

#include "gaussnc/error.hpp"
#include "gaussnc/specfun.hpp"

namespace gaussnc {

struct GMatrix {
    double a = 1.0;  // q-q coefficient
    double b = 0.0;  // cross term
    double c = 1.0;  // p-p coefficient

    double det() const { return a * c - b * b; }
};

/// Rotation-reduced parameters. theta is the angle of the rotation R(theta)
/// whose first column is the alpha eigendirection; R^T G R = diag(1/alpha^2,
/// 1/beta^2).
struct NormalForm {
    double alpha = 1.0;
    double beta = 1.0;
    double theta = 0.0;
};

/// Variance matrix V = G^{-1} / 2.
struct NoiseMatrix {
    double var_q = 0.5;
    double cov_qp = 0.0;
    double var_p = 0.5;

    double det() const { return var_q * var_p - cov_qp * cov_qp; }
};

enum class StateKind { Classical, WeaklyNonclassical, StronglyNonclassical };

constexpr std::string_view to_string(StateKind kind) {
    switch (kind) {
        case StateKind::Classical: return "Classical";
        case StateKind::WeaklyNonclassical: return "WeaklyNonclassical";
        case StateKind::StronglyNonclassical: return "StronglyNonclassical";
    }
    return "Unknown";
}

struct StateClass {
    StateKind kind = StateKind::Classical;
    bool marginal = false;  // beta == 1 or alpha * beta == 1 within kBoundaryEps
};

/// Eigen-decomposition of a positive definite G into the canonical normal
/// form. The isotropic case gets theta = 0.
inline NormalForm normal_form(const GMatrix& g) {
    const double half_trace = 0.5 * (g.a + g.c);
    const double half_diff = 0.5 * (g.a - g.c);
    const double radius = std::hypot(half_diff, g.b);
    const double large = half_trace + radius;
    const double det = g.det();
    if (!(large > 0.0) || !(det > 0.0)) {
        fail(ErrorKind::NotPositive, "normalisability: G must be positive definite");
    }
    const double small = det / large;  // avoids cancellation in half_trace - radius
    NormalForm nf;
    nf.alpha = 1.0 / std::sqrt(small);
    nf.beta = 1.0 / std::sqrt(large);
    if (radius <= 1e-14 * half_trace) {
        nf.theta = 0.0;
    } else {
        double theta = 0.5 * std::atan2(-2.0 * g.b, g.c - g.a);
        if (theta < 0.0) theta += std::numbers::pi;
        if (theta >= std::numbers::pi) theta -= std::numbers::pi;
        nf.theta = theta;
    }
    return nf;
}

class PhysicalGaussianState {
  public:
    /// Checks A + C > 0 and 0 < det G <= 1 (with kBoundaryEps slack on the
    /// upper bound so that rotated minimum-uncertainty states survive
    /// rounding) and caches the normal form.
    static PhysicalGaussianState validate(const GMatrix& g) {
        if (!std::isfinite(g.a) || !std::isfinite(g.b) || !std::isfinite(g.c)) {
            fail(ErrorKind::InvalidArgument, "G matrix entries must be finite");
        }
        const double delta = g.det();
        if (!(g.a + g.c > 0.0) || !(delta > 0.0)) {
            fail(ErrorKind::NotPositive, "normalisability: A + C must be > 0 and det G must be > 0");
        }
        if (delta > 1.0 + kBoundaryEps) {
            fail(ErrorKind::UncertaintyViolated, "uncertainty: det G must be ≤ 1");
        }
        return PhysicalGaussianState(g, delta, normal_form(g));
    }

    /// Diagonal state G = diag(1/alpha^2, 1/beta^2). The normal form keeps
    /// the given values exactly; alpha < beta is stored swapped with
    /// theta = pi/2.
    static PhysicalGaussianState from_alpha_beta(double alpha, double beta) {
        if (!std::isfinite(alpha) || !std::isfinite(beta)) {
            fail(ErrorKind::InvalidArgument, "alpha and beta must be finite");
        }
        if (!(alpha > 0.0) || !(beta > 0.0)) {
            fail(ErrorKind::NotPositive, "normalisability: alpha and beta must be > 0");
        }
        const GMatrix g{1.0 / (alpha * alpha), 0.0, 1.0 / (beta * beta)};
        const double delta = g.a * g.c;
        if (alpha * beta < 1.0 - kBoundaryEps) {
            fail(ErrorKind::UncertaintyViolated, "uncertainty: det G must be ≤ 1");
        }
        const NormalForm nf = alpha >= beta ? NormalForm{alpha, beta, 0.0}
                                            : NormalForm{beta, alpha, 0.5 * std::numbers::pi};
        return PhysicalGaussianState(g, delta, nf);
    }

    const GMatrix& g() const { return g_; }
    double delta() const { return delta_; }
    const NormalForm& normal() const { return normal_; }
    double alpha() const { return normal_.alpha; }
    double beta() const { return normal_.beta; }

  private:
    PhysicalGaussianState(const GMatrix& g, double delta, const NormalForm& nf)
        : g_(g), delta_(delta), normal_(nf) {}

    GMatrix g_;
    double delta_;
    NormalForm normal_;
};

inline PhysicalGaussianState validate(const GMatrix& g) { return PhysicalGaussianState::validate(g); }

/// G conjugated by the rotation R(theta): R G R^T.
inline GMatrix rotated(const GMatrix& g, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // R = (c -s; s c)
    const double m00 = c * g.a - s * g.b;
    const double m01 = c * g.b - s * g.c;
    const double m10 = s * g.a + c * g.b;
    const double m11 = s * g.b + c * g.c;
    return {m00 * c - m01 * s, m00 * s + m01 * c, m10 * s + m11 * c};
}

inline bool near_one(double x) { return std::abs(x - 1.0) <= kBoundaryEps; }

/// Classical iff beta >= 1 - kBoundaryEps. WeaklyNonclassical is never
/// produced for Gaussian states.
inline StateClass classify(const PhysicalGaussianState& s) {
    const double alpha = s.alpha();
    const double beta = s.beta();
    StateClass out;
    out.kind = beta >= 1.0 - kBoundaryEps ? StateKind::Classical : StateKind::StronglyNonclassical;
    out.marginal = near_one(beta) || near_one(alpha * beta);
    return out;
}

/// Normal-frame coordinates u = R(theta)^T (x, y).
inline void to_normal_frame(const PhysicalGaussianState& s, double x, double y, double& u, double& v) {
    const double c = std::cos(s.normal().theta);
    const double sn = std::sin(s.normal().theta);
    u = c * x + sn * y;
    v = -sn * x + c * y;
}

inline double wigner_eval(const PhysicalGaussianState& s, double q, double p) {
    const GMatrix& g = s.g();
    const double quad = g.a * q * q + 2.0 * g.b * q * p + g.c * p * p;
    return std::sqrt(s.delta()) / std::numbers::pi * std::exp(-quad);
}

/// Fourier transform  int dq dp W(q,p) exp(i tau p - i sigma q)
///   = exp(-(C sigma^2 + 2 B sigma tau + A tau^2) / (4 det G)),
/// which is exp(-alpha^2 sigma^2/4 - beta^2 tau^2/4) in the normal frame.
inline double wigner_ft(const PhysicalGaussianState& s, double sigma, double tau) {
    const GMatrix& g = s.g();
    const double quad = g.c * sigma * sigma + 2.0 * g.b * sigma * tau + g.a * tau * tau;
    return std::exp(-quad / (4.0 * s.delta()));
}

/// int_0^{2pi} dchi W(sqrt(2L) cos chi, sqrt(2L) sin chi)
///   = 2/(alpha beta) exp(-L(1/alpha^2 + 1/beta^2)) I0(L(1/alpha^2 - 1/beta^2)).
/// The growth of I0 is cancelled in the exponent.
inline double angular_average(const PhysicalGaussianState& s, double L) {
    if (!(L >= 0.0)) fail(ErrorKind::InvalidArgument, "angular_average: L must be >= 0");
    const double ia = 1.0 / (s.alpha() * s.alpha());
    const double ib = 1.0 / (s.beta() * s.beta());
    const double arg = L * std::abs(ia - ib);
    return 2.0 / (s.alpha() * s.beta()) * std::exp(-L * (ia + ib) + arg) * specfun::bessel_i0e(arg);
}

/// Diagonal coherent-state weight phi at z = (x + i y)/sqrt(2); exists as an
/// ordinary function only for alpha, beta > 1.
inline double phi_density(const PhysicalGaussianState& s, double x, double y) {
    const double alpha = s.alpha();
    const double beta = s.beta();
    if (beta < 1.0 - kBoundaryEps) {
        fail(ErrorKind::DistributionValued,
             "regime: phi is a distribution for beta < 1 (its Fourier transform grows like a Gaussian)");
    }
    if (near_one(alpha) || near_one(beta)) {
        fail(ErrorKind::Marginal,
             near_one(alpha) ? "regime: marginal state alpha = beta = 1, phi = 2 pi delta(x) delta(y)"
                             : "regime: marginal state beta = 1, phi contains delta(y) along the squeezed axis");
    }
    double u = 0.0;
    double v = 0.0;
    to_normal_frame(s, x, y, u, v);
    const double da = alpha * alpha - 1.0;
    const double db = beta * beta - 1.0;
    return 2.0 / std::sqrt(da * db) * std::exp(-u * u / da - v * v / db);
}

inline NoiseMatrix variance_matrix(const PhysicalGaussianState& s) {
    const GMatrix& g = s.g();
    const double k = 1.0 / (2.0 * s.delta());
    return {k * g.c, -k * g.b, k * g.a};
}

/// <a^dagger a> = (var_q + var_p - 1)/2 = (alpha^2 + beta^2 - 2)/4.
inline double mean_photon(const PhysicalGaussianState& s) {
    const double n = (s.alpha() * s.alpha() + s.beta() * s.beta() - 2.0) / 4.0;
    return n < 0.0 ? 0.0 : n;
}

}  // namespace gaussnc
