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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace gaussnc {
namespace {

using std::numbers::pi;
using testing::rel_diff;

// Iterated adaptive quadrature over a box.
template <class F>
double integrate_box(F&& f, double lo, double hi, double tol) {
    QuadratureConfig cfg;
    cfg.abs_tol = tol;
    cfg.rel_tol = tol;
    cfg.max_subdivisions = 4000;
    QuadratureConfig inner = cfg.tightened(1e-2);
    const IntegralResult r = integrate(
        [&](double q) {
            return integrate([&](double p) { return f(q, p); }, lo, hi, inner).value;
        },
        lo, hi, cfg);
    EXPECT_TRUE(r.converged);
    return r.value;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::InvalidArgument;
}

TEST(Validate, Examples) {
    const auto vac = validate({1.0, 0.0, 1.0});
    EXPECT_EQ(vac.delta(), 1.0);
    EXPECT_EQ(vac.alpha(), 1.0);
    EXPECT_EQ(vac.beta(), 1.0);
    const auto th = validate({0.25, 0.0, 0.25});
    EXPECT_DOUBLE_EQ(th.delta(), 1.0 / 16.0);
    EXPECT_DOUBLE_EQ(th.alpha(), 2.0);
    EXPECT_DOUBLE_EQ(th.beta(), 2.0);
    EXPECT_EQ(kind_of([] { validate({4.0, 0.0, 4.0}); }), ErrorKind::UncertaintyViolated);
}

TEST(Validate, Rejections) {
    EXPECT_EQ(kind_of([] { validate({-1.0, 0.0, -1.0}); }), ErrorKind::NotPositive);
    EXPECT_EQ(kind_of([] { validate({1.0, 2.0, 1.0}); }), ErrorKind::NotPositive);
    EXPECT_EQ(kind_of([] { validate({1.0, 0.0, 0.0}); }), ErrorKind::NotPositive);
    EXPECT_EQ(kind_of([] { validate({std::nan(""), 0.0, 1.0}); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { PhysicalGaussianState::from_alpha_beta(0.5, 1.0); }), ErrorKind::UncertaintyViolated);
    EXPECT_EQ(kind_of([] { PhysicalGaussianState::from_alpha_beta(0.0, 1.0); }), ErrorKind::NotPositive);
    // rotated minimum-uncertainty state survives rounding
    EXPECT_NO_THROW(validate(testing::gmatrix_of(2.0, 0.5, 0.3)));
}

TEST(NormalForm, Examples) {
    const NormalForm d = normal_form({0.25, 0.0, 4.0});
    EXPECT_DOUBLE_EQ(d.alpha, 2.0);
    EXPECT_DOUBLE_EQ(d.beta, 0.5);
    EXPECT_EQ(d.theta, 0.0);

    const double t = pi / 6.0;
    const NormalForm r = normal_form(testing::gmatrix_of(2.0, 0.5, t));
    EXPECT_NEAR(r.alpha, 2.0, 1e-12);
    EXPECT_NEAR(r.beta, 0.5, 1e-12);
    EXPECT_NEAR(r.theta, t, 1e-12);

    const NormalForm v = normal_form({1.0, 0.0, 1.0});
    EXPECT_EQ(v.alpha, 1.0);
    EXPECT_EQ(v.beta, 1.0);
    EXPECT_EQ(v.theta, 0.0);
}

TEST(NormalForm, ReconstructionRandom) {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 500; ++i) {
        const auto smp = testing::sample_normal_form(rng, 0.2, 5.0, 2.0);
        const GMatrix g = testing::gmatrix_of(smp.alpha, smp.beta, smp.theta);
        const NormalForm nf = normal_form(g);
        EXPECT_GE(nf.alpha, nf.beta);
        EXPECT_GE(nf.theta, 0.0);
        EXPECT_LT(nf.theta, pi);
        // R^T G R = diag(1/alpha^2, 1/beta^2)
        const GMatrix back = rotated(g, -nf.theta);
        const double scale = std::max(std::abs(g.a), std::abs(g.c));
        EXPECT_NEAR(back.a, 1.0 / (nf.alpha * nf.alpha), 1e-12 * scale);
        EXPECT_NEAR(back.b, 0.0, 1e-12 * scale);
        EXPECT_NEAR(back.c, 1.0 / (nf.beta * nf.beta), 1e-12 * scale);
    }
}

TEST(Classify, Examples) {
    const double r3 = std::sqrt(3.0);
    EXPECT_EQ(classify(PhysicalGaussianState::from_alpha_beta(r3, r3)).kind, StateKind::Classical);
    const StateClass sq = classify(PhysicalGaussianState::from_alpha_beta(2.0, 0.8));
    EXPECT_EQ(sq.kind, StateKind::StronglyNonclassical);
    EXPECT_FALSE(sq.marginal);
    const StateClass sv = classify(PhysicalGaussianState::from_alpha_beta(2.0, 0.5));
    EXPECT_EQ(sv.kind, StateKind::StronglyNonclassical);
    EXPECT_TRUE(sv.marginal);
    const StateClass b1 = classify(PhysicalGaussianState::from_alpha_beta(2.0, 1.0 - 1e-12));
    EXPECT_EQ(b1.kind, StateKind::Classical);
    EXPECT_TRUE(b1.marginal);
}

TEST(Classify, NeverWeaklyNonclassical) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ud(0.01, 20.0);
    std::uniform_real_distribution<double> ub(-1.0, 1.0);
    int checked = 0;
    while (checked < 10000) {
        const double a = ud(rng);
        const double c = ud(rng);
        const double b = ub(rng) * std::sqrt(a * c);
        const GMatrix g{a, b, c};
        if (!(g.det() > 0.0) || g.det() > 1.0) continue;
        const auto s = validate(g);
        const StateClass cls = classify(s);
        EXPECT_NE(cls.kind, StateKind::WeaklyNonclassical);
        // beta from the largest eigenvalue, computed independently
        const long double tr = static_cast<long double>(a) + c;
        const long double disc = std::sqrt((static_cast<long double>(a) - c) * (a - c) + 4.0L * b * b);
        const double beta = static_cast<double>(1.0L / std::sqrt(0.5L * (tr + disc)));
        EXPECT_EQ(cls.kind == StateKind::Classical, beta >= 1.0) << a << ' ' << b << ' ' << c;
        ++checked;
    }
}

TEST(WignerEval, Examples) {
    EXPECT_DOUBLE_EQ(wigner_eval(validate({1, 0, 1}), 0.0, 0.0), 1.0 / pi);
    EXPECT_DOUBLE_EQ(wigner_eval(PhysicalGaussianState::from_alpha_beta(2.0, 0.5), 0.0, 0.0), 1.0 / pi);
    const double r3 = std::sqrt(3.0);
    EXPECT_LE(rel_diff(wigner_eval(PhysicalGaussianState::from_alpha_beta(r3, r3), 1.0, 1.0),
                       std::exp(-2.0 / 3.0) / (3.0 * pi)),
              1e-15);
}

TEST(WignerEval, NormalisedForRandomStates) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto smp = testing::sample_normal_form(rng, 0.4, 2.5, 0.8);
        const auto s = validate(testing::gmatrix_of(smp.alpha, smp.beta, smp.theta));
        const double half = 7.0 * s.alpha();
        const double total = integrate_box([&](double q, double p) { return wigner_eval(s, q, p); }, -half, half, 1e-11);
        EXPECT_NEAR(total, 1.0, 1e-8) << smp.alpha << ' ' << smp.beta;
    }
}

TEST(WignerFt, Examples) {
    EXPECT_EQ(wigner_ft(PhysicalGaussianState::from_alpha_beta(2.0, 0.7), 0.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(wigner_ft(PhysicalGaussianState::from_alpha_beta(2.0, 1.0), 1.0, 0.0), std::exp(-1.0));
    EXPECT_DOUBLE_EQ(wigner_ft(validate({1, 0, 1}), 2.0, 0.0), std::exp(-1.0));
}

TEST(WignerFt, MatchesNumericFourierTransform) {
    const auto s = validate(testing::gmatrix_of(1.6, 0.8, 0.4));
    for (auto [sigma, tau] : {std::pair{1.0, 0.0}, {0.3, -0.7}, {1.2, 0.9}}) {
        const double half = 7.0 * s.alpha();
        // imaginary part vanishes by symmetry W(-q,-p) = W(q,p)
        const double re = integrate_box([&](double q, double p) { return wigner_eval(s, q, p) * std::cos(tau * p - sigma * q); },
                                        -half, half, 1e-11);
        EXPECT_NEAR(re, wigner_ft(s, sigma, tau), 1e-8);
    }
}

TEST(AngularAverage, Examples) {
    const double r3 = std::sqrt(3.0);
    const auto th = PhysicalGaussianState::from_alpha_beta(r3, r3);
    EXPECT_DOUBLE_EQ(angular_average(th, 0.0), 2.0 / 3.0);
    EXPECT_LE(rel_diff(angular_average(th, 3.0), 2.0 / 3.0 * std::exp(-2.0)), 1e-14);
    const auto sv = PhysicalGaussianState::from_alpha_beta(2.0, 0.5);
    EXPECT_DOUBLE_EQ(angular_average(sv, 0.0), 2.0);
    EXPECT_THROW(angular_average(sv, -1.0), Error);
}

TEST(AngularAverage, MatchesTrapezoidOverAngle) {
    // Trapezoid is spectrally accurate for periodic integrands.
    auto trapezoid = [](const PhysicalGaussianState& s, double L) {
        const int m = 4000;
        const double r = std::sqrt(2.0 * L);
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            const double chi = 2.0 * pi * j / m;
            acc += wigner_eval(s, r * std::cos(chi), r * std::sin(chi));
        }
        return acc * 2.0 * pi / m;
    };
    const auto sv = PhysicalGaussianState::from_alpha_beta(2.0, 0.5);
    EXPECT_NEAR(angular_average(sv, 1.0), trapezoid(sv, 1.0), 1e-10);
    const auto rot = validate(testing::gmatrix_of(3.0, 0.6, 1.1));
    for (double L : {0.1, 0.7, 2.5, 9.0}) EXPECT_NEAR(angular_average(rot, L), trapezoid(rot, L), 1e-10) << L;
}

TEST(PhiDensity, ExamplesAndRegimes) {
    const double r3 = std::sqrt(3.0);
    EXPECT_DOUBLE_EQ(phi_density(PhysicalGaussianState::from_alpha_beta(r3, r3), 0.0, 0.0), 1.0);
    EXPECT_EQ(kind_of([] { phi_density(PhysicalGaussianState::from_alpha_beta(2.0, 0.9), 0.0, 0.0); }),
              ErrorKind::DistributionValued);
    EXPECT_EQ(kind_of([&] { phi_density(PhysicalGaussianState::from_alpha_beta(1.0, r3), 0.0, 0.0); }), ErrorKind::Marginal);
    EXPECT_EQ(kind_of([] { phi_density(PhysicalGaussianState::from_alpha_beta(2.0, 1.0), 0.0, 0.0); }), ErrorKind::Marginal);
    EXPECT_EQ(kind_of([] { phi_density(validate({1, 0, 1}), 0.0, 0.0); }), ErrorKind::Marginal);
}

TEST(PhiDensity, NormalisedAndSmoothsToWigner) {
    const auto s = validate(testing::gmatrix_of(2.2, 1.4, 0.7));
    const double half = 9.0 * s.alpha();
    const double mass = integrate_box([&](double x, double y) { return phi_density(s, x, y); }, -half, half, 1e-11) / (2.0 * pi);
    EXPECT_NEAR(mass, 1.0, 1e-8);
    // W(q, p) = int phi(x, y) (1/pi) exp(-(q-x)^2 - (p-y)^2) dx dy / (2 pi)
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 25; ++i) {
        const double q = u(rng);
        const double p = u(rng);
        const double conv = integrate_box(
            [&](double x, double y) {
                return phi_density(s, x, y) * std::exp(-(q - x) * (q - x) - (p - y) * (p - y)) / pi;
            },
            -half, half, 1e-10) / (2.0 * pi);
        EXPECT_NEAR(conv, wigner_eval(s, q, p), 1e-6);
    }
}

TEST(VarianceMatrix, Examples) {
    const NoiseMatrix v = variance_matrix(validate({1, 0, 1}));
    EXPECT_DOUBLE_EQ(v.var_q, 0.5);
    EXPECT_DOUBLE_EQ(v.var_p, 0.5);
    EXPECT_EQ(v.cov_qp, 0.0);
    const NoiseMatrix d = variance_matrix(validate({0.25, 0, 4}));
    EXPECT_DOUBLE_EQ(d.var_q, 2.0);
    EXPECT_DOUBLE_EQ(d.var_p, 0.125);
    // rotated: R diag(2, 1/8) R^T
    const double t = 0.9;
    const NoiseMatrix r = variance_matrix(validate(testing::gmatrix_of(2.0, 0.5, t)));
    const double c = std::cos(t);
    const double sn = std::sin(t);
    EXPECT_NEAR(r.var_q, c * c * 2.0 + sn * sn * 0.125, 1e-12);
    EXPECT_NEAR(r.cov_qp, c * sn * (2.0 - 0.125), 1e-12);
    EXPECT_NEAR(r.var_p, sn * sn * 2.0 + c * c * 0.125, 1e-12);
    EXPECT_GE(r.det(), 0.25 - 1e-12);
}

TEST(MeanPhoton, ExamplesAgainstDistribution) {
    EXPECT_EQ(mean_photon(validate({1, 0, 1})), 0.0);
    const double r3 = std::sqrt(3.0);
    EXPECT_NEAR(mean_photon(PhysicalGaussianState::from_alpha_beta(r3, r3)), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(mean_photon(PhysicalGaussianState::from_alpha_beta(2.0, 0.5)), 9.0 / 16.0);
    for (auto [a, b] : {std::pair{r3, r3}, {2.0, 0.5}, {2.5, 1.3}}) {
        const auto p = testing::pnd_reference(a, b, 400);
        double m = 0.0;
        for (int n = 0; n <= 400; ++n) m += n * p[static_cast<std::size_t>(n)];
        EXPECT_NEAR(mean_photon(PhysicalGaussianState::from_alpha_beta(a, b)), m, 1e-12);
    }
}

TEST(RotationInvariance, AllDerivedQuantities) {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * pi);
    const std::vector<std::pair<double, double>> bases{{2.0, 0.8}, {2.5, 1.6}, {1.8, 0.6}};
    for (auto [alpha, beta] : bases) {
        const auto ref = PhysicalGaussianState::from_alpha_beta(alpha, beta);
        for (int i = 0; i < 100 / static_cast<int>(bases.size()) + 1; ++i) {
            const auto s = validate(rotated(ref.g(), ut(rng)));
            EXPECT_EQ(classify(s).kind, classify(ref).kind);
            EXPECT_LE(rel_diff(mean_photon(s), mean_photon(ref)), 1e-10);
            EXPECT_LE(rel_diff(angular_average(s, 0.8), angular_average(ref, 0.8)), 1e-10);
            for (int n = 0; n <= 30; n += 3) {
                EXPECT_LE(rel_diff(stats::pnd_closed(s, n), stats::pnd_closed(ref, n)), 1e-10) << n;
            }
        }
    }
}

}  // namespace
}  // namespace gaussnc
