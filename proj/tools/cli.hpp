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

// Command-line front end. run() parses the arguments into a RunManifest,
// validates it, computes into a buffer and only then writes the buffer out,
// so a failing computation never leaves partial rows behind.
//
// Exit codes: 0 success, 2 invalid input / unphysical state / regime error,
// 3 numerical failure.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "gaussnc/gaussnc.hpp"

namespace gaussnc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// One parsed invocation.
struct RunManifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> parameters;  // as given, in flag order
    std::optional<std::string> output_path;
    QuadratureConfig quadrature;
};

namespace detail {

// Scientific notation with 17 significant digits (round-trips a double).
inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

inline void require_finite_row(std::initializer_list<double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) fail(ErrorKind::NonConvergence, "output: non-finite value produced");
    }
}

struct StateArgs {
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<std::string> gmatrix;

    void attach(CLI::App* sub) {
        sub->add_option("--alpha", alpha, "normal-form alpha (with --beta)");
        sub->add_option("--beta", beta, "normal-form beta (with --alpha)");
        sub->add_option("--gmatrix", gmatrix, "G matrix entries A,B,C");
    }

    PhysicalGaussianState resolve() const {
        if (gmatrix) {
            if (alpha || beta) fail(ErrorKind::InvalidArgument, "usage: give either --gmatrix or --alpha/--beta, not both");
            std::vector<double> v;
            std::stringstream ss(*gmatrix);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    std::size_t used = 0;
                    v.push_back(std::stod(item, &used));
                    if (used != item.size()) throw std::invalid_argument(item);
                } catch (const std::exception&) {
                    fail(ErrorKind::InvalidArgument, "usage: --gmatrix expects three numbers A,B,C");
                }
            }
            if (v.size() != 3) fail(ErrorKind::InvalidArgument, "usage: --gmatrix expects three numbers A,B,C");
            return PhysicalGaussianState::validate({v[0], v[1], v[2]});
        }
        if (!alpha || !beta) fail(ErrorKind::InvalidArgument, "usage: state needs --alpha and --beta, or --gmatrix");
        return PhysicalGaussianState::from_alpha_beta(*alpha, *beta);
    }
};

inline std::string marginal_note(const PhysicalGaussianState& s) {
    if (near_one(s.alpha()) && near_one(s.beta())) return "vacuum (α=β=1)";
    if (near_one(s.beta())) return "β=1";
    return "squeezed vacuum (αβ=1)";
}

inline void classify_cmd(const PhysicalGaussianState& s, std::string& out) {
    const StateClass c = classify(s);
    out += std::string(to_string(c.kind));
    if (c.marginal) out += ", marginal: " + marginal_note(s);
    out += "\n";
    out += "regime: " + std::string(to_string(stats::regime_of(s))) + "\n";
    out += "alpha: " + fmt(s.alpha()) + "\n";
    out += "beta: " + fmt(s.beta()) + "\n";
    out += "theta: " + fmt(s.normal().theta) + "\n";
    out += "mean_photon: " + fmt(mean_photon(s)) + "\n";
}

inline void pnd_cmd(const PhysicalGaussianState& s, int n_max, bool oracle, const QuadratureConfig& cfg,
                    std::string& out) {
    out += oracle ? "n,p_closed,p_quadrature,abs_diff\n" : "n,p_closed\n";
    for (int n = 0; n <= n_max; ++n) {
        const double p = stats::pnd_closed(s, n);
        out += std::to_string(n) + "," + fmt(p);
        if (oracle) {
            const IntegralResult r = oracle::radial_pnd(s, n, cfg);
            if (!r.converged) fail(ErrorKind::NonConvergence, "pnd: radial quadrature did not converge at n = " + std::to_string(n));
            require_finite_row({p, r.value});
            out += "," + fmt(r.value) + "," + fmt(std::abs(p - r.value));
        }
        out += "\n";
    }
}

inline void pofi_cmd(const PhysicalGaussianState& s, double i_max, int points, std::string& out) {
    out += "I,P\n";
    for (int k = 0; k < points; ++k) {
        const double I = i_max * k / (points - 1);
        const double P = stats::p_of_I(s, I);
        require_finite_row({P});
        out += fmt(I) + "," + fmt(P) + "\n";
    }
}

inline void qparam_cmd(const PhysicalGaussianState& s, std::string& out) {
    const double closed = stats::mandel_q(s);
    int n_max = 2;
    while (stats::tail_bound(s, n_max).probability > 1e-12) {
        if (++n_max > stats::kMaxPhotonNumber) fail(ErrorKind::NonConvergence, "qparam: distribution tail not certified within n = 200");
    }
    const double moments = stats::moment_ratio_oracle(s, n_max);
    out += "mandel_q_closed: " + fmt(closed) + "\n";
    out += "moment_ratio_oracle: " + fmt(moments) + "\n";
    out += "abs_diff: " + fmt(std::abs(closed - moments)) + "\n";
}

inline void lscan_cmd(double alpha, double beta_min, double beta_max, int steps, int l_max, std::string& out) {
    out += "beta";
    for (int l = 1; l <= l_max; ++l) out += ",l" + std::to_string(l);
    out += "\n";
    for (int k = 0; k < steps; ++k) {
        const double beta = steps == 1 ? beta_min : beta_min + (beta_max - beta_min) * k / (steps - 1);
        const PhysicalGaussianState s = PhysicalGaussianState::from_alpha_beta(alpha, beta);
        const stats::PhotonDistribution d = stats::full_distribution(s, 1e-12);
        if (d.n_max() < l_max + 1) {
            fail(ErrorKind::InvalidArgument, "lscan: distribution support too short for the requested --lmax");
        }
        out += fmt(beta);
        for (int l = 1; l <= l_max; ++l) {
            const double v = stats::l_criterion(d, l);
            require_finite_row({v});
            out += "," + fmt(v);
        }
        out += "\n";
    }
}

inline void fock_cmd(double amplitude, double gamma, int grid, double half_width, std::string& out) {
    const fock::PhaseSpec phase = gamma == 0.0 ? fock::PhaseSpec::zero() : fock::PhaseSpec::quadratic(gamma);
    const fock::FockVector f = fock::make_state({amplitude, 0.0}, phase);
    const double lambda = amplitude * amplitude;
    double residual = 0.0;
    for (int n = 0; n <= f.cutoff(); ++n) {
        const double poisson = std::exp(-lambda + n * std::log(lambda > 0.0 ? lambda : 1.0) - specfun::log_factorial(n));
        const double expected = lambda > 0.0 ? poisson : (n == 0 ? 1.0 : 0.0);
        residual = std::max(residual, std::abs(fock::pnd(f, n) - expected));
    }
    const fock::WignerMinimum m = fock::min_wigner(f, half_width, grid);
    require_finite_row({residual, m.value, m.q, m.p});
    out += "cutoff: " + std::to_string(f.cutoff()) + "\n";
    out += "poisson_residual: " + fmt(residual) + "\n";
    out += "min_wigner: " + fmt(m.value) + "\n";
    out += "min_location_q: " + fmt(m.q) + "\n";
    out += "min_location_p: " + fmt(m.p) + "\n";
}

inline void verify_line(std::string& out, bool& all, bool pass, const std::string& name, double measure) {
    all = all && pass;
    out += (pass ? "PASS " : "FAIL ") + name + " " + fmt(measure) + "\n";
}

inline bool verify_cmd(const QuadratureConfig& cfg, std::string& out) {
    bool all = true;
    const double laplace_points[][3] = {{1.0, 1.0, 0.0}, {2.0, 3.0, 1.0}, {1.5, 0.7, -0.4}, {3.0, 0.2, 2.5}};
    for (const auto& p : laplace_points) {
        const oracle::IdentityCheck c = oracle::verify_laplace_bessel_i0(p[0], p[1], p[2], cfg);
        const double rel = c.relative_difference();
        verify_line(out, all, c.lhs.converged && rel <= 1e-7,
                    "laplace_bessel_i0(a=" + fmt(p[0]) + ",b=" + fmt(p[1]) + ",c=" + fmt(p[2]) + ")", rel);
    }
    const std::pair<std::pair<double, double>, int> moment_points[] = {
        {{1.0, 0.0}, 3}, {{2.0, 1.0}, 0}, {{3.0, 2.0}, 4}, {{1.2, -0.9}, 12}};
    for (const auto& [ab, n] : moment_points) {
        const oracle::IdentityCheck c = oracle::verify_hypergeom_moment(ab.first, ab.second, n, cfg);
        const double rel = c.relative_difference();
        verify_line(out, all, c.lhs.converged && rel <= 1e-7,
                    "hypergeom_moment(a=" + fmt(ab.first) + ",b=" + fmt(ab.second) + ",n=" + std::to_string(n) + ")", rel);
    }
    {
        const double upper = -cfg.log_cutoff();
        const std::vector<double> xs = {0.0, 0.3, 0.7, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0};
        const auto back = oracle::fourier_bessel_round_trip([](double t) { return std::exp(-t); }, upper, upper, xs, cfg);
        double worst = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            ok = ok && back[i].converged;
            worst = std::max(worst, std::abs(back[i].value - std::exp(-xs[i])));
        }
        verify_line(out, all, ok && worst <= 1e-6, "fourier_bessel_round_trip(exp(-I))", worst);
    }
    {
        QuadratureConfig tight = cfg.tightened(1e-3);
        tight.abs_tol = std::min(tight.abs_tol, 1e-14);
        tight.max_subdivisions = std::max(tight.max_subdivisions, 4000);
        double worst = 0.0;
        const double betas[] = {0.5, 0.8, 1.0, 1.5, 2.5};
        for (double beta : betas) {
            const double alpha_min = std::max(beta, 1.0 / beta);
            for (int j = 0; j < 5; ++j) {
                const PhysicalGaussianState s = PhysicalGaussianState::from_alpha_beta(alpha_min * (1.0 + 0.3 * j), beta);
                for (int n = 0; n <= 10; ++n) {
                    const double closed = stats::pnd_closed(s, n);
                    const IntegralResult r = oracle::radial_pnd(s, n, tight);
                    const double diff = std::abs(closed - r.value);
                    worst = std::max(worst, diff / std::max(1e-12, 1e-8 * closed));
                }
            }
        }
        verify_line(out, all, worst <= 1.0, "closed_form_vs_radial_quadrature(grid 5x5, n<=10)", worst);
    }
    return all;
}

inline int exit_code_for(ErrorKind kind) { return is_numerical(kind) ? kExitNumerical : kExitInput; }

}  // namespace detail

/// Runs one invocation; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Photon statistics and nonclassicality of single-mode Gaussian states", "gaussnc"};
    app.fallthrough();
    app.require_subcommand(1, 1);

    RunManifest manifest;
    std::string output_path;
    app.add_option("--output", output_path, "write results to this file instead of stdout");
    app.add_option("--abs-tol", manifest.quadrature.abs_tol, "quadrature absolute tolerance");
    app.add_option("--rel-tol", manifest.quadrature.rel_tol, "quadrature relative tolerance");
    app.add_option("--max-subdivisions", manifest.quadrature.max_subdivisions, "quadrature subdivision limit");
    app.add_option("--truncation-margin", manifest.quadrature.truncation_margin,
                   "e-folds below abs-tol at which half-line integrals are cut");

    detail::StateArgs state;
    int n_max = 10;
    bool use_oracle = false;
    double i_max = 5.0;
    int points = 51;
    double scan_alpha = 2.0;
    double beta_min = 0.5;
    double beta_max = 1.0;
    int steps = 51;
    int l_max = 6;
    double amplitude = 2.0;
    double gamma = std::numbers::pi / 2.0;
    int grid = 101;
    double half_width = 6.0;

    CLI::App* classify = app.add_subcommand("classify", "classify a state and print its normal form");
    state.attach(classify);
    CLI::App* pnd = app.add_subcommand("pnd", "photon number distribution as CSV");
    state.attach(pnd);
    pnd->add_option("--nmax", n_max, "largest photon number")->check(CLI::Range(0, stats::kMaxPhotonNumber));
    pnd->add_flag("--oracle", use_oracle, "add radial quadrature columns");
    CLI::App* pofi = app.add_subcommand("pofi", "intensity density P(I) as CSV (classical states)");
    state.attach(pofi);
    pofi->add_option("--imax", i_max, "largest intensity")->check(CLI::NonNegativeNumber);
    pofi->add_option("--points", points, "number of grid points")->check(CLI::Range(2, 100000));
    CLI::App* qparam = app.add_subcommand("qparam", "Q statistic: closed form and moment oracle");
    state.attach(qparam);
    CLI::App* lscan = app.add_subcommand("lscan", "l(n) criteria along a beta scan as CSV");
    lscan->add_option("--alpha", scan_alpha, "fixed alpha");
    lscan->add_option("--beta-min", beta_min, "first beta");
    lscan->add_option("--beta-max", beta_max, "last beta");
    lscan->add_option("--steps", steps, "number of beta values, endpoints included")->check(CLI::Range(1, 100000));
    lscan->add_option("--lmax", l_max, "largest n for l(n)")->check(CLI::Range(1, 100));
    CLI::App* fock_demo = app.add_subcommand("fock-demo", "Poissonian Fock superposition with quadratic phase");
    fock_demo->add_option("--amplitude", amplitude, "real coherent amplitude");
    fock_demo->add_option("--gamma", gamma, "quadratic phase coefficient (0 gives a coherent state)");
    fock_demo->add_option("--grid", grid, "grid points per axis")->check(CLI::Range(51, 2001));
    fock_demo->add_option("--half-width", half_width, "grid half width in q and p");
    CLI::App* verify = app.add_subcommand("verify", "run the identity and oracle suite");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << "\n";
        return kExitInput;
    }

    CLI::App* chosen = app.get_subcommands().front();
    manifest.subcommand = chosen->get_name();
    for (const CLI::Option* opt : chosen->get_options()) {
        if (opt->count() > 0 && !opt->get_lnames().empty()) {
            manifest.parameters.emplace_back(opt->get_lnames().front(), opt->as<std::string>());
        }
    }
    if (!output_path.empty()) manifest.output_path = output_path;

    std::string buffer;
    int code = kExitOk;
    try {
        manifest.quadrature.validate();
        if (chosen == classify) {
            detail::classify_cmd(state.resolve(), buffer);
        } else if (chosen == pnd) {
            detail::pnd_cmd(state.resolve(), n_max, use_oracle, manifest.quadrature, buffer);
        } else if (chosen == pofi) {
            detail::pofi_cmd(state.resolve(), i_max, points, buffer);
        } else if (chosen == qparam) {
            detail::qparam_cmd(state.resolve(), buffer);
        } else if (chosen == lscan) {
            detail::lscan_cmd(scan_alpha, beta_min, beta_max, steps, l_max, buffer);
        } else if (chosen == fock_demo) {
            detail::fock_cmd(amplitude, gamma, grid, half_width, buffer);
        } else if (chosen == verify) {
            if (!detail::verify_cmd(manifest.quadrature, buffer)) code = kExitNumerical;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return detail::exit_code_for(e.kind());
    }

    if (manifest.output_path) {
        std::ofstream file(*manifest.output_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open output file " << *manifest.output_path << "\n";
            return kExitInput;
        }
        file << buffer;
    } else {
        out << buffer;
    }
    return code;
}

}  // namespace gaussnc::cli
