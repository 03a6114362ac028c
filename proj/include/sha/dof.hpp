// SPDX-License-Identifier: Apache-2.0
// sha-toolkit: spatial-to-spectral harmonic-modulated array modelling

#ifndef SHA_DOF_HPP
#define SHA_DOF_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sha/analysis.hpp"
#include "sha/architecture.hpp"

namespace sha {

struct infeasible_steering_error : std::runtime_error {
    infeasible_steering_error(const std::string& msg, int rank_)
        : std::runtime_error(msg), rank(rank_) {}
    int rank;
};

// Control-to-phase matrix A mapping the architecture's progressive-control
// basis x onto the progressive phases y at the selected harmonics, y = A x.
// Rows are ordered by m ascending; entries are exact integers/signs:
//   tma      -> no tunable controls (zero columns)
//   hma      -> [m]                 with x = [2 pi f_hm d_tau]
//   hmjpta2  -> [1, m]              with x = [d_phi_rf, 2 pi f_hm d_tau]
//   hmjpta3  -> [1, sgn(m), m]      with x = [d_phi_rf + 2 pi f_rf d_tau,
//                                             d_phi_lo, 2 pi f_hm d_tau]
struct DofMatrix {
    ArchKind kind = ArchKind::hma;
    std::vector<int> harmonics;
    std::vector<std::string> control_labels;
    Eigen::MatrixXd a;
};

inline DofMatrix build_dof_matrix(ArchKind kind, std::vector<int> harmonics) {
    if (harmonics.empty())
        throw std::invalid_argument("dof matrix: harmonic set must be nonempty");
    std::sort(harmonics.begin(), harmonics.end());
    if (std::adjacent_find(harmonics.begin(), harmonics.end()) != harmonics.end())
        throw std::invalid_argument("dof matrix: duplicate harmonics");

    DofMatrix out;
    out.kind = kind;
    out.harmonics = std::move(harmonics);
    const auto rows = static_cast<Eigen::Index>(out.harmonics.size());
    switch (kind) {
        case ArchKind::tma:
            out.a.resize(rows, 0);
            break;
        case ArchKind::hma:
            out.control_labels = {"2*pi*f_hm*d_tau"};
            out.a.resize(rows, 1);
            for (Eigen::Index i = 0; i < rows; ++i)
                out.a(i, 0) = out.harmonics[static_cast<std::size_t>(i)];
            break;
        case ArchKind::hmjpta2:
            out.control_labels = {"d_phi_rf", "2*pi*f_hm*d_tau"};
            out.a.resize(rows, 2);
            for (Eigen::Index i = 0; i < rows; ++i) {
                out.a(i, 0) = 1.0;
                out.a(i, 1) = out.harmonics[static_cast<std::size_t>(i)];
            }
            break;
        case ArchKind::hmjpta3:
            out.control_labels = {"d_phi_rf+2*pi*f_rf*d_tau", "d_phi_lo", "2*pi*f_hm*d_tau"};
            out.a.resize(rows, 3);
            for (Eigen::Index i = 0; i < rows; ++i) {
                const int m = out.harmonics[static_cast<std::size_t>(i)];
                out.a(i, 0) = 1.0;
                out.a(i, 1) = sgn(m);
                out.a(i, 2) = m;
            }
            break;
    }
    return out;
}

// Numerical rank: singular values above tol * sigma_max.
inline int dof_rank(const DofMatrix& dof, double tol = 1e-10) {
    if (!(tol > 0.0)) throw std::invalid_argument("dof_rank: tol must be > 0");
    if (dof.a.cols() == 0 || dof.a.rows() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dof.a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) <= 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * s(0)) ++r;
    return r;
}

// Basis change from the hmjpta3 raw control vector x to the hardware controls
// x' = E x = (d_phi_rf, d_phi_lo, 2 pi f_hm d_tau). E is elementary (identity
// except E(0,2) = -f_rf/f_hm), hence invertible and rank-preserving.
struct ElementaryTransform {
    Eigen::Matrix3d e;
    Eigen::Matrix3d e_inv;
};

inline ElementaryTransform elementary_transform(double f_rf_hz, double f_hm_hz) {
    if (!(f_hm_hz > 0.0))
        throw std::invalid_argument("elementary_transform: f_hm must be > 0");
    ElementaryTransform t;
    t.e = Eigen::Matrix3d::Identity();
    t.e_inv = Eigen::Matrix3d::Identity();
    t.e(0, 2) = -f_rf_hz / f_hm_hz;
    t.e_inv(0, 2) = f_rf_hz / f_hm_hz;
    return t;
}

struct SteeringTarget {
    int m = 0;
    double theta_deg = 0.0;
};

struct SteeringProblem {
    std::vector<SteeringTarget> targets;
};

struct SteeringSolution {
    ChannelControls controls;
    std::vector<int> harmonics;              // ascending, matching the problem
    std::vector<double> achieved_phase_rad;  // raw profile at those harmonics
    double residual_rad = 0.0;               // max wrapped |achieved - target|
};

// Solve for progressive controls that place the beam at harmonic m_i on
// theta_i: targets map to phases y_i = 2 pi d sin(theta_i), and A x = y is
// solved over all per-target 2 pi k shifts with |k| <= 4, keeping the
// feasible candidate of smallest |d_tau| (first found wins ties). Phase
// controls are reported wrapped into (-pi, pi]; a negative d_tau is a delay
// offset relative to a common reference. Underdetermined selections take the
// minimum-norm solution.
inline SteeringSolution solve_steering(const ArchitectureConfig& cfg,
                                       const SteeringProblem& problem) {
    cfg.validate();
    if (cfg.spacing_d > 0.5)
        throw std::invalid_argument("solve_steering: requires spacing_d <= 0.5");

    SteeringSolution sol;
    if (problem.targets.empty()) return sol;

    std::vector<SteeringTarget> targets = problem.targets;
    std::sort(targets.begin(), targets.end(),
              [](const SteeringTarget& a, const SteeringTarget& b) { return a.m < b.m; });
    for (std::size_t i = 0; i + 1 < targets.size(); ++i)
        if (targets[i].m == targets[i + 1].m)
            throw std::invalid_argument("solve_steering: duplicate target harmonic m = " +
                                        std::to_string(targets[i].m));
    for (const auto& t : targets)
        if (!(t.theta_deg >= -90.0 && t.theta_deg <= 90.0))
            throw std::invalid_argument("solve_steering: target angle outside [-90, 90] deg");

    std::vector<int> harmonics;
    harmonics.reserve(targets.size());
    for (const auto& t : targets) harmonics.push_back(t.m);
    const DofMatrix dof = build_dof_matrix(cfg.kind, harmonics);
    const int rank = dof_rank(dof);
    const auto n_targets = static_cast<Eigen::Index>(targets.size());

    if (n_targets > dof.a.cols())
        throw infeasible_steering_error(
            "solve_steering: " + std::to_string(targets.size()) + " targets exceed the " +
                std::to_string(dof.a.cols()) + " degrees of freedom of " + to_string(cfg.kind) +
                " (control matrix rank " + std::to_string(rank) + ")",
            rank);

    Eigen::VectorXd y(n_targets);
    for (Eigen::Index i = 0; i < n_targets; ++i)
        y(i) = two_pi * cfg.spacing_d * std::sin(deg2rad(targets[static_cast<std::size_t>(i)].theta_deg));

    const double f_hm = cfg.waveform.f_hm_hz();
    const auto controls_from = [&](const Eigen::VectorXd& x) {
        ChannelControls c;
        switch (cfg.kind) {
            case ArchKind::tma:
                break;
            case ArchKind::hma:
                c.d_tau_s = x(0) / (two_pi * f_hm);
                break;
            case ArchKind::hmjpta2:
                c.d_phi_rf_rad = x(0);
                c.d_tau_s = x(1) / (two_pi * f_hm);
                break;
            case ArchKind::hmjpta3:
                c.d_tau_s = x(2) / (two_pi * f_hm);
                c.d_phi_lo_rad = x(1);
                c.d_phi_rf_rad = x(0) - two_pi * cfg.f_rf_hz * c.d_tau_s;
                break;
        }
        return c;
    };

    // Enumerate per-target wrap offsets in fixed lexicographic order.
    constexpr int k_span = 4;
    const int dims = static_cast<int>(targets.size());
    std::vector<int> k(static_cast<std::size_t>(dims), -k_span);
    bool have_best = false;
    double best_score = std::numeric_limits<double>::infinity();
    ChannelControls best_controls;

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(dof.a);
    for (;;) {
        Eigen::VectorXd yk = y;
        for (Eigen::Index i = 0; i < n_targets; ++i)
            yk(i) += two_pi * k[static_cast<std::size_t>(i)];
        const Eigen::VectorXd x = cod.solve(yk);
        if ((dof.a * x - yk).lpNorm<Eigen::Infinity>() < 1e-9) {
            const ChannelControls c = controls_from(x);
            const double score = std::abs(c.d_tau_s);
            if (!have_best || score < best_score - 1e-18) {
                have_best = true;
                best_score = score;
                best_controls = c;
            }
        }
        int d = dims - 1;
        while (d >= 0 && k[static_cast<std::size_t>(d)] == k_span) {
            k[static_cast<std::size_t>(d)] = -k_span;
            --d;
        }
        if (d < 0) break;
        ++k[static_cast<std::size_t>(d)];
    }

    if (!have_best)
        throw infeasible_steering_error(
            "solve_steering: targets are inconsistent with the architecture's "
            "phase-frequency profile (control matrix rank " +
                std::to_string(rank) + ")",
            rank);

    best_controls.d_phi_rf_rad = wrap_phase(best_controls.d_phi_rf_rad);
    best_controls.d_phi_lo_rad = wrap_phase(best_controls.d_phi_lo_rad);
    sol.controls = best_controls;
    sol.harmonics = harmonics;

    const PhaseProfile achieved = phase_profile(cfg, sol.controls, harmonics);
    sol.achieved_phase_rad.reserve(harmonics.size());
    double resid = 0.0;
    for (Eigen::Index i = 0; i < n_targets; ++i) {
        const auto& e = achieved.entries[static_cast<std::size_t>(i)];
        sol.achieved_phase_rad.push_back(e.d_phi_rad);
        resid = std::max(resid, std::abs(wrap_phase(e.d_phi_rad - y(i))));
    }
    sol.residual_rad = resid;
    return sol;
}

// Forward check of a steering solution: locate the array-factor peak at each
// target harmonic and report the angular miss.
struct SteeringVerificationEntry {
    int m = 0;
    double target_theta_deg = 0.0;
    double peak_theta_deg = 0.0;
    double abs_error_deg = 0.0;
    bool beam_formed = false; // false when the coefficient at m is zero
};

struct SteeringVerification {
    std::vector<SteeringVerificationEntry> entries;
    double max_error_deg = 0.0;

    bool within(double tol_deg) const {
        for (const auto& e : entries)
            if (!e.beam_formed || e.abs_error_deg > tol_deg) return false;
        return true;
    }
};

inline SteeringVerification verify_steering(const ArchitectureConfig& cfg,
                                            const SteeringSolution& sol,
                                            const SteeringProblem& problem,
                                            double grid_step_deg = 0.05) {
    SteeringVerification out;
    const std::vector<double> grid = uniform_theta_grid(grid_step_deg);
    for (const auto& t : problem.targets) {
        SteeringVerificationEntry e;
        e.m = t.m;
        e.target_theta_deg = t.theta_deg;
        if (cfg.waveform.beta(t.m) != cplx(0.0, 0.0)) {
            const PatternSlice slice = array_factor(cfg, sol.controls, t.m, grid);
            e.beam_formed = true;
            e.peak_theta_deg = slice.peak_theta_deg;
            e.abs_error_deg = std::abs(slice.peak_theta_deg - t.theta_deg);
            out.max_error_deg = std::max(out.max_error_deg, e.abs_error_deg);
        }
        out.entries.push_back(e);
    }
    return out;
}

} // namespace sha

#endif // SHA_DOF_HPP
