#pragma once

#include "phasebound/integrator.hpp"
#include "phasebound/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace phasebound {

struct IntegratorControl {
    double tol_phase = 1e-9;
    double classify_tol = 1e-3;
    /// Band-edge offset relative to p_y: E = +-(1 - eps_edge) * p_y.
    double eps_edge = 1e-6;
    /// Domain grows until the first-order tail seed is below seed_tol * classify_tol.
    double seed_tol = 0.1;
    /// Fixed half-width L; 0 chooses it automatically.
    double half_width = 0.0;
    double max_half_width = 1e9;
    std::size_t max_steps = 20'000'000;
    /// Keep per-step samples in returned trajectories.
    bool record = true;
    /// Keep the basin branch of a separatrix that is still Unresolved after
    /// the tail extension instead of throwing DomainTooSmall.
    bool basin_fallback = false;
};

/// Omega' = 2 (U(x) - E) - 2 p_y sin(Omega).
class PhaseProblem {
public:
    /// Throws InvalidParams unless p_y > 0 and E is finite.
    PhaseProblem(Potential pot, double energy, double p_y);

    const Potential& potential() const { return pot_; }
    double energy() const { return energy_; }
    double p_y() const { return p_y_; }
    /// sqrt(p_y^2 - E^2) inside the gap, 0 outside.
    double k() const { return k_; }
    bool in_gap() const { return std::abs(energy_) < p_y_; }

    /// -asin(E/p_y) + 2 pi n: attractor for forward integration.
    double omega_minus(int n = 0) const;
    /// asin(E/p_y) + pi + 2 pi n: attractor for backward integration.
    double omega_plus(int n = 0) const;

    /// Regular part of the right-hand side; delta jumps are applied separately.
    double rhs(double x, double omega) const {
        return 2.0 * (pot_.regular(x) - energy_) - 2.0 * p_y_ * std::sin(omega);
    }

    /// Local step bound: resolves both the fastest rotation and the shape of U.
    double max_step(double x) const;

private:
    Potential pot_;
    double energy_;
    double p_y_;
    double k_;
    double asin_e_;
};

enum class TerminalKind { AttractorMinus, AttractorPlus, NearRepellorPlus, NearRepellorMinus, Unresolved };

struct TerminalClass {
    TerminalKind kind = TerminalKind::Unresolved;
    /// Branch n of the family member the end value sits on, or of the
    /// attractor basin it falls into when Unresolved.
    int branch = 0;
    /// For NearRepellor*: +1 above the repellor, -1 below.
    int side = 0;
    double residual = 0.0;
    /// Tail-corrected end value that was classified.
    double value = 0.0;
};

struct PhaseTrajectory {
    double energy = 0.0;
    double p_y = 0.0;
    /// Domain [-half_width, half_width] the run was set up on.
    double half_width = 0.0;
    bool forward = true;
    /// Samples ordered by increasing x; a delta shows up as two samples at
    /// the same x (left limit first).
    std::vector<double> x;
    std::vector<double> omega;
    double omega_start = 0.0;
    double omega_end = 0.0;
    double seed = 0.0;
    double tail_correction = 0.0;
    TerminalClass terminal;
    std::size_t steps = 0;

    /// Set for a degenerate (matched) separatrix.
    bool degenerate = false;
    double match_point = 0.0;
    double mismatch = 0.0;
    /// Start value of the right piece after its 2 pi shift.
    double right_start = 0.0;

    /// Tail-corrected end value minus the start family value.
    double delta_omega() const;
};

namespace detail {

/// Integrates piecewise between breakpoints and applies the 2G jump at a
/// delta. Values at the delta are right limits. Component 0 of the state is
/// Omega; the others are whatever rhs carries along.
template <std::size_t N, class Rhs, class StepObs, class JumpObs>
State<N> integrate_piecewise(const PhaseProblem& prob, Rhs&& rhs, State<N> y, double x0, double x1,
                             const IntegratorControl& ctrl, StepObs&& on_step, JumpObs&& on_jump,
                             std::size_t* steps) {
    const Potential& pot = prob.potential();
    const double jump = 2.0 * pot.delta_strength();
    const bool has_jump = jump != 0.0;
    const bool forward = x1 > x0;

    StepControl sc;
    sc.rtol = ctrl.tol_phase;
    sc.atol = ctrl.tol_phase;
    sc.max_steps = ctrl.max_steps;
    auto hmax = [&](double x) { return prob.max_step(x); };

    if (has_jump && !forward && x0 == 0.0) {
        y[0] -= jump;
        on_jump(0.0, y);
    }
    std::vector<double> stops;
    for (double b : pot.breakpoints())
        if ((forward && b > x0 && b < x1) || (!forward && b < x0 && b > x1)) stops.push_back(b);
    if (!forward) std::reverse(stops.begin(), stops.end());
    stops.push_back(x1);

    double cur = x0;
    for (double s : stops) {
        y = integrate_dopri<N>(rhs, y, cur, s, sc, hmax, on_step, steps);
        if (has_jump && s == 0.0 && (forward || s != x1)) {
            y[0] += forward ? jump : -jump;
            on_jump(s, y);
        }
        cur = s;
    }
    return y;
}

} // namespace detail

/// 2 * integral_0^t_max U(x_edge + dir*t) exp(-2 k t) dt for the regular
/// part of U. dir = -1 looks to the left of x_edge, +1 to the right.
double tail_response(const Potential& pot, double x_edge, int dir, double k,
                     double t_max = std::numeric_limits<double>::infinity());

/// Largest |x| at which the envelope of |U| still reaches threshold.
double turning_radius(const Potential& pot, double threshold);

/// Half-width L of the integration domain for this energy.
double domain_half_width(const PhaseProblem& prob, const IntegratorControl& ctrl);

/// Band-edge energy used in place of +-p_y.
double edge_energy(double p_y, int sign, const IntegratorControl& ctrl);

/// Classify an end value of a forward run (attractors Omega_-, repellors Omega_+).
TerminalClass classify_forward(const PhaseProblem& prob, double value, double tol);
/// Classify an end value of a backward run (attractors Omega_+, repellors Omega_-).
TerminalClass classify_backward(const PhaseProblem& prob, double value, double tol);

/// Branch of the forward attractor whose basin contains value.
int forward_basin(const PhaseProblem& prob, double value);
int backward_basin(const PhaseProblem& prob, double value);

/// General initial-value run. If sample_points is non-empty the trajectory
/// is sampled there (dense output) instead of at the accepted steps.
PhaseTrajectory integrate_phase(const PhaseProblem& prob, double omega0, double x0, double x1,
                                const IntegratorControl& ctrl, std::span<const double> sample_points = {});

/// Solution leaving the repellor Omega_- at -infinity, classified at +L.
PhaseTrajectory left_separatrix(const PhaseProblem& prob, const IntegratorControl& ctrl);
/// Solution leaving Omega_+ at +infinity backwards, classified at -L.
PhaseTrajectory right_separatrix(const PhaseProblem& prob, const IntegratorControl& ctrl);

/// Matching point used by the degeneracy condition: argmax |U| (0 for a delta).
double matching_point(const Potential& pot);

/// Omega_l(x_m) - Omega_r(x_m) reduced to [-pi, pi].
double separatrix_mismatch(const PhaseProblem& prob, const IntegratorControl& ctrl);

/// Left and right separatrices glued at the matching point. extra_tail
/// extends the domain by extra_tail / k on both sides.
PhaseTrajectory degenerate_separatrix(const PhaseProblem& prob, const IntegratorControl& ctrl,
                                      double extra_tail = 0.0);

/// Trapezoid estimate of integral 2 (E + p_y sin Omega) dx along a trajectory.
double kappa_integral(const PhaseTrajectory& traj);

} // namespace phasebound
