#pragma once

#include "phasebound/phase_ode.hpp"
#include "phasebound/potential.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace phasebound {

/// The plane-wave factor exp(i p_y y) and the phase integral of (E - U)
/// common to both components are left out; they do not affect the density.
struct SpinorSample {
    double x;
    double omega;
    double R;       // amplitude, R(match point) = 1
    double phi;     // accumulated phase, phi(-L) = 0
    double rho;     // R^2 / W
    std::complex<double> upper;
    std::complex<double> lower;
    double dlnR;    // (ln R)' from the dense output
    double dphi;    // phi' from the dense output
};

struct Eigenstate {
    double energy = 0.0;
    double p_y = 0.0;
    double k = 0.0;
    double W = 0.0;
    double spacing = 0.0;
    double match_point = 0.0;
    /// Sum over interior kinks of rho'(left) - rho'(right), for the
    /// endpoint-corrected trapezoid rule.
    double slope_jumps = 0.0;
    std::vector<SpinorSample> samples;
};

struct ReconstructOptions {
    /// Grid spacing; 0 picks 0.05 / max(p_y, |E|, sup|U|).
    double spacing = 0.0;
    double tol = 1e-11;
    std::size_t max_samples = 400'000;
    /// Largest |Omega_l - Omega_r| at the match point accepted as degenerate.
    double max_mismatch = 1e-3;
    /// Domain extension beyond the spectral L, in units of 1/k, used by
    /// eigenstate() so that the density tails are negligible.
    double extra_tail = 16.0;
};

/// Rebuilds R, Phi, the spinor and the density from a degenerate separatrix.
/// Throws NotAnEigenstate if traj is not one, or was made for another energy.
Eigenstate reconstruct(const Potential& pot, double p_y, double energy, const PhaseTrajectory& traj,
                       const ReconstructOptions& opts = {});

/// degenerate_separatrix followed by reconstruct.
Eigenstate eigenstate(const Potential& pot, double p_y, double energy, const IntegratorControl& ctrl = {},
                      const ReconstructOptions& opts = {});

/// Trapezoid integral of rho over the samples (should be 1).
double norm(const Eigenstate& state);

/// Omega(x) ~ -asin(E/p_y) + 2 * integral_{-inf}^x U. Throws
/// ConditionViolated when p_y * width / min(dn, 1 - dn) exceeds max_ratio, when
/// G is a multiple of pi, or when x U(x) is not integrable.
std::function<double(double)> delta_limit_phase(const Potential& pot, double p_y, double energy,
                                                double max_ratio = 0.1);

} // namespace phasebound
