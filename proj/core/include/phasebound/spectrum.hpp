#pragma once

#include "phasebound/phase_ode.hpp"
#include "phasebound/potential.hpp"

#include <cstddef>
#include <vector>

namespace phasebound {

struct SpectrumOptions {
    IntegratorControl control;
    /// Bracket width at which bisection stops, relative to p_y.
    double refine_tol = 1e-8;
    /// Shoot on the separatrix mismatch inside each final bracket.
    bool polish = true;
    std::size_t grid_points = 64;
    unsigned threads = 0;
};

struct StaircasePoint {
    double energy;
    int branch;
    double residual;
};

struct Staircase {
    double e_lo = 0.0;
    double e_hi = 0.0;
    /// Sorted by energy.
    std::vector<StaircasePoint> points;
};

struct Eigenvalue {
    double energy;
    double uncertainty;
};

struct SpectrumReport {
    double p_y = 0.0;
    int level_count = 0;
    std::vector<Eigenvalue> eigenvalues;
    Staircase staircase;
};

struct BranchSample {
    double energy;
    int branch;
    TerminalClass terminal;
};

/// Branch of the left separatrix by the basin rule. Never throws
/// NearEigenvalue, so it is safe to use for bracketing.
BranchSample sample_branch(const Potential& pot, double p_y, double energy, const IntegratorControl& ctrl);

/// Delta Omega_l(E) / 2 pi. E = +-p_y are taken as band-edge limits.
/// Throws NearEigenvalue when the separatrix ends on a repellor.
int staircase_value(const Potential& pot, double p_y, double energy, const IntegratorControl& ctrl = {});

/// N_d from the two band-edge staircase values.
int count_levels(const Potential& pot, double p_y, const IntegratorControl& ctrl = {});

/// Number of levels between two energies in [-p_y, p_y].
int count_between(const Potential& pot, double p_y, double e1, double e2, const IntegratorControl& ctrl = {});

SpectrumReport find_eigenvalues(const Potential& pot, double p_y, const SpectrumOptions& opts = {});

} // namespace phasebound
