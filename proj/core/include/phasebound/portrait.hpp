#pragma once

#include "phasebound/phase_ode.hpp"
#include "phasebound/potential.hpp"

#include <cstddef>
#include <vector>

namespace phasebound {

struct StationaryPoint {
    double U;
    double omega;
};

/// Autonomous field (G_j(U), 2 (U - E) - 2 p_y sin Omega) on interval j,
/// sampled row-major: index = iu * omega_axis.size() + iw.
struct FieldGrid {
    std::size_t interval = 0;
    double energy = 0.0;
    double p_y = 0.0;
    std::vector<double> U_axis;
    std::vector<double> omega_axis;
    std::vector<double> FU;
    std::vector<double> Fomega;
    std::vector<StationaryPoint> stationary;
};

struct PortraitOptions {
    std::size_t u_points = 64;
    std::size_t omega_points = 128;
    /// Omega window; used only when omega_lo < omega_hi, otherwise the
    /// separatrix trace padded by pi.
    double omega_lo = 0.0;
    double omega_hi = 0.0;
    /// Ring radius a * p_y; 0 picks 2 max(0, -inf U) + p_y.
    double ring_radius = 0.0;
    unsigned threads = 0;
};

FieldGrid field_grid(const Potential& pot, double p_y, double energy, std::size_t j,
                     const PortraitOptions& opts = {}, const IntegratorControl& ctrl = {});

struct IntervalTrace {
    std::size_t interval;
    std::vector<double> U;
    std::vector<double> omega;
};

struct RingTrajectory {
    /// a * p_y.
    double radius = 0.0;
    std::vector<double> X;
    std::vector<double> Y;
    /// Polygonal winding number around the origin.
    int winding = 0;
    /// Ring distance between the traced end and the ideal start point.
    double closure_gap = 0.0;
};

struct PortraitResult {
    double energy = 0.0;
    double p_y = 0.0;
    double seed = 0.0;
    std::vector<IntervalTrace> traces;
    RingTrajectory ring;
    /// round((Omega_end - Omega_start) / 2 pi).
    int index = 0;
    TerminalClass terminal;
};

/// Ring radius used when opts.ring_radius is 0.
double default_ring_radius(const Potential& pot, double p_y);

/// Left separatrix started at Omega_- +- |seed| (sign away from the nearest
/// repellor), cut into per-interval traces and mapped to the ring.
/// Throws NotClosed when the trace does not end on an attractor.
PortraitResult separatrix_in_phase_space(const Potential& pot, double p_y, double energy, double seed = 0.05,
                                         const PortraitOptions& opts = {}, const IntegratorControl& ctrl = {});

/// Generic solution through (x0, omega0) run out to both ends of the domain
/// and mapped to the ring; its ends do not meet.
RingTrajectory stable_trajectory(const Potential& pot, double p_y, double energy, double x0, double omega0,
                                 const PortraitOptions& opts = {}, const IntegratorControl& ctrl = {});

/// Sum of signed angle increments of the closed polygon, in turns.
int polygon_winding(const std::vector<double>& X, const std::vector<double>& Y);

} // namespace phasebound
