#pragma once

#include "phasebound/phase_ode.hpp"
#include "phasebound/potential.hpp"

#include <complex>
#include <string>
#include <vector>

namespace phasebound {

struct DeltaLimitResult {
    double E_pred = 0.0;
    /// p_y * width / min(dn, 1 - dn); the limit is trustworthy when this is small.
    double validity = 0.0;
    bool zero_mode = false;
    int n_G = 0;
    double delta_n_G = 0.0;
};

/// E = (-1)^(n_G + 1) p_y cos G. Throws ExcludedCase when G is a multiple of pi.
DeltaLimitResult delta_limit_energy(const Potential& pot, double p_y);

struct ZeroModeFamily {
    /// "U0" for the catalog kinds, "G" for Delta, empty for Tabulated.
    std::string parameter;
    std::vector<double> values;
};

/// Parameter values giving G = pi (n + 1/2), n = 0 .. count-1, with the
/// other parameters of pot held fixed.
ZeroModeFamily zero_mode_condition(const Potential& pot, int count = 4);

struct NonRelativisticOptions {
    /// Relative grid-convergence target for the Numerov levels.
    double tol = 1e-8;
    std::size_t min_points = 4096;
    std::size_t max_points = 1u << 21;
};

struct NonRelativisticResult {
    /// E = p_y + eps for every bound eps in (-2 p_y, 0), ascending.
    std::vector<double> energies;
    std::vector<double> eps;
    /// max(sup|U|, 1/width) / p_y; the reduction holds when this is small.
    double applicability = 0.0;
    bool applicable = false;
    double half_width = 0.0;
    std::size_t points = 0;
};

/// Schroedinger problem with mass p_y solved by Numerov shooting with node
/// counting between hard walls. Throws SolverFailure if the grid does not converge.
NonRelativisticResult nonrelativistic_levels(const Potential& pot, double p_y,
                                             const NonRelativisticOptions& opts = {});

struct SemiclassicalLevel {
    int n;
    double energy;
    /// max of p_y |U'| / p_x^3 over the inner half of the classical region.
    double validity;
};

struct BohrSommerfeldResult {
    std::vector<SemiclassicalLevel> levels;
    double action_lo = 0.0;
    double action_hi = 0.0;
    bool multiple_regions = false;
};

/// 2 * integral of sqrt((E - U)^2 - p_y^2) over the classical regions
/// |E - U| > p_y. Throws TurningPointFailure when a region is unbounded.
double classical_action(const Potential& pot, double p_y, double energy, bool* multiple_regions = nullptr,
                        double* validity = nullptr);

/// Solves action(E) = 2 pi (n + gamma) over the band.
BohrSommerfeldResult bohr_sommerfeld_levels(const Potential& pot, double p_y, double gamma = 0.5,
                                            const IntegratorControl& ctrl = {});

/// g'(+0) / g'(-0) = exp(2 i G) for the delta matching.
std::complex<double> delta_matching_ratio(double G);

/// Transmission through U = G delta(x) built from plane waves and the
/// matching rule. Throws InsideGap for |E| <= p_y.
double delta_transmission(double G, double energy, double p_y);

/// k^2 / (k^2 + p_y^2 sin^2 G), k^2 = E^2 - p_y^2.
double delta_transmission_closed_form(double G, double energy, double p_y);

} // namespace phasebound
