#include "phasebound/portrait.hpp"

#include "phasebound/errors.hpp"
#include "phasebound/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace phasebound {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

double gap_energy(double p_y, double energy, const IntegratorControl& ctrl) {
    if (!(p_y > 0.0)) throw InvalidParams("p_y must be positive");
    if (!std::isfinite(energy) || std::abs(energy) > p_y) throw InvalidParams("energy must lie in [-p_y, p_y]");
    double edge = edge_energy(p_y, 1, ctrl);
    return std::clamp(energy, -edge, edge);
}

double safe_u(const Potential& pot, double x) { return pot.regular(x); }

void map_to_ring(RingTrajectory& ring, double u, double omega) {
    double r = u + ring.radius;
    ring.X.push_back(r * std::cos(omega));
    ring.Y.push_back(r * std::sin(omega));
}

} // namespace

double default_ring_radius(const Potential& pot, double p_y) {
    return 2.0 * std::max(0.0, -pot.min_value()) + p_y;
}

int polygon_winding(const std::vector<double>& X, const std::vector<double>& Y) {
    double total = 0.0;
    std::size_t n = X.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (i + 1) % n;
        double cross = X[i] * Y[j] - Y[i] * X[j];
        double dot = X[i] * X[j] + Y[i] * Y[j];
        total += std::atan2(cross, dot);
    }
    return static_cast<int>(std::lround(total / two_pi));
}

FieldGrid field_grid(const Potential& pot, double p_y, double energy, std::size_t j, const PortraitOptions& opts,
                     const IntegratorControl& ctrl) {
    MonotoneDecomposition dec = monotone_decomposition(pot);
    if (j >= dec.size()) throw IndexOutOfRange("interval index " + std::to_string(j) + " out of range");
    if (opts.u_points < 2 || opts.omega_points < 2) throw InvalidParams("grid needs at least 2x2 points");
    const auto& iv = dec.intervals()[j];

    double w_lo = opts.omega_lo, w_hi = opts.omega_hi;
    if (!(w_lo < w_hi)) {
        PhaseProblem prob(pot, gap_energy(p_y, energy, ctrl), p_y);
        PhaseTrajectory t = left_separatrix(prob, ctrl);
        w_lo = prob.omega_minus(0);
        w_hi = w_lo;
        for (std::size_t i = 0; i < t.x.size(); ++i) {
            if (t.x[i] < iv.x_lo || t.x[i] > iv.x_hi) continue;
            w_lo = std::min(w_lo, t.omega[i]);
            w_hi = std::max(w_hi, t.omega[i]);
        }
        w_lo -= pi;
        w_hi += pi;
    }

    FieldGrid g;
    g.interval = j;
    g.energy = energy;
    g.p_y = p_y;
    double u_lo = iv.u_lo, u_hi = iv.u_hi;
    if (u_lo == u_hi) {
        u_lo -= 0.5 * p_y;
        u_hi += 0.5 * p_y;
    }
    for (std::size_t i = 0; i < opts.u_points; ++i)
        g.U_axis.push_back(u_lo + (u_hi - u_lo) * static_cast<double>(i) / static_cast<double>(opts.u_points - 1));
    for (std::size_t i = 0; i < opts.omega_points; ++i)
        g.omega_axis.push_back(w_lo + (w_hi - w_lo) * static_cast<double>(i) / static_cast<double>(opts.omega_points - 1));
    std::size_t nw = opts.omega_points;
    g.FU.assign(opts.u_points * nw, 0.0);
    g.Fomega.assign(opts.u_points * nw, 0.0);
    parallel_for(opts.u_points, opts.threads, [&](std::size_t iu) {
        double u = g.U_axis[iu];
        double gu = iv.orientation == 0 ? 0.0 : dec.slope(j, u);
        for (std::size_t iw = 0; iw < nw; ++iw) {
            g.FU[iu * nw + iw] = gu;
            g.Fomega[iu * nw + iw] = 2.0 * (u - energy) - 2.0 * p_y * std::sin(g.omega_axis[iw]);
        }
    });

    std::vector<double> rows{iv.u_lo};
    if (iv.u_hi != iv.u_lo) rows.push_back(iv.u_hi);
    for (double us : rows) {
        double s = (us - energy) / p_y;
        if (std::abs(s) > 1.0) continue;
        double base = std::asin(s);
        for (double w0 : {base, pi - base}) {
            int n_lo = static_cast<int>(std::ceil((w_lo - w0) / two_pi));
            int n_hi = static_cast<int>(std::floor((w_hi - w0) / two_pi));
            for (int n = n_lo; n <= n_hi; ++n) g.stationary.push_back({us, w0 + two_pi * n});
        }
    }
    return g;
}

PortraitResult separatrix_in_phase_space(const Potential& pot, double p_y, double energy, double seed,
                                         const PortraitOptions& opts, const IntegratorControl& ctrl) {
    double e = gap_energy(p_y, energy, ctrl);
    if (!std::isfinite(seed)) throw InvalidParams("seed must be finite");
    PhaseProblem prob(pot, e, p_y);
    double L = domain_half_width(prob, ctrl);
    double s = (e >= 0.0 ? 1.0 : -1.0) * std::abs(seed);
    double w0 = prob.omega_minus(0) + s;

    IntegratorControl run = ctrl;
    run.record = true;
    PhaseTrajectory t = integrate_phase(prob, w0, -L, L, run);
    if (t.terminal.kind != TerminalKind::AttractorMinus)
        throw NotClosed("trajectory does not settle on an attractor; E is too close to a level");

    PortraitResult out;
    out.energy = e;
    out.p_y = p_y;
    out.seed = s;
    out.terminal = t.terminal;
    out.index = static_cast<int>(std::lround((t.terminal.value - prob.omega_minus(0)) / two_pi));

    MonotoneDecomposition dec = monotone_decomposition(pot);
    for (std::size_t j = 0; j < dec.size(); ++j) {
        const auto& iv = dec.intervals()[j];
        IntervalTrace tr{j, {}, {}};
        for (std::size_t i = 0; i < t.x.size(); ++i) {
            if (t.x[i] < iv.x_lo || t.x[i] > iv.x_hi) continue;
            tr.U.push_back(safe_u(pot, t.x[i]));
            tr.omega.push_back(t.omega[i]);
        }
        out.traces.push_back(std::move(tr));
    }

    RingTrajectory& ring = out.ring;
    ring.radius = opts.ring_radius > 0.0 ? opts.ring_radius : default_ring_radius(pot, p_y);
    if (!(ring.radius > -pot.min_value())) throw InvalidParams("ring radius must exceed -inf U");
    map_to_ring(ring, 0.0, prob.omega_minus(0));
    for (std::size_t i = 0; i < t.x.size(); ++i) map_to_ring(ring, safe_u(pot, t.x[i]), t.omega[i]);
    map_to_ring(ring, 0.0, prob.omega_minus(out.index));
    ring.winding = polygon_winding(ring.X, ring.Y);
    double end_u = safe_u(pot, t.x.back());
    double dx = (end_u + ring.radius) * std::cos(t.omega.back()) - ring.radius * std::cos(prob.omega_minus(0));
    double dy = (end_u + ring.radius) * std::sin(t.omega.back()) - ring.radius * std::sin(prob.omega_minus(0));
    ring.closure_gap = std::hypot(dx, dy);
    if (ring.winding != out.index)
        throw SolverFailure("polygonal winding disagrees with the phase variance");
    return out;
}

RingTrajectory stable_trajectory(const Potential& pot, double p_y, double energy, double x0, double omega0,
                                 const PortraitOptions& opts, const IntegratorControl& ctrl) {
    double e = gap_energy(p_y, energy, ctrl);
    PhaseProblem prob(pot, e, p_y);
    double L = std::max(domain_half_width(prob, ctrl), std::abs(x0) + 20.0 / prob.k());
    IntegratorControl run = ctrl;
    run.record = true;
    PhaseTrajectory back = integrate_phase(prob, omega0, x0, -L, run);
    PhaseTrajectory fwd = integrate_phase(prob, omega0, x0, L, run);
    RingTrajectory ring;
    ring.radius = opts.ring_radius > 0.0 ? opts.ring_radius : default_ring_radius(pot, p_y);
    for (std::size_t i = 0; i < back.x.size(); ++i) map_to_ring(ring, safe_u(pot, back.x[i]), back.omega[i]);
    for (std::size_t i = 1; i < fwd.x.size(); ++i) map_to_ring(ring, safe_u(pot, fwd.x[i]), fwd.omega[i]);
    ring.closure_gap = std::hypot(ring.X.back() - ring.X.front(), ring.Y.back() - ring.Y.front());
    return ring;
}

} // namespace phasebound
