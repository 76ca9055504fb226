#include "phasebound/phase_ode.hpp"

#include "phasebound/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace phasebound {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

// Relaxation length past the turning radius, in units of 1/(2k).
constexpr double relax_lengths = 10.0;

double core_radius(const PhaseProblem& prob) {
    const Potential& pot = prob.potential();
    double thr = prob.p_y() - std::abs(prob.energy());
    return std::max(turning_radius(pot, thr), 10.0 * pot.width());
}

double end_correction(const PhaseProblem& prob, double L, bool forward) {
    double t_max = L - std::min(L, core_radius(prob));
    if (t_max <= 0.0) return 0.0;
    if (forward) return tail_response(prob.potential(), L, -1, prob.k(), t_max);
    return -tail_response(prob.potential(), -L, +1, prob.k(), t_max);
}

struct Recorder {
    bool enabled;
    std::vector<double> xs, ws;
    void push(double x, double w) {
        if (enabled) {
            xs.push_back(x);
            ws.push_back(w);
        }
    }
};

// Runs the scalar ODE from x0 to x1, recording accepted steps.
double run(const PhaseProblem& prob, double omega0, double x0, double x1, const IntegratorControl& ctrl,
           Recorder& rec, std::size_t& steps) {
    auto rhs = [&](double x, const State<1>& y) { return State<1>{prob.rhs(x, y[0])}; };
    auto on_step = [&](const DenseStep<1>& s) { rec.push(s.x1(), s.r[0][0] + s.r[1][0]); };
    auto on_jump = [&](double x, const State<1>& y) { rec.push(x, y[0]); };
    State<1> y{omega0};
    y = detail::integrate_piecewise<1>(prob, rhs, y, x0, x1, ctrl, on_step, on_jump, &steps);
    return y[0];
}

void finish_samples(PhaseTrajectory& t, Recorder& rec) {
    if (!t.forward) {
        std::reverse(rec.xs.begin(), rec.xs.end());
        std::reverse(rec.ws.begin(), rec.ws.end());
    }
    t.x = std::move(rec.xs);
    t.omega = std::move(rec.ws);
}

void require_gap(const PhaseProblem& prob) {
    if (!(prob.k() > 0.0))
        throw InvalidParams("separatrix needs |E| < p_y strictly");
}

} // namespace

PhaseProblem::PhaseProblem(Potential pot, double energy, double p_y)
    : pot_(std::move(pot)), energy_(energy), p_y_(p_y) {
    if (!(p_y > 0.0) || !std::isfinite(p_y)) throw InvalidParams("p_y must be positive and finite");
    if (!std::isfinite(energy)) throw InvalidParams("energy must be finite");
    double e = std::clamp(energy / p_y, -1.0, 1.0);
    asin_e_ = std::asin(e);
    k_ = std::abs(energy) < p_y ? std::sqrt((p_y - energy) * (p_y + energy)) : 0.0;
}

double PhaseProblem::omega_minus(int n) const { return -asin_e_ + two_pi * n; }
double PhaseProblem::omega_plus(int n) const { return asin_e_ + pi + two_pi * n; }

double PhaseProblem::max_step(double x) const {
    double env = pot_.envelope(x);
    double rate = std::max({p_y_, std::abs(energy_), env});
    double scale = pot_.feature_scale() > 0.0 ? pot_.feature_scale() : 1.0 / p_y_;
    return std::min(0.1 / rate, 0.25 * std::max(scale, 0.5 * std::abs(x)));
}

double PhaseTrajectory::delta_omega() const {
    double start = forward ? -std::asin(std::clamp(energy / p_y, -1.0, 1.0))
                           : std::asin(std::clamp(energy / p_y, -1.0, 1.0)) + pi;
    return terminal.value - start;
}

double tail_response(const Potential& pot, double x_edge, int dir, double k, double t_max) {
    if (pot.is_zero() || pot.kind() == PotentialKind::Delta || t_max <= 0.0) return 0.0;
    auto f = [&](double t) { return pot(x_edge + dir * t) * std::exp(-2.0 * k * t); };
    double err = 0.0;
    double value = 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    if (pot.kind() == PotentialKind::Tabulated) {
        // Integrate only over the part of the ray that meets the table.
        const auto& tx = pot.params().table_x;
        double a = dir > 0 ? tx.front() - x_edge : x_edge - tx.back();
        double b = dir > 0 ? tx.back() - x_edge : x_edge - tx.front();
        a = std::max(a, 0.0);
        b = std::min(b, t_max);
        if (b <= a) return 0.0;
        value = GK::integrate(f, a, b, 20, 1e-12, &err);
    } else {
        value = GK::integrate(f, 0.0, t_max, 20, 1e-12, &err);
    }
    if (!std::isfinite(value)) throw QuadratureFailure("tail response is not finite");
    return 2.0 * value;
}

double turning_radius(const Potential& pot, double threshold) {
    if (pot.envelope(0.0) < threshold || pot.is_zero()) return 0.0;
    double lo = 0.0;
    double hi = pot.feature_scale() > 0.0 ? pot.feature_scale() : 1.0;
    while (pot.envelope(hi) >= threshold) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw DomainTooSmall("potential does not decay");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (pot.envelope(mid) >= threshold ? lo : hi) = mid;
    }
    return hi;
}

double domain_half_width(const PhaseProblem& prob, const IntegratorControl& ctrl) {
    require_gap(prob);
    if (ctrl.half_width > 0.0) return ctrl.half_width;
    const Potential& pot = prob.potential();
    double k = prob.k();
    double L = std::max({10.0 * pot.width(), 10.0 * pot.feature_scale(),
                         core_radius(prob) + relax_lengths / (2.0 * k)});
    double limit = ctrl.seed_tol * ctrl.classify_tol;
    while (std::abs(tail_response(pot, -L, -1, k)) > limit || std::abs(tail_response(pot, L, +1, k)) > limit) {
        L *= 1.5;
        if (L > ctrl.max_half_width)
            throw DomainTooSmall("tail seed stays above tolerance up to L = " + std::to_string(L));
    }
    return L;
}

double edge_energy(double p_y, int sign, const IntegratorControl& ctrl) {
    return (sign >= 0 ? 1.0 : -1.0) * p_y * (1.0 - ctrl.eps_edge);
}

TerminalClass classify_forward(const PhaseProblem& prob, double value, double tol) {
    TerminalClass c;
    c.value = value;
    int na = static_cast<int>(std::lround((value - prob.omega_minus(0)) / two_pi));
    int nr = static_cast<int>(std::lround((value - prob.omega_plus(0)) / two_pi));
    double da = std::abs(value - prob.omega_minus(na));
    double dr = std::abs(value - prob.omega_plus(nr));
    c.branch = forward_basin(prob, value);
    if (da <= tol && da <= dr) {
        c.kind = TerminalKind::AttractorMinus;
        c.branch = na;
        c.residual = da;
    } else if (dr <= tol) {
        c.kind = TerminalKind::NearRepellorPlus;
        c.side = value >= prob.omega_plus(nr) ? 1 : -1;
        c.residual = dr;
    } else {
        c.residual = std::min(da, dr);
    }
    return c;
}

TerminalClass classify_backward(const PhaseProblem& prob, double value, double tol) {
    TerminalClass c;
    c.value = value;
    int na = static_cast<int>(std::lround((value - prob.omega_plus(0)) / two_pi));
    int nr = static_cast<int>(std::lround((value - prob.omega_minus(0)) / two_pi));
    double da = std::abs(value - prob.omega_plus(na));
    double dr = std::abs(value - prob.omega_minus(nr));
    c.branch = backward_basin(prob, value);
    if (da <= tol && da <= dr) {
        c.kind = TerminalKind::AttractorPlus;
        c.branch = na;
        c.residual = da;
    } else if (dr <= tol) {
        c.kind = TerminalKind::NearRepellorMinus;
        c.side = value >= prob.omega_minus(nr) ? 1 : -1;
        c.residual = dr;
    } else {
        c.residual = std::min(da, dr);
    }
    return c;
}

int forward_basin(const PhaseProblem& prob, double value) {
    return static_cast<int>(std::floor((value - prob.omega_plus(0)) / two_pi)) + 1;
}

int backward_basin(const PhaseProblem& prob, double value) {
    return static_cast<int>(std::floor((value - prob.omega_minus(0)) / two_pi));
}

PhaseTrajectory integrate_phase(const PhaseProblem& prob, double omega0, double x0, double x1,
                                const IntegratorControl& ctrl, std::span<const double> sample_points) {
    if (x0 == x1) throw InvalidParams("integration interval is empty");
    if (!std::isfinite(omega0) || !std::isfinite(x0) || !std::isfinite(x1))
        throw InvalidParams("non-finite initial data");
    PhaseTrajectory t;
    t.energy = prob.energy();
    t.p_y = prob.p_y();
    t.forward = x1 > x0;
    t.half_width = std::max(std::abs(x0), std::abs(x1));
    t.omega_start = omega0;

    Recorder rec{ctrl.record && sample_points.empty(), {}, {}};
    rec.push(x0, omega0);
    if (sample_points.empty()) {
        t.omega_end = run(prob, omega0, x0, x1, ctrl, rec, t.steps);
        finish_samples(t, rec);
    } else {
        std::vector<double> pts(sample_points.begin(), sample_points.end());
        std::sort(pts.begin(), pts.end());
        if (!t.forward) std::reverse(pts.begin(), pts.end());
        std::vector<double> xs, ws;
        std::size_t next = 0;
        auto inside = [&](double p) { return t.forward ? (p >= x0 && p <= x1) : (p <= x0 && p >= x1); };
        while (next < pts.size() && !inside(pts[next])) ++next;
        auto take_until = [&](double edge, const DenseStep<1>* s, double current) {
            while (next < pts.size() && inside(pts[next]) &&
                   (t.forward ? pts[next] <= edge : pts[next] >= edge)) {
                xs.push_back(pts[next]);
                ws.push_back(s ? s->value(pts[next])[0] : current);
                ++next;
            }
        };
        take_until(x0, nullptr, omega0);
        auto rhs = [&](double x, const State<1>& y) { return State<1>{prob.rhs(x, y[0])}; };
        auto on_step = [&](const DenseStep<1>& s) { take_until(s.x1(), &s, 0.0); };
        auto on_jump = [&](double, const State<1>&) {};
        State<1> y{omega0};
        y = detail::integrate_piecewise<1>(prob, rhs, y, x0, x1, ctrl, on_step, on_jump, &t.steps);
        t.omega_end = y[0];
        if (!t.forward) {
            std::reverse(xs.begin(), xs.end());
            std::reverse(ws.begin(), ws.end());
        }
        t.x = std::move(xs);
        t.omega = std::move(ws);
    }
    if (prob.in_gap()) {
        bool at_edge = std::abs(x1) >= std::abs(x0);
        t.tail_correction = at_edge ? end_correction(prob, std::abs(x1), t.forward) : 0.0;
        double v = t.omega_end - t.tail_correction;
        t.terminal = t.forward ? classify_forward(prob, v, ctrl.classify_tol)
                               : classify_backward(prob, v, ctrl.classify_tol);
    }
    return t;
}

namespace {

PhaseTrajectory separatrix(const PhaseProblem& prob, const IntegratorControl& ctrl, bool forward) {
    require_gap(prob);
    const Potential& pot = prob.potential();
    double k = prob.k();
    double L = domain_half_width(prob, ctrl);

    PhaseTrajectory t;
    t.energy = prob.energy();
    t.p_y = prob.p_y();
    t.forward = forward;
    t.half_width = L;
    t.seed = forward ? tail_response(pot, -L, -1, k) : -tail_response(pot, L, +1, k);
    t.omega_start = (forward ? prob.omega_minus(0) : prob.omega_plus(0)) + t.seed;

    Recorder rec{ctrl.record, {}, {}};
    double x0 = forward ? -L : L;
    rec.push(x0, t.omega_start);
    double w = run(prob, t.omega_start, x0, -x0, ctrl, rec, t.steps);
    double end = L;
    for (int attempt = 0;; ++attempt) {
        t.tail_correction = end_correction(prob, end, forward);
        double v = w - t.tail_correction;
        t.terminal = forward ? classify_forward(prob, v, ctrl.classify_tol)
                             : classify_backward(prob, v, ctrl.classify_tol);
        if (t.terminal.kind != TerminalKind::Unresolved) break;
        if (attempt == 1 && ctrl.basin_fallback) break;
        if (attempt == 1)
            throw DomainTooSmall("separatrix unresolved at L = " + std::to_string(end) +
                                 " (residual " + std::to_string(t.terminal.residual) + ")");
        double from = forward ? end : -end;
        w = run(prob, w, from, 2.0 * from, ctrl, rec, t.steps);
        end *= 2.0;
    }
    t.omega_end = w;
    finish_samples(t, rec);
    return t;
}

} // namespace

PhaseTrajectory left_separatrix(const PhaseProblem& prob, const IntegratorControl& ctrl) {
    return separatrix(prob, ctrl, true);
}

PhaseTrajectory right_separatrix(const PhaseProblem& prob, const IntegratorControl& ctrl) {
    return separatrix(prob, ctrl, false);
}

double matching_point(const Potential& pot) { return pot.argmax_abs(); }

double separatrix_mismatch(const PhaseProblem& prob, const IntegratorControl& ctrl) {
    require_gap(prob);
    const Potential& pot = prob.potential();
    double L = domain_half_width(prob, ctrl);
    double xm = std::clamp(matching_point(pot), -L, L);
    double k = prob.k();
    Recorder none{false, {}, {}};
    std::size_t steps = 0;
    double wl = run(prob, prob.omega_minus(0) + tail_response(pot, -L, -1, k), -L, xm, ctrl, none, steps);
    double wr = run(prob, prob.omega_plus(0) - tail_response(pot, L, +1, k), L, xm, ctrl, none, steps);
    return std::remainder(wl - wr, two_pi);
}

PhaseTrajectory degenerate_separatrix(const PhaseProblem& prob, const IntegratorControl& ctrl,
                                      double extra_tail) {
    require_gap(prob);
    const Potential& pot = prob.potential();
    double k = prob.k();
    double L = domain_half_width(prob, ctrl) + std::max(0.0, extra_tail) / k;
    double xm = std::clamp(matching_point(pot), -L, L);

    PhaseTrajectory t;
    t.energy = prob.energy();
    t.p_y = prob.p_y();
    t.forward = true;
    t.half_width = L;
    t.degenerate = true;
    t.match_point = xm;
    t.seed = tail_response(pot, -L, -1, k);
    t.omega_start = prob.omega_minus(0) + t.seed;

    Recorder left{ctrl.record, {}, {}};
    left.push(-L, t.omega_start);
    double wl = run(prob, t.omega_start, -L, xm, ctrl, left, t.steps);

    Recorder right{ctrl.record, {}, {}};
    double start_r = prob.omega_plus(0) - tail_response(pot, L, +1, k);
    right.push(L, start_r);
    double wr = run(prob, start_r, L, xm, ctrl, right, t.steps);

    int shift = static_cast<int>(std::lround((wl - wr) / two_pi));
    t.mismatch = wl - wr - two_pi * shift;
    t.right_start = start_r + two_pi * shift;
    t.omega_end = t.right_start;

    t.x = std::move(left.xs);
    t.omega = std::move(left.ws);
    // The right piece was recorded from +L down to x_m; skip its copy of x_m.
    for (std::size_t i = right.xs.size(); i-- > 0;) {
        if (right.xs[i] == xm && i + 1 == right.xs.size()) continue;
        t.x.push_back(right.xs[i]);
        t.omega.push_back(right.ws[i] + two_pi * shift);
    }
    t.tail_correction = tail_response(pot, L, +1, k);
    TerminalClass c;
    c.kind = TerminalKind::NearRepellorPlus;
    c.branch = shift;
    c.value = prob.omega_plus(shift);
    c.residual = std::abs(t.mismatch);
    c.side = t.mismatch >= 0.0 ? 1 : -1;
    t.terminal = c;
    return t;
}

double kappa_integral(const PhaseTrajectory& traj) {
    double s = 0.0;
    for (std::size_t i = 1; i < traj.x.size(); ++i) {
        double h = traj.x[i] - traj.x[i - 1];
        if (h == 0.0) continue;
        double a = traj.energy + traj.p_y * std::sin(traj.omega[i - 1]);
        double b = traj.energy + traj.p_y * std::sin(traj.omega[i]);
        s += h * (a + b);
    }
    return s;
}

} // namespace phasebound
