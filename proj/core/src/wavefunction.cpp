#include "phasebound/wavefunction.hpp"

#include "phasebound/errors.hpp"

#include <algorithm>
#include <cmath>

namespace phasebound {

namespace {

using State3 = State<3>;

struct Piece {
    std::vector<State3> value;
    std::vector<State3> slope;
};

// Integrates (Omega, ln R, Phi) from x0 to x1 and samples at pts, which are
// ordered in the direction of integration and lie in [x0, x1].
Piece sample_piece(const PhaseProblem& prob, State3 y0, double x0, double x1, const std::vector<double>& pts,
                   const IntegratorControl& ctrl) {
    Piece out;
    out.value.reserve(pts.size());
    out.slope.reserve(pts.size());
    const double p_y = prob.p_y();
    auto rhs = [&](double x, const State3& y) {
        return State3{prob.rhs(x, y[0]), p_y * std::cos(y[0]), p_y * std::sin(y[0])};
    };
    const bool forward = x1 > x0;
    std::size_t next = 0;
    while (next < pts.size() && pts[next] == x0) {
        out.value.push_back(y0);
        out.slope.push_back(rhs(x0, y0));
        ++next;
    }
    auto on_step = [&](const DenseStep<3>& s) {
        double end = s.x1();
        while (next < pts.size() && (forward ? pts[next] <= end : pts[next] >= end)) {
            out.value.push_back(s.value(pts[next]));
            out.slope.push_back(s.derivative(pts[next]));
            ++next;
        }
    };
    auto on_jump = [](double, const State3&) {};
    State3 y = detail::integrate_piecewise<3>(prob, rhs, y0, x0, x1, ctrl, on_step, on_jump, nullptr);
    // A sample sitting exactly on a forward end at a delta takes the right limit.
    if (!out.value.empty() && pts.back() == x1 && forward) out.value.back()[0] = y[0];
    if (out.value.size() != pts.size()) throw SolverFailure("dense sampling missed grid points");
    return out;
}

} // namespace

Eigenstate reconstruct(const Potential& pot, double p_y, double energy, const PhaseTrajectory& traj,
                       const ReconstructOptions& opts) {
    if (!traj.degenerate) throw NotAnEigenstate("trajectory is not a matched separatrix");
    if (std::abs(traj.energy - energy) > 1e-12 * p_y || traj.p_y != p_y)
        throw NotAnEigenstate("trajectory was computed for a different energy or p_y");
    if (std::abs(traj.mismatch) > opts.max_mismatch)
        throw NotAnEigenstate("separatrices do not match (mismatch " + std::to_string(traj.mismatch) + ")");
    PhaseProblem prob(pot, energy, p_y);
    if (!prob.in_gap()) throw NotAnEigenstate("energy outside the gap");

    const double L = traj.half_width;
    const double xm = traj.match_point;
    double h = opts.spacing > 0.0 ? opts.spacing
                                  : 0.05 / std::max({p_y, std::abs(energy), pot.envelope(0.0)});
    if (pot.feature_scale() > 0.0) h = std::min(h, 0.1 * pot.feature_scale());
    while ((2.0 * L) / h > static_cast<double>(opts.max_samples)) h *= 2.0;

    long n_left = static_cast<long>(std::floor((xm + L) / h));
    long n_right = static_cast<long>(std::floor((L - xm) / h));
    std::vector<double> left_pts, right_pts;
    for (long i = -n_left; i <= 0; ++i) left_pts.push_back(xm + static_cast<double>(i) * h);
    for (long i = n_right; i >= 1; --i) right_pts.push_back(xm + static_cast<double>(i) * h);

    IntegratorControl ctrl;
    ctrl.tol_phase = opts.tol;
    ctrl.record = false;

    Piece left = sample_piece(prob, State3{traj.omega_start, 0.0, 0.0}, -L, xm, left_pts, ctrl);
    // Right piece: carry the end value at x_m as an extra sample for matching.
    right_pts.push_back(xm);
    Piece right = sample_piece(prob, State3{traj.right_start, 0.0, 0.0}, L, xm, right_pts, ctrl);
    State3 at_m_left = left.value.back();
    State3 at_m_right = right.value.back();
    double shift_lnR = at_m_left[1] - at_m_right[1];
    double shift_phi = at_m_left[2] - at_m_right[2];

    Eigenstate st;
    st.energy = energy;
    st.p_y = p_y;
    st.k = prob.k();
    st.spacing = h;
    st.match_point = xm;
    std::size_t total = left_pts.size() + right_pts.size() - 1;
    st.samples.reserve(total);
    auto push = [&](double x, const State3& v, const State3& d, double dlnR_shift, double dphi_shift) {
        SpinorSample s{};
        s.x = x;
        s.omega = v[0];
        s.R = v[1] + dlnR_shift - at_m_left[1];
        s.phi = v[2] + dphi_shift;
        s.dlnR = d[1];
        s.dphi = d[2];
        st.samples.push_back(s);
    };
    for (std::size_t i = 0; i < left_pts.size(); ++i) push(left_pts[i], left.value[i], left.slope[i], 0.0, 0.0);
    for (std::size_t i = right_pts.size() - 1; i-- > 0;)
        push(right_pts[i], right.value[i], right.slope[i], shift_lnR, shift_phi);

    // rho' = 2 (ln R)' rho; trapezoid plus the first endpoint correction on
    // each smooth piece. A delta at the match point splits the grid there.
    double sum = 0.0;
    for (std::size_t i = 0; i < st.samples.size(); ++i) {
        double w = (i == 0 || i + 1 == st.samples.size()) ? 0.5 : 1.0;
        sum += w * std::exp(2.0 * st.samples[i].R);
    }
    auto drho = [&](double lnR, double omega) { return 2.0 * p_y * std::cos(omega) * std::exp(2.0 * lnR); };
    double ends = drho(st.samples.back().R, st.samples.back().omega) - drho(st.samples.front().R, st.samples.front().omega);
    double kinks = 0.0;
    if (pot.has_delta() && xm == 0.0) {
        const auto& m = st.samples[left_pts.size() - 1];
        double jump = 2.0 * pot.delta_strength();
        kinks = drho(m.R, m.omega - jump) - drho(m.R, m.omega);
    }
    double W = h * sum - h * h / 12.0 * (ends + kinks);
    if (!(W > 0.0) || !std::isfinite(W)) throw SolverFailure("normalization failed");
    st.W = W;
    st.slope_jumps = kinks / W;
    double inv_sqrt_w = 1.0 / std::sqrt(W);
    for (auto& s : st.samples) {
        double lnR = s.R;
        s.R = std::exp(lnR);
        s.rho = std::exp(2.0 * lnR) / W;
        double a = s.R * inv_sqrt_w;
        s.upper = {std::cos(0.5 * s.omega) * a, 0.0};
        s.lower = {0.0, -std::sin(0.5 * s.omega) * a};
    }
    return st;
}

Eigenstate eigenstate(const Potential& pot, double p_y, double energy, const IntegratorControl& ctrl,
                      const ReconstructOptions& opts) {
    PhaseProblem prob(pot, energy, p_y);
    PhaseTrajectory traj = degenerate_separatrix(prob, ctrl, opts.extra_tail);
    return reconstruct(pot, p_y, energy, traj, opts);
}

double norm(const Eigenstate& state) {
    double s = 0.0;
    for (std::size_t i = 0; i < state.samples.size(); ++i) {
        double w = (i == 0 || i + 1 == state.samples.size()) ? 0.5 : 1.0;
        s += w * state.samples[i].rho;
    }
    double ends = 0.0;
    if (!state.samples.empty()) {
        const auto& a = state.samples.front();
        const auto& b = state.samples.back();
        ends = 2.0 * (b.dlnR * b.rho - a.dlnR * a.rho);
    }
    return state.spacing * s - state.spacing * state.spacing / 12.0 * (ends + state.slope_jumps);
}

std::function<double(double)> delta_limit_phase(const Potential& pot, double p_y, double energy, double max_ratio) {
    if (!(p_y > 0.0) || std::abs(energy) > p_y) throw InvalidParams("need p_y > 0 and |E| <= p_y");
    double base = -std::asin(energy / p_y);
    if (pot.is_zero()) return [base](double) { return base; };
    double dn = pot.delta_n_G();
    if (dn == 0.0) throw ConditionViolated("G is a multiple of pi");
    if (!pot.x_moment_integrable()) throw ConditionViolated("x U(x) is not integrable");
    double ratio = p_y * pot.width() / std::min(dn, 1.0 - dn);
    if (ratio > max_ratio)
        throw ConditionViolated("p_y * width / min(dn, 1 - dn) = " + std::to_string(ratio) + " exceeds " +
                                std::to_string(max_ratio));
    return [pot, base](double x) { return base + 2.0 * pot.antiderivative(x); };
}

} // namespace phasebound
