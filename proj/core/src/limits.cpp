#include "phasebound/limits.hpp"

#include "phasebound/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace phasebound {

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

DeltaLimitResult delta_limit_energy(const Potential& pot, double p_y) {
    if (!(p_y > 0.0) || !std::isfinite(p_y)) throw InvalidParams("p_y must be positive and finite");
    double G = pot.strength();
    if (!std::isfinite(G)) throw InvalidParams("strength must be finite");
    DeltaLimitResult r;
    r.n_G = pot.n_G();
    r.delta_n_G = pot.delta_n_G();
    if (r.delta_n_G == 0.0) throw ExcludedCase("G is a multiple of pi");
    double sign = (r.n_G + 1) % 2 == 0 ? 1.0 : -1.0;
    r.E_pred = sign * p_y * std::cos(G);
    r.validity = p_y * pot.width() / std::min(r.delta_n_G, 1.0 - r.delta_n_G);
    r.zero_mode = std::abs(r.delta_n_G - 0.5) < 1e-12;
    return r;
}

ZeroModeFamily zero_mode_condition(const Potential& pot, int count) {
    ZeroModeFamily f;
    const auto& p = pot.params();
    for (int n = 0; n < count; ++n) {
        double m = n + 0.5;
        switch (pot.kind()) {
        case PotentialKind::Sech:
        case PotentialKind::Lorentzian:
            f.parameter = "U0";
            f.values.push_back(m / p.d);
            break;
        case PotentialKind::Exponential:
            f.parameter = "U0";
            f.values.push_back(pi * m / (2.0 * p.d));
            break;
        case PotentialKind::TopGate:
            f.parameter = "U0";
            f.values.push_back(m / (2.0 * p.h1));
            break;
        case PotentialKind::Delta:
            f.parameter = "G";
            f.values.push_back(pi * m);
            break;
        case PotentialKind::Tabulated: return f;
        }
    }
    return f;
}

namespace {

// Eigenvalues of -psi''/(2m) + U psi = eps psi below eps on a hard-wall grid.
class Numerov {
public:
    Numerov(const Potential& pot, double mass, double L, std::size_t n) : mass_(mass), n_(n) {
        h_ = 2.0 * L / static_cast<double>(n);
        u_.resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i) u_[i] = pot.regular(-L + h_ * static_cast<double>(i));
    }

    int count_below(double eps) const {
        double c = h_ * h_ / 12.0;
        auto q = [&](std::size_t i) { return 2.0 * mass_ * (eps - u_[i]); };
        double prev = 0.0, cur = 1e-30;
        double q_prev = q(0), q_cur = q(1);
        int nodes = 0;
        for (std::size_t i = 1; i < n_; ++i) {
            double q_next = q(i + 1);
            double next = (2.0 * (1.0 - 5.0 * c * q_cur) * cur - (1.0 + c * q_prev) * prev) / (1.0 + c * q_next);
            if ((next < 0.0) != (cur < 0.0) || next == 0.0) ++nodes;
            if (next == 0.0) next = -std::copysign(1e-300, cur);
            prev = cur;
            cur = next;
            double mag = std::abs(cur);
            if (mag > 1e100) {
                prev /= mag;
                cur /= mag;
            }
            q_prev = q_cur;
            q_cur = q_next;
        }
        return nodes;
    }

private:
    double mass_;
    std::size_t n_;
    double h_;
    std::vector<double> u_;
};

std::vector<double> numerov_levels(const Numerov& solver, double lo, double hi) {
    int base = solver.count_below(lo);
    int top = solver.count_below(hi);
    std::vector<double> out;
    for (int j = base; j < top; ++j) {
        double a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(std::abs(a), std::abs(b)); ++it) {
            double mid = 0.5 * (a + b);
            (solver.count_below(mid) > j ? b : a) = mid;
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

} // namespace

NonRelativisticResult nonrelativistic_levels(const Potential& pot, double p_y, const NonRelativisticOptions& opts) {
    if (!(p_y > 0.0) || !std::isfinite(p_y)) throw InvalidParams("p_y must be positive and finite");
    NonRelativisticResult r;
    double inv_width = pot.width() > 0.0 ? 1.0 / pot.width() : 0.0;
    r.applicability = std::max(pot.envelope(0.0), inv_width) / p_y;
    r.applicable = r.applicability < 0.1;
    if (pot.is_zero()) return r;
    const double mass = p_y;
    const double lo = -2.0 * p_y;
    if (pot.kind() == PotentialKind::Delta) {
        double G = pot.strength();
        double eps = -mass * G * G / 2.0;
        if (G < 0.0 && eps > lo) {
            r.eps.push_back(eps);
            r.energies.push_back(p_y + eps);
        }
        return r;
    }
    // Same truncation idea as the phase ODE: turning radius of the shallowest
    // tracked level plus ten decay lengths.
    double eps_min = 1e-6 * p_y;
    double kappa = std::sqrt(2.0 * mass * eps_min);
    double x_turn = 0.0;
    if (pot.envelope(0.0) >= eps_min) {
        double a = 0.0, b = std::max(pot.feature_scale(), 1e-3);
        while (pot.envelope(b) >= eps_min) {
            a = b;
            b *= 2.0;
        }
        for (int it = 0; it < 100; ++it) {
            double m = 0.5 * (a + b);
            (pot.envelope(m) >= eps_min ? a : b) = m;
        }
        x_turn = b;
    }
    double L = std::max({10.0 * pot.width(), 10.0 * pot.feature_scale(), x_turn + 10.0 / (2.0 * kappa)});
    double kmax = std::sqrt(2.0 * mass * std::max(pot.envelope(0.0), 1e-300));
    double h = 0.05 / kmax;
    if (pot.feature_scale() > 0.0) h = std::min(h, 0.05 * pot.feature_scale());
    std::size_t n = opts.min_points;
    while (2.0 * L / static_cast<double>(n) > h) {
        n *= 2;
        if (2 * n > opts.max_points)
            throw SolverFailure("Numerov grid for L = " + std::to_string(L) + " needs more than " +
                                std::to_string(opts.max_points) + " points");
    }
    r.half_width = L;

    double top = -1e-12 * p_y;
    double bottom = std::max(lo, pot.min_value() * (1.0 + 1e-12) - 1e-300);
    if (!(bottom < top)) return r;
    std::vector<double> prev = numerov_levels(Numerov(pot, mass, L, n), bottom, top);
    for (;;) {
        if (2 * n > opts.max_points) throw SolverFailure("Numerov grid did not converge");
        n *= 2;
        std::vector<double> cur = numerov_levels(Numerov(pot, mass, L, n), bottom, top);
        bool converged = cur.size() == prev.size();
        for (std::size_t i = 0; converged && i < cur.size(); ++i)
            converged = std::abs(cur[i] - prev[i]) <= opts.tol * std::abs(cur[i]);
        prev = std::move(cur);
        if (converged) break;
    }
    r.points = n;
    r.eps = prev;
    for (double e : prev) r.energies.push_back(p_y + e);
    return r;
}

namespace {

struct Region {
    double a, b;
};

std::vector<Region> classical_regions(const Potential& pot, double p_y, double energy) {
    MonotoneDecomposition dec = monotone_decomposition(pot);
    std::vector<double> points;
    for (std::size_t j = 0; j < dec.size(); ++j) {
        const auto& iv = dec.intervals()[j];
        if (iv.orientation == 0) continue;
        for (double c : {energy - p_y, energy + p_y}) {
            if (c > iv.u_lo && c < iv.u_hi) points.push_back(dec.inverse(j, c));
        }
    }
    for (double b : dec.breakpoints()) points.push_back(b);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    auto classical = [&](double x) { return std::abs(energy - pot.regular(x)) > p_y; };
    std::vector<Region> regions;
    if (points.empty()) {
        if (classical(0.0)) throw TurningPointFailure("classical motion extends to infinity");
        return regions;
    }
    auto probe = [&](double x) { return classical(x); };
    if (probe(points.front() - 1.0) || probe(points.back() + 1.0))
        throw TurningPointFailure("classical motion extends to infinity");
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        double a = points[i], b = points[i + 1];
        if (!probe(0.5 * (a + b))) continue;
        if (!regions.empty() && regions.back().b == a) regions.back().b = b;
        else regions.push_back({a, b});
    }
    return regions;
}

} // namespace

double classical_action(const Potential& pot, double p_y, double energy, bool* multiple_regions, double* validity) {
    if (!(p_y > 0.0)) throw InvalidParams("p_y must be positive");
    std::vector<Region> regions = classical_regions(pot, p_y, energy);
    if (multiple_regions) *multiple_regions = regions.size() > 1;
    auto px = [&](double x) {
        double v = energy - pot.regular(x);
        return std::sqrt(std::max(0.0, v * v - p_y * p_y));
    };
    boost::math::quadrature::tanh_sinh<double> ts(12);
    double total = 0.0;
    double worst = 0.0;
    for (const Region& r : regions) {
        // Geometric cuts keep each panel short compared with its distance from
        // the core, which long 1/x-like tails need.
        std::vector<double> cuts{r.a, r.b};
        for (double b : pot.breakpoints())
            if (b > r.a && b < r.b) cuts.push_back(b);
        double s = pot.feature_scale() > 0.0 ? pot.feature_scale() : 1.0;
        if (0.0 > r.a && 0.0 < r.b) cuts.push_back(0.0);
        for (double c = s; c < std::max(std::abs(r.a), std::abs(r.b)); c *= 2.0)
            for (double x : {-c, c})
                if (x > r.a && x < r.b) cuts.push_back(x);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            auto f = [&](double x) { return px(x); };
            total += ts.integrate(f, cuts[i], cuts[i + 1], 1e-12);
        }
        for (int s = 0; s <= 32; ++s) {
            double x = r.a + (r.b - r.a) * (0.25 + 0.5 * s / 32.0);
            double p = px(x);
            if (p > 0.0) worst = std::max(worst, p_y * std::abs(pot.derivative(x)) / (p * p * p));
        }
    }
    if (validity) *validity = worst;
    return 2.0 * total;
}

BohrSommerfeldResult bohr_sommerfeld_levels(const Potential& pot, double p_y, double gamma,
                                            const IntegratorControl& ctrl) {
    if (!(p_y > 0.0)) throw InvalidParams("p_y must be positive");
    BohrSommerfeldResult out;
    const double e_hi = edge_energy(p_y, 1, ctrl);
    const double th = std::asin(e_hi / p_y);
    std::vector<double> es;
    for (int i = 0; i <= 400; ++i) es.push_back(p_y * std::sin(-th + 2.0 * th * i / 400.0));
    for (double dist = 0.1 * p_y; dist > (1.0 - e_hi / p_y) * p_y; dist *= 0.1) {
        es.push_back(-p_y + dist);
        es.push_back(p_y - dist);
    }
    es.push_back(-e_hi);
    es.push_back(e_hi);
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());

    bool any_multiple = false;
    std::vector<double> action(es.size());
    for (std::size_t i = 0; i < es.size(); ++i) {
        bool multi = false;
        action[i] = classical_action(pot, p_y, es[i], &multi);
        any_multiple = any_multiple || multi;
    }
    out.multiple_regions = any_multiple;
    out.action_lo = action.front();
    out.action_hi = action.back();

    auto target = [&](int n) { return 2.0 * pi * (n + gamma); };
    for (std::size_t i = 0; i + 1 < es.size(); ++i) {
        double a0 = action[i], a1 = action[i + 1];
        double lo = std::min(a0, a1), hi = std::max(a0, a1);
        int n_first = static_cast<int>(std::ceil(lo / (2.0 * pi) - gamma));
        for (int n = std::max(n_first, 0); target(n) < hi; ++n) {
            if (target(n) <= lo) continue;
            auto f = [&](double e) { return classical_action(pot, p_y, e) - target(n); };
            std::uintmax_t iters = 60;
            auto tol = boost::math::tools::eps_tolerance<double>(45);
            auto root = boost::math::tools::toms748_solve(f, es[i], es[i + 1], a0 - target(n), a1 - target(n), tol, iters);
            double e = 0.5 * (root.first + root.second);
            double v = 0.0;
            classical_action(pot, p_y, e, nullptr, &v);
            out.levels.push_back({n, e, v});
        }
    }
    std::sort(out.levels.begin(), out.levels.end(),
              [](const SemiclassicalLevel& a, const SemiclassicalLevel& b) { return a.energy < b.energy; });
    return out;
}

std::complex<double> delta_matching_ratio(double G) { return std::polar(1.0, 2.0 * G); }

double delta_transmission(double G, double energy, double p_y) {
    if (!std::isfinite(G) || !std::isfinite(energy) || !(p_y >= 0.0))
        throw InvalidParams("need finite G, E and p_y >= 0");
    if (std::abs(energy) <= p_y) throw InsideGap("transmission needs |E| > p_y");
    double k = std::sqrt((energy - p_y) * (energy + p_y));
    if (energy < 0.0) k = -k;  // keeps the right-moving branch for holes
    // g = A e^{i(k-E)x} + B e^{-i(k+E)x} on the left, (A+B) e^{i(k-E)x} on the
    // right; g'(+0) = e^{2iG} g'(-0) fixes B/A.
    std::complex<double> m = delta_matching_ratio(G);
    double km = k - energy, kp = k + energy;
    std::complex<double> ratio = km * (m - 1.0) / (km + m * kp);
    return std::norm(1.0 + ratio);
}

double delta_transmission_closed_form(double G, double energy, double p_y) {
    if (std::abs(energy) <= p_y) throw InsideGap("transmission needs |E| > p_y");
    double k2 = (energy - p_y) * (energy + p_y);
    double s = p_y * std::sin(G);
    return k2 / (k2 + s * s);
}

} // namespace phasebound
