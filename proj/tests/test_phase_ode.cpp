#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace phasebound;
using namespace testutil;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

} // namespace

TEST_CASE("PhaseProblem: stationary families") {
    PhaseProblem p(Potential(), 0.05, 0.1);
    CHECK(p.k() == Approx(std::sqrt(0.0075)));
    CHECK(p.omega_minus(0) == Approx(-pi / 6));
    CHECK(p.omega_plus(1) == Approx(pi / 6 + 3 * pi));
    CHECK(p.rhs(1.0, p.omega_minus(2)) == Approx(0.0).scale(1.0));
    CHECK(p.rhs(1.0, p.omega_plus(-1)) == Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(PhaseProblem(Potential(), 0.0, 0.0), InvalidParams);
    CHECK_THROWS_AS(PhaseProblem(Potential(), NAN, 1.0), InvalidParams);
    CHECK_FALSE(PhaseProblem(Potential(), 1.0, 1.0).in_gap());
}

TEST_CASE("left_separatrix: zero potential stays on the repellor") {
    for (double E : {-0.07, 0.0, 0.09}) {
        PhaseProblem p(Potential(), E, 0.1);
        PhaseTrajectory t = left_separatrix(p, {});
        for (double w : t.omega) CHECK(w == Approx(-std::asin(E / 0.1)).scale(1.0).epsilon(1e-14));
        CHECK(t.terminal.kind == TerminalKind::AttractorMinus);
        CHECK(t.terminal.branch == 0);
    }
}

TEST_CASE("right_separatrix: zero potential stays on Omega_+") {
    PhaseProblem p(Potential(), 0.03, 0.1);
    PhaseTrajectory t = right_separatrix(p, {});
    for (double w : t.omega) CHECK(w == Approx(pi + std::asin(0.3)).epsilon(1e-14));
    CHECK(t.terminal.kind == TerminalKind::AttractorPlus);
}

TEST_CASE("left_separatrix: delta at the upper band edge varies by 2 pi n_G") {
    IntegratorControl ctrl;
    for (double G : {1.2, 4.0, 7.5, -2.0}) {
        Potential pot = delta(G);
        PhaseProblem p(pot, edge_energy(0.5, +1, ctrl), 0.5);
        PhaseTrajectory t = left_separatrix(p, ctrl);
        CHECK(t.terminal.kind == TerminalKind::AttractorMinus);
        CHECK(t.terminal.branch == pot.n_G());
        CHECK(t.delta_omega() == Approx(2 * pi * pot.n_G()).scale(1.0).epsilon(1e-3));
        // Flat on the left of the delta.
        for (std::size_t i = 0; i < t.x.size() && t.x[i] < 0.0; ++i)
            CHECK(t.omega[i] == Approx(p.omega_minus(0)).scale(1.0));
    }
}

TEST_CASE("left_separatrix: Lorentzian worked example varies by -4 pi") {
    IntegratorControl ctrl;
    PhaseProblem p(lorentzian(1.0, 1.0), edge_energy(0.1, +1, ctrl), 0.1);
    PhaseTrajectory t = left_separatrix(p, ctrl);
    CHECK(t.terminal.kind == TerminalKind::AttractorMinus);
    CHECK(t.terminal.branch == -2);
    CHECK(t.delta_omega() == Approx(-4 * pi).epsilon(1e-4));
    PhaseProblem lo(lorentzian(1.0, 1.0), edge_energy(0.1, -1, ctrl), 0.1);
    CHECK(left_separatrix(lo, ctrl).terminal.branch == 0);
}

TEST_CASE("right_separatrix: delta G = pi/2 at E = 0 meets Omega_- at the jump") {
    PhaseProblem p(delta(pi / 2), 0.0, 1.0);
    PhaseTrajectory t = right_separatrix(p, {});
    // Two samples at x = 0: left limit 0, right limit pi.
    std::size_t j = 0;
    while (j + 1 < t.x.size() && !(t.x[j] == 0.0 && t.x[j + 1] == 0.0)) ++j;
    REQUIRE(j + 1 < t.x.size());
    CHECK(t.omega[j] == Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(t.omega[j + 1] == Approx(pi).epsilon(1e-12));
    CHECK(t.omega.front() == Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(t.omega.back() == Approx(pi).epsilon(1e-12));
    // The two separatrices coincide: zero mismatch at the matching point.
    CHECK(std::abs(separatrix_mismatch(p, {})) < 1e-10);
}

TEST_CASE("separatrix_mismatch: Lorentzian off an eigenvalue") {
    // E = 0.05 lies between the two levels (-0.0706, 0.0971).
    PhaseProblem p(lorentzian(1.0, 1.0), 0.05, 0.1);
    CHECK(std::abs(separatrix_mismatch(p, {})) > 1e-2);
    CHECK(left_separatrix(p, {}).terminal.branch == -1);
}

TEST_CASE("integrate_phase: zero potential") {
    PhaseProblem p(Potential(), 0.02, 0.1);
    auto xs = linspace(0.0, 80.0, 401);
    PhaseTrajectory on = integrate_phase(p, p.omega_minus(0), 0.0, 80.0, {}, xs);
    for (double w : on.omega) CHECK(w == Approx(p.omega_minus(0)).epsilon(1e-14));
    PhaseTrajectory off = integrate_phase(p, p.omega_minus(0) + 0.1, 0.0, 80.0, {}, xs);
    CHECK(off.terminal.kind == TerminalKind::AttractorMinus);
    CHECK(off.terminal.branch == 0);
    CHECK(std::abs(off.omega.back() - p.omega_minus(0)) < 1e-4);
}

TEST_CASE("integrate_phase: at E = p_y free solutions decrease strictly") {
    PhaseProblem p(Potential(), 0.1, 0.1);
    auto xs = linspace(0.0, 50.0, 501);
    PhaseTrajectory t = integrate_phase(p, 0.3, 0.0, 50.0, {}, xs);
    for (std::size_t i = 1; i < t.omega.size(); ++i) CHECK(t.omega[i] < t.omega[i - 1]);
}

TEST_CASE("integrate_phase: sech variation is 2G minus the kappa integral") {
    Potential pot = sech(1.0, 1.0);
    PhaseProblem p(pot, 0.0, 0.1);
    auto xs = linspace(-40.0, 40.0, 16001);
    PhaseTrajectory t = integrate_phase(p, p.omega_minus(0), -40.0, 40.0, {}, xs);
    double dOmega = t.omega.back() - t.omega.front();
    double twoG = 2.0 * (pot.antiderivative(40.0) - pot.antiderivative(-40.0));
    CHECK(dOmega == Approx(twoG - kappa_integral(t)).epsilon(1e-7));
    CHECK(std::abs(dOmega - 2.0 * pot.strength()) < 0.5);
    CHECK(std::abs(dOmega + 2 * pi) < 0.5);
}

TEST_CASE("integrate_phase: delta jump is exactly 2G") {
    for (double G : {1.2, -0.7, 5.0}) {
        PhaseProblem p(delta(G), 0.1, 0.5);
        auto xs = linspace(-2.0, 2.0, 41);
        PhaseTrajectory fwd = integrate_phase(p, 0.4, -2.0, 2.0, {}, xs);
        PhaseTrajectory rec = integrate_phase(p, 0.4, -2.0, 2.0, {});
        std::size_t j = 0;
        while (j + 1 < rec.x.size() && !(rec.x[j] == 0.0 && rec.x[j + 1] == 0.0)) ++j;
        REQUIRE(j + 1 < rec.x.size());
        CHECK(rec.omega[j + 1] - rec.omega[j] == Approx(2.0 * G).epsilon(1e-15));
        PhaseTrajectory bwd = integrate_phase(p, fwd.omega_end, 2.0, -2.0, {});
        CHECK(bwd.omega_end == Approx(0.4).epsilon(1e-7));
    }
}

TEST_CASE("integrate_phase: forward then backward across the core") {
    IntegratorControl ctrl;
    PhaseProblem p(sech(1.0, 1.0), 0.03, 0.1);
    PhaseTrajectory sep = left_separatrix(p, ctrl);
    PhaseTrajectory window = integrate_phase(p, sep.omega_start, -sep.half_width, -5.0, ctrl);
    double w0 = window.omega_end;
    PhaseTrajectory fwd = integrate_phase(p, w0, -5.0, 5.0, ctrl);
    PhaseTrajectory back = integrate_phase(p, fwd.omega_end, 5.0, -5.0, ctrl);
    // Backward runs amplify errors by up to exp(2 k * 10) ~ 7 here.
    CHECK(std::abs(back.omega_end - w0) < 10.0 * ctrl.tol_phase * 7.0);
    CHECK_THROWS_AS(integrate_phase(p, 0.0, 1.0, 1.0, ctrl), InvalidParams);
}

TEST_CASE("left_separatrix: bounded and stable under doubling L") {
    for (Potential pot : {sech(1.0, 1.0), lorentzian(1.0, 1.0), exponential(-1.0, 0.5), top_gate(1.0, 0.25, 1.0)}) {
        for (double E : {-0.06, 0.01, 0.08}) {
            PhaseProblem p(pot, E, 0.1);
            IntegratorControl ctrl;
            PhaseTrajectory a = left_separatrix(p, ctrl);
            ctrl.half_width = 2.0 * a.half_width;
            PhaseTrajectory b = left_separatrix(p, ctrl);
            double ma = 0.0;
            for (double w : a.omega) ma = std::max(ma, std::abs(w));
            CHECK(std::isfinite(ma));
            CHECK(ma < 20.0 * pi);
            CHECK(std::abs(a.delta_omega() - b.delta_omega()) < ctrl.classify_tol);
        }
    }
}

TEST_CASE("left_separatrix: seed perturbation does not move the branch") {
    Potential pot = lorentzian(1.0, 1.0);
    for (double E : {-0.09, 0.0, 0.05}) {
        PhaseProblem p(pot, E, 0.1);
        IntegratorControl ctrl;
        PhaseTrajectory base = left_separatrix(p, ctrl);
        for (double s : {-1e-4, 1e-4}) {
            PhaseTrajectory t = integrate_phase(p, base.omega_start + s, -base.half_width, base.half_width, ctrl);
            CHECK(std::abs(t.delta_omega() - base.delta_omega()) < ctrl.classify_tol);
        }
    }
}

TEST_CASE("domain_half_width: covers the potential and the relaxation length") {
    PhaseProblem p(sech(1.0, 1.0), 0.05, 0.1);
    double L = domain_half_width(p, {});
    CHECK(L >= 10.0 * sech(1.0, 1.0).width());
    CHECK(L >= 10.0 / (2.0 * p.k()));
    IntegratorControl tight;
    tight.seed_tol = 1e-30;
    tight.max_half_width = 1e3;
    CHECK_THROWS_AS(domain_half_width(PhaseProblem(lorentzian(1.0, 1.0), 0.05, 0.1), tight), DomainTooSmall);
    CHECK_THROWS_AS(left_separatrix(PhaseProblem(Potential(), 0.1, 0.1), {}), InvalidParams);
}

TEST_CASE("classify: basins and repellor side") {
    PhaseProblem p(Potential(), 0.0, 1.0);
    TerminalClass a = classify_forward(p, 2 * pi + 1e-5, 1e-3);
    CHECK(a.kind == TerminalKind::AttractorMinus);
    CHECK(a.branch == 1);
    TerminalClass r = classify_forward(p, pi - 1e-4, 1e-3);
    CHECK(r.kind == TerminalKind::NearRepellorPlus);
    CHECK(r.side == -1);
    TerminalClass u = classify_forward(p, 1.0, 1e-3);
    CHECK(u.kind == TerminalKind::Unresolved);
    CHECK(u.branch == 0);
    CHECK(forward_basin(p, pi + 0.1) == 1);
    CHECK(backward_basin(p, -0.1) == -1);
    TerminalClass b = classify_backward(p, pi + 1e-5, 1e-3);
    CHECK(b.kind == TerminalKind::AttractorPlus);
    CHECK(b.branch == 0);
}

TEST_CASE("tail_response: exponential tail in closed form") {
    // 2 int_0^inf U0 e^{-(L+t)/d} e^{-2kt} dt = 2 U0 e^{-L/d} / (1/d + 2k).
    Potential pot = exponential(-1.0, 0.5);
    double k = 0.3, L = 4.0;
    double exact = 2.0 * -1.0 * std::exp(-L / 0.5) / (1.0 / 0.5 + 2.0 * k);
    CHECK(tail_response(pot, -L, -1, k) == Approx(exact).epsilon(1e-10));
    CHECK(tail_response(pot, L, +1, k) == Approx(exact).epsilon(1e-10));
    CHECK(tail_response(delta(1.0), -1.0, -1, k) == 0.0);
}
