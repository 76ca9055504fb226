#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <numbers>

using namespace phasebound;
using namespace testutil;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

TEST_CASE("field_grid: Lorentzian left interval at the upper band edge") {
    Potential pot = lorentzian(1.0, 1.0);
    FieldGrid g = field_grid(pot, 0.1, 0.1, 0);
    CHECK(g.U_axis.size() == 64);
    CHECK(g.omega_axis.size() == 128);
    CHECK(g.FU.size() == 64 * 128);
    CHECK(g.U_axis.front() == Approx(-1.0));
    CHECK(g.U_axis.back() == Approx(0.0).scale(1.0));
    REQUIRE(!g.stationary.empty());
    for (const auto& s : g.stationary) {
        CHECK((s.U == 0.0 || s.U == -1.0));
        CHECK(std::sin(s.omega) == Approx((s.U - 0.1) / 0.1).scale(1.0));
    }
    // G_1 vanishes on both end rows.
    CHECK(g.FU[0] == Approx(0.0).scale(1.0));
    CHECK(g.FU[63 * 128] == Approx(0.0).scale(1.0));
    // Omega component is the phase equation with U as the coordinate.
    std::size_t i = 10 * 128 + 17;
    CHECK(g.Fomega[i] == Approx(2.0 * (g.U_axis[10] - 0.1) - 0.2 * std::sin(g.omega_axis[17])));
    CHECK_THROWS_AS(field_grid(pot, 0.1, 0.1, 2), IndexOutOfRange);
}

TEST_CASE("field_grid: zero potential has one degenerate interval") {
    FieldGrid g = field_grid(Potential(), 0.2, 0.1, 0);
    for (double fu : g.FU) CHECK(fu == 0.0);
    REQUIRE(!g.stationary.empty());
    for (const auto& s : g.stationary) CHECK(std::sin(s.omega) == Approx(-0.5));
}

TEST_CASE("field_grid: sech right interval keeps only reachable rows") {
    FieldGrid g = field_grid(sech(1.0, 1.0), 0.1, 0.0, 1);
    REQUIRE(!g.stationary.empty());
    for (const auto& s : g.stationary) {
        CHECK(s.U == 0.0);
        CHECK(std::abs(std::sin(s.omega)) < 1e-12);
    }
}

TEST_CASE("separatrix_in_phase_space: Lorentzian edge indices") {
    Potential pot = lorentzian(1.0, 1.0);
    PortraitResult up = separatrix_in_phase_space(pot, 0.1, 0.1);
    CHECK(up.index == -2);
    CHECK(up.ring.winding == -2);
    CHECK(up.traces.size() == 2);
    PortraitResult down = separatrix_in_phase_space(pot, 0.1, -0.1);
    CHECK(down.index == 0);
    CHECK(down.ring.winding == 0);
    CHECK(up.ring.radius == Approx(2.1));
}

TEST_CASE("separatrix_in_phase_space: zero potential") {
    PortraitResult r = separatrix_in_phase_space(Potential(), 0.3, 0.1);
    CHECK(r.index == 0);
    CHECK(r.ring.winding == 0);
    CHECK(r.ring.closure_gap < 1e-3 * r.ring.radius);
}

TEST_CASE("separatrix_in_phase_space: index matches the staircase and ignores the seed") {
    Potential pot = sech(2.3, 1.0);
    for (double E : {-0.35, -0.1, 0.12, 0.3}) {
        int branch = staircase_value(pot, 0.4, E);
        for (double seed : {0.01, 0.03, 0.1}) {
            PortraitResult r = separatrix_in_phase_space(pot, 0.4, E, seed);
            CHECK(r.ring.winding == branch);
            CHECK(r.index == branch);
        }
    }
}

TEST_CASE("separatrix_in_phase_space: refuses energies on a level") {
    CHECK_THROWS_AS(separatrix_in_phase_space(delta(pi / 2), 1.0, 0.0, 0.0), NotClosed);
    CHECK_THROWS_AS(separatrix_in_phase_space(Potential(), 0.3, 0.5), InvalidParams);
}

TEST_CASE("stable_trajectory: open ends 2 a k apart for the zero potential") {
    const double p_y = 0.3, E = 0.1;
    double k = std::sqrt(p_y * p_y - E * E);
    PortraitOptions opts;
    opts.ring_radius = 2.0 * p_y;  // a = 2
    RingTrajectory r = stable_trajectory(Potential(), p_y, E, 0.0, 1.0, opts);
    CHECK(r.closure_gap == Approx(2.0 * 2.0 * k).epsilon(0.05));
}

TEST_CASE("polygon_winding: circles") {
    std::vector<double> X, Y;
    for (int i = 0; i < 100; ++i) {
        double t = -2.0 * 2 * pi * i / 100.0;
        X.push_back(std::cos(t));
        Y.push_back(std::sin(t));
    }
    CHECK(polygon_winding(X, Y) == -2);
    std::vector<double> X2{2, 3, 3, 2}, Y2{0, 0, 1, 1};
    CHECK(polygon_winding(X2, Y2) == 0);
}
