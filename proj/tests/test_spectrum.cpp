#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace phasebound;
using namespace testutil;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

TEST_CASE("staircase_value: examples") {
    CHECK(staircase_value(Potential(), 0.1, 0.03) == 0);
    Potential lor = lorentzian(1.0, 1.0);
    CHECK(staircase_value(lor, 0.1, 0.1) == -2);
    CHECK(staircase_value(lor, 0.1, -0.1) == 0);
    Potential d = delta(1.2);
    CHECK(staircase_value(d, 0.5, 0.5) == 0);
    CHECK(staircase_value(d, 0.5, -0.5) == 1);
}

TEST_CASE("staircase_value: NearEigenvalue on an eigenvalue") {
    CHECK_THROWS_AS(staircase_value(delta(pi / 2), 1.0, 0.0), NearEigenvalue);
    BranchSample s = sample_branch(delta(pi / 2), 1.0, 0.0, {});
    CHECK(s.terminal.kind == TerminalKind::NearRepellorPlus);
}

TEST_CASE("count_levels: examples") {
    CHECK(count_levels(lorentzian(1.0, 1.0), 0.1) == 2);
    for (double G : {0.1, 1.2, 2.0, 3.0})
        for (double p_y : {0.05, 1.0, 7.0}) CHECK(count_levels(delta(G), p_y) == 1);
    CHECK(count_levels(Potential(), 0.3) == 0);
    CHECK(count_levels(sech(0.0, 1.0), 0.1) == 0);
}

TEST_CASE("count_between: examples") {
    Potential lor = lorentzian(1.0, 1.0);
    CHECK(count_between(lor, 0.1, -0.1, 0.1) == 2);
    CHECK(count_between(lor, 0.1, 0.02, 0.02) == 0);
    CHECK(count_between(lor, 0.1, 0.0, -0.1) == 1);
    CHECK(count_between(delta(pi / 2), 1.0, -0.5, 0.5) == 1);
    CHECK_THROWS_AS(count_between(delta(pi / 2), 1.0, 0.0, 0.5), NearEigenvalue);
}

TEST_CASE("find_eigenvalues: delta levels") {
    SpectrumReport a = find_eigenvalues(delta(pi / 2), 0.3);
    REQUIRE(a.eigenvalues.size() == 1);
    CHECK(std::abs(a.eigenvalues[0].energy) < 1e-8 * 0.3);
    SpectrumReport b = find_eigenvalues(delta(0.1), 0.2);
    REQUIRE(b.eigenvalues.size() == 1);
    CHECK(b.eigenvalues[0].energy == Approx(-0.2 * std::cos(0.1)).epsilon(1e-9));
    CHECK(b.eigenvalues[0].energy == Approx(-0.199001).epsilon(1e-6));
    CHECK(find_eigenvalues(Potential(), 0.2).eigenvalues.empty());
}

TEST_CASE("find_eigenvalues: Lorentzian against the Dirac grid oracle") {
    // Finite-difference Dirac levels at L = 600, n = 2^16 and 2^17, with
    // Richardson extrapolation in the grid spacing.
    const double frozen[] = {-0.07062286123, 0.09708653443};
    SpectrumReport r = find_eigenvalues(lorentzian(1.0, 1.0), 0.1);
    CHECK(r.level_count == 2);
    REQUIRE(r.eigenvalues.size() == 2);
    for (int i = 0; i < 2; ++i) CHECK(r.eigenvalues[i].energy == Approx(frozen[i]).epsilon(1e-8).scale(1.0));
}

TEST_CASE("find_eigenvalues: sech against a live Dirac grid oracle") {
    // Frozen extrapolated values: 0 and 0.42318070155.
    Potential pot = sech(1.0, 1.0);
    auto U = [&](double x) { return pot(x); };
    oracle::DiracLevels o = oracle::dirac_gap_levels(U, 0.5, 60.0, 1u << 14);
    SpectrumReport r = find_eigenvalues(pot, 0.5);
    REQUIRE(r.eigenvalues.size() == 2);
    REQUIRE(o.energies.size() == 2);
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(r.eigenvalues[i].energy - o.energies[i]) <= std::max(1e-6, 5.0 * o.error));
    CHECK(std::abs(r.eigenvalues[0].energy) < 1e-8);
    CHECK(r.eigenvalues[1].energy == Approx(0.42318070155).epsilon(1e-9));
}

TEST_CASE("find_eigenvalues: staircase structure") {
    for (Potential pot : {sech(2.3, 1.0), lorentzian(3.0, 0.7), exponential(-1.5, 1.0), top_gate(1.0, 0.4, 1.0)}) {
        const double p_y = 0.4;
        SpectrumReport r = find_eigenvalues(pot, p_y);
        CHECK(static_cast<int>(r.eigenvalues.size()) == r.level_count);
        const auto& pts = r.staircase.points;
        REQUIRE(pts.size() >= 2);
        for (std::size_t i = 1; i < pts.size(); ++i) {
            CHECK(pts[i].energy > pts[i - 1].energy);
            CHECK(pts[i].branch <= pts[i - 1].branch);
        }
        CHECK(pts.front().branch - pts.back().branch == r.level_count);
        for (const auto& e : r.eigenvalues) {
            CHECK(std::abs(e.energy) < p_y);
            // Exactly one unit step across the level.
            double h = 1e-6 * p_y;
            int below = sample_branch(pot, p_y, e.energy - h, {}).branch;
            int above = sample_branch(pot, p_y, e.energy + h, {}).branch;
            CHECK(below - above == 1);
        }
    }
}

TEST_CASE("staircase_value: constant between levels") {
    Potential pot = sech(2.3, 1.0);
    const double p_y = 0.4;
    SpectrumReport r = find_eigenvalues(pot, p_y);
    std::vector<double> edges{-p_y};
    for (const auto& e : r.eigenvalues) edges.push_back(e.energy);
    edges.push_back(p_y);
    std::mt19937_64 rng(7);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double a = edges[i], b = edges[i + 1], pad = 1e-4 * p_y;
        if (b - a < 10.0 * pad) continue;  // the top level sits 6e-7 below the edge
        std::uniform_real_distribution<double> dist(a + pad, b - pad);
        int expected = staircase_value(pot, p_y, 0.5 * (a + b));
        for (int j = 0; j < 10; ++j) CHECK(staircase_value(pot, p_y, dist(rng)) == expected);
    }
}

TEST_CASE("find_eigenvalues: finer scans find no extra levels") {
    Potential pot = lorentzian(5.0, 0.3);
    SpectrumOptions coarse;
    SpectrumOptions fine;
    fine.grid_points = 256;
    SpectrumReport a = find_eigenvalues(pot, 0.25, coarse);
    SpectrumReport b = find_eigenvalues(pot, 0.25, fine);
    CHECK(a.level_count == b.level_count);
    REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
        CHECK(a.eigenvalues[i].energy == Approx(b.eigenvalues[i].energy).epsilon(1e-8).scale(0.25));
}

TEST_CASE("find_eigenvalues: result does not depend on the thread count") {
    Potential pot = sech(2.3, 1.0);
    SpectrumOptions one, four;
    one.threads = 1;
    four.threads = 4;
    SpectrumReport a = find_eigenvalues(pot, 0.4, one);
    SpectrumReport b = find_eigenvalues(pot, 0.4, four);
    REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) CHECK(a.eigenvalues[i].energy == b.eigenvalues[i].energy);
    REQUIRE(a.staircase.points.size() == b.staircase.points.size());
    for (std::size_t i = 0; i < a.staircase.points.size(); ++i) {
        CHECK(a.staircase.points[i].energy == b.staircase.points[i].energy);
        CHECK(a.staircase.points[i].branch == b.staircase.points[i].branch);
    }
}

TEST_CASE("find_eigenvalues: bisection alone agrees with the polished value") {
    SpectrumOptions raw;
    raw.polish = false;
    SpectrumReport a = find_eigenvalues(delta(0.7), 0.5, raw);
    REQUIRE(a.eigenvalues.size() == 1);
    CHECK(std::abs(a.eigenvalues[0].energy + 0.5 * std::cos(0.7)) <= 1e-8 * 0.5);
}
