#include "doctest.h"

#include <phasebound/integrator.hpp>

#include <cmath>
#include <vector>

using namespace phasebound;
using doctest::Approx;

namespace {

// y' = -2 x y, y(-3) = exp(-9): y = exp(-x^2).
State<1> gaussian_rhs(double x, const State<1>& y) { return {-2.0 * x * y[0]}; }

std::vector<DenseStep<1>> run_gaussian(double rtol, State<1>* end = nullptr, double x1 = 3.0) {
    std::vector<DenseStep<1>> steps;
    StepControl sc;
    sc.rtol = rtol;
    sc.atol = rtol;
    State<1> y = integrate_dopri<1>(gaussian_rhs, State<1>{std::exp(-9.0)}, -3.0, x1, sc,
                                    [](double) { return 0.5; },
                                    [&](const DenseStep<1>& s) { steps.push_back(s); });
    if (end) *end = y;
    return steps;
}

} // namespace

TEST_CASE("integrate_dopri: end value within tolerance") {
    State<1> y;
    run_gaussian(1e-10, &y);
    CHECK(y[0] == Approx(std::exp(-9.0)).epsilon(1e-8));
}

TEST_CASE("integrate_dopri: backward run reverses a forward run") {
    StepControl sc;
    sc.rtol = sc.atol = 1e-11;
    auto none = [](const DenseStep<1>&) {};
    auto hmax = [](double) { return 0.5; };
    State<1> mid = integrate_dopri<1>(gaussian_rhs, State<1>{1.0}, 0.0, 1.5, sc, hmax, none);
    State<1> back = integrate_dopri<1>(gaussian_rhs, mid, 1.5, 0.0, sc, hmax, none);
    CHECK(mid[0] == Approx(std::exp(-2.25)).epsilon(1e-9));
    CHECK(back[0] == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("integrate_dopri: steps tile the interval and respect the step bound") {
    auto steps = run_gaussian(1e-8);
    REQUIRE(!steps.empty());
    CHECK(steps.front().x0 == -3.0);
    CHECK(steps.back().x1() == 3.0);
    for (std::size_t i = 1; i < steps.size(); ++i) CHECK(steps[i].x0 == steps[i - 1].x1());
    for (const auto& s : steps) CHECK(std::abs(s.h) <= 0.5 + 1e-15);
}

TEST_CASE("DenseStep: interpolant matches the solution inside each step") {
    auto steps = run_gaussian(1e-10);
    double worst = 0.0, worst_d = 0.0;
    for (const auto& s : steps) {
        CHECK(s.value(s.x0)[0] == Approx(s.r[0][0]));
        // Local solution through the step's start value, so global error drops out.
        double y0 = s.r[0][0];
        for (double t : {0.25, 0.5, 0.75}) {
            double x = s.x0 + t * s.h;
            double y = y0 * std::exp(s.x0 * s.x0 - x * x);
            worst = std::max(worst, std::abs(s.value(x)[0] - y));
            worst_d = std::max(worst_d, std::abs(s.derivative(x)[0] + 2.0 * x * y));
        }
    }
    CHECK(worst < 1e-8);
    CHECK(worst_d < 1e-6);
}

TEST_CASE("DenseStep: midpoint error falls at fourth order or better") {
    // Fixed steps via the step bound; the continuous extension is 4th order,
    // so halving h divides the interpolation error by at least ~16.
    auto midpoint_error = [](double h) {
        StepControl sc;
        sc.rtol = sc.atol = 1.0;  // accept every step
        sc.initial_step = h;
        double worst = 0.0;
        integrate_dopri<1>(gaussian_rhs, State<1>{std::exp(-1.0)}, -1.0, 1.0, sc, [h](double) { return h; },
                           [&](const DenseStep<1>& s) {
                               double x = s.x0 + 0.5 * s.h;
                               double y = s.r[0][0] * std::exp(s.x0 * s.x0 - x * x);
                               worst = std::max(worst, std::abs(s.value(x)[0] - y));
                           });
        return worst;
    };
    double e1 = midpoint_error(0.1), e2 = midpoint_error(0.05);
    CHECK(e1 / e2 > 12.0);
}

TEST_CASE("integrate_dopri: step budget") {
    StepControl sc;
    sc.max_steps = 3;
    CHECK_THROWS_AS(integrate_dopri<1>(gaussian_rhs, State<1>{1.0}, 0.0, 10.0, sc, [](double) { return 0.01; },
                                       [](const DenseStep<1>&) {}),
                    StiffnessFailure);
}
