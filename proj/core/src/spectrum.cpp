#include "phasebound/spectrum.hpp"

#include "phasebound/errors.hpp"
#include "phasebound/parallel.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace phasebound {

namespace {

double clamp_to_band(double p_y, double energy, const IntegratorControl& ctrl) {
    if (!std::isfinite(energy) || std::abs(energy) > p_y)
        throw InvalidParams("energy must lie in [-p_y, p_y]");
    double edge = edge_energy(p_y, 1, ctrl);
    return std::clamp(energy, -edge, edge);
}

struct GridPoint {
    double theta;
    BranchSample sample;
};

} // namespace

BranchSample sample_branch(const Potential& pot, double p_y, double energy, const IntegratorControl& ctrl) {
    double e = clamp_to_band(p_y, energy, ctrl);
    IntegratorControl quiet = ctrl;
    quiet.record = false;
    quiet.basin_fallback = true;
    PhaseTrajectory t = left_separatrix(PhaseProblem(pot, e, p_y), quiet);
    return {e, t.terminal.branch, t.terminal};
}

int staircase_value(const Potential& pot, double p_y, double energy, const IntegratorControl& ctrl) {
    BranchSample s = sample_branch(pot, p_y, energy, ctrl);
    if (s.terminal.kind == TerminalKind::NearRepellorPlus)
        throw NearEigenvalue("E = " + std::to_string(s.energy) + " is within classification tolerance of a level");
    return s.branch;
}

int count_levels(const Potential& pot, double p_y, const IntegratorControl& ctrl) {
    if (!primitive(pot).limits_finite()) throw DivergentPrimitive("primitive diverges at infinity");
    int lo = staircase_value(pot, p_y, -p_y, ctrl);
    int hi = staircase_value(pot, p_y, p_y, ctrl);
    return lo - hi;
}

int count_between(const Potential& pot, double p_y, double e1, double e2, const IntegratorControl& ctrl) {
    if (e1 == e2) {
        clamp_to_band(p_y, e1, ctrl);
        return 0;
    }
    return std::abs(staircase_value(pot, p_y, e2, ctrl) - staircase_value(pot, p_y, e1, ctrl));
}

SpectrumReport find_eigenvalues(const Potential& pot, double p_y, const SpectrumOptions& opts) {
    if (!(opts.refine_tol > 0.0)) throw InvalidParams("refine_tol must be positive");
    if (opts.grid_points < 2) throw InvalidParams("grid needs at least two points");
    if (!primitive(pot).limits_finite()) throw DivergentPrimitive("primitive diverges at infinity");
    const IntegratorControl& ctrl = opts.control;
    const double e_hi = edge_energy(p_y, 1, ctrl);
    const double theta_hi = std::asin(e_hi / p_y);
    const double tol = opts.refine_tol * p_y;
    auto sample = [&](double theta) {
        double e = theta >= theta_hi ? e_hi : theta <= -theta_hi ? -e_hi : p_y * std::sin(theta);
        return GridPoint{theta, sample_branch(pot, p_y, e, ctrl)};
    };

    std::size_t n = opts.grid_points;
    std::vector<GridPoint> grid = parallel_map<GridPoint>(n, opts.threads, [&](std::size_t i) {
        double theta = -theta_hi + 2.0 * theta_hi * static_cast<double>(i) / static_cast<double>(n - 1);
        return sample(theta);
    });

    SpectrumReport report;
    report.p_y = p_y;
    report.level_count = grid.front().sample.branch - grid.back().sample.branch;
    if (report.level_count < 0) throw BracketMiss("staircase rises across the band");

    // Split intervals that hold more than one level until every level sits
    // alone in a bracket.
    for (int round = 0;; ++round) {
        std::vector<std::size_t> crowded;
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            int drop = grid[i].sample.branch - grid[i + 1].sample.branch;
            if (drop < 0) throw BracketMiss("staircase is not monotone near E = " + std::to_string(grid[i].sample.energy));
            if (drop >= 2) crowded.push_back(i);
        }
        if (crowded.empty()) break;
        for (std::size_t i : crowded)
            if (p_y * (grid[i + 1].theta - grid[i].theta) < tol || round > 60)
                throw BracketMiss("levels could not be separated near E = " + std::to_string(grid[i].sample.energy));
        auto mids = parallel_map<GridPoint>(crowded.size(), opts.threads, [&](std::size_t j) {
            std::size_t i = crowded[j];
            return sample(0.5 * (grid[i].theta + grid[i + 1].theta));
        });
        grid.insert(grid.end(), mids.begin(), mids.end());
        std::sort(grid.begin(), grid.end(), [](const GridPoint& a, const GridPoint& b) { return a.theta < b.theta; });
    }

    std::vector<std::size_t> brackets;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (grid[i].sample.branch - grid[i + 1].sample.branch == 1) brackets.push_back(i);
    if (static_cast<int>(brackets.size()) != report.level_count)
        throw BracketMiss("bracket count differs from the level count");

    report.eigenvalues = parallel_map<Eigenvalue>(brackets.size(), opts.threads, [&](std::size_t j) {
        std::size_t i = brackets[j];
        double lo = grid[i].sample.energy, hi = grid[i + 1].sample.energy;
        int b_lo = grid[i].sample.branch, b_hi = grid[i + 1].sample.branch;
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            int b = sample_branch(pot, p_y, mid, ctrl).branch;
            if (b == b_lo) lo = mid;
            else if (b == b_hi) hi = mid;
            else throw BracketMiss("branch jumped by more than one inside a bracket");
        }
        Eigenvalue ev{0.5 * (lo + hi), 0.5 * (hi - lo)};
        if (!opts.polish) return ev;
        try {
            auto mismatch = [&](double e) { return separatrix_mismatch(PhaseProblem(pot, e, p_y), ctrl); };
            double d_lo = mismatch(lo), d_hi = mismatch(hi);
            if (d_lo == 0.0) return Eigenvalue{lo, ev.uncertainty};
            if (d_hi == 0.0) return Eigenvalue{hi, ev.uncertainty};
            if ((d_lo < 0.0) == (d_hi < 0.0)) return ev;
            std::uintmax_t iters = 40;
            auto stop = boost::math::tools::eps_tolerance<double>(40);
            auto root = boost::math::tools::toms748_solve(mismatch, lo, hi, d_lo, d_hi, stop, iters);
            return Eigenvalue{0.5 * (root.first + root.second), ev.uncertainty};
        } catch (const Error&) {
            return ev;
        }
    });

    for (const auto& g : grid)
        report.staircase.points.push_back({g.sample.energy, g.sample.branch, g.sample.terminal.residual});
    report.staircase.e_lo = -e_hi;
    report.staircase.e_hi = e_hi;
    return report;
}

} // namespace phasebound
