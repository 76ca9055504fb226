#pragma once

#include "phasebound/limits.hpp"
#include "phasebound/phase_ode.hpp"
#include "phasebound/portrait.hpp"
#include "phasebound/spectrum.hpp"
#include "phasebound/wavefunction.hpp"

#include <string>
#include <vector>

namespace phasebound {

/// %.17g; non-finite values become "nan" / "inf" / "-inf".
std::string format_number(double v);

std::string staircase_csv(const Staircase& s);
std::string trajectory_csv(const PhaseTrajectory& t);
std::string eigenstate_csv(const Eigenstate& s);
std::string field_grid_csv(const FieldGrid& g);
std::string trace_csv(const IntervalTrace& t);
std::string ring_csv(const RingTrajectory& r);

std::string count_json(double p_y, int level_count, int branch_minus, int branch_plus);
std::string spectrum_json(const SpectrumReport& r);
std::string portrait_json(const PortraitResult& p);

struct ValidationRow {
    std::string limit;
    double predicted;
    double numeric;
    double discrepancy;
    double validity_metric;
    std::string note;
};

std::string validation_json(double p_y, const std::vector<ValidationRow>& rows);

} // namespace phasebound
