#include "phasebound/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace phasebound {

namespace {

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out + "\"";
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string staircase_csv(const Staircase& s) {
    std::ostringstream out;
    out << "E,branch\n";
    for (const auto& p : s.points) out << format_number(p.energy) << ',' << p.branch << '\n';
    return out.str();
}

std::string trajectory_csv(const PhaseTrajectory& t) {
    std::ostringstream out;
    out << "x,omega\n";
    for (std::size_t i = 0; i < t.x.size(); ++i) out << format_number(t.x[i]) << ',' << format_number(t.omega[i]) << '\n';
    return out.str();
}

std::string eigenstate_csv(const Eigenstate& s) {
    std::ostringstream out;
    out << "# p_y=" << format_number(s.p_y) << " E_d=" << format_number(s.energy) << " W=" << format_number(s.W)
        << " k=" << format_number(s.k) << '\n';
    out << "# spinor = (cos(omega/2), -i sin(omega/2)) * R / sqrt(W); the factors exp(i p_y y) and "
           "exp(i * integral (E - U) dx) are omitted\n";
    out << "x,omega,R,phi,rho\n";
    for (const auto& p : s.samples)
        out << format_number(p.x) << ',' << format_number(p.omega) << ',' << format_number(p.R) << ','
            << format_number(p.phi) << ',' << format_number(p.rho) << '\n';
    return out.str();
}

std::string field_grid_csv(const FieldGrid& g) {
    std::ostringstream out;
    out << "U,omega,FU,Fomega\n";
    std::size_t nw = g.omega_axis.size();
    for (std::size_t iu = 0; iu < g.U_axis.size(); ++iu)
        for (std::size_t iw = 0; iw < nw; ++iw)
            out << format_number(g.U_axis[iu]) << ',' << format_number(g.omega_axis[iw]) << ','
                << format_number(g.FU[iu * nw + iw]) << ',' << format_number(g.Fomega[iu * nw + iw]) << '\n';
    return out.str();
}

std::string trace_csv(const IntervalTrace& t) {
    std::ostringstream out;
    out << "U,omega\n";
    for (std::size_t i = 0; i < t.U.size(); ++i) out << format_number(t.U[i]) << ',' << format_number(t.omega[i]) << '\n';
    return out.str();
}

std::string ring_csv(const RingTrajectory& r) {
    std::ostringstream out;
    out << "X,Y\n";
    for (std::size_t i = 0; i < r.X.size(); ++i) out << format_number(r.X[i]) << ',' << format_number(r.Y[i]) << '\n';
    return out.str();
}

std::string count_json(double p_y, int level_count, int branch_minus, int branch_plus) {
    std::ostringstream out;
    out << "{\"p_y\":" << json_number(p_y) << ",\"N_d\":" << level_count << ",\"edge_branches\":{\"minus\":"
        << branch_minus << ",\"plus\":" << branch_plus << "}}";
    return out.str();
}

std::string spectrum_json(const SpectrumReport& r) {
    std::ostringstream out;
    out << "{\"p_y\":" << json_number(r.p_y) << ",\"N_d\":" << r.level_count << ",\"eigenvalues\":[";
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
        if (i) out << ',';
        out << "{\"E\":" << json_number(r.eigenvalues[i].energy)
            << ",\"uncertainty\":" << json_number(r.eigenvalues[i].uncertainty) << '}';
    }
    out << "],\"staircase\":[";
    for (std::size_t i = 0; i < r.staircase.points.size(); ++i) {
        if (i) out << ',';
        out << "{\"E\":" << json_number(r.staircase.points[i].energy) << ",\"branch\":" << r.staircase.points[i].branch
            << '}';
    }
    out << "]}";
    return out.str();
}

std::string portrait_json(const PortraitResult& p) {
    std::ostringstream out;
    out << "{\"E\":" << json_number(p.energy) << ",\"p_y\":" << json_number(p.p_y) << ",\"winding\":" << p.ring.winding
        << ",\"index\":" << p.index << ",\"seed\":" << json_number(p.seed)
        << ",\"ring_radius\":" << json_number(p.ring.radius) << ",\"closure_gap\":" << json_number(p.ring.closure_gap)
        << '}';
    return out.str();
}

std::string validation_json(double p_y, const std::vector<ValidationRow>& rows) {
    std::ostringstream out;
    out << "{\"p_y\":" << json_number(p_y) << ",\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (i) out << ',';
        out << "{\"limit\":" << json_string(r.limit) << ",\"predicted\":" << json_number(r.predicted)
            << ",\"numeric\":" << json_number(r.numeric) << ",\"discrepancy\":" << json_number(r.discrepancy)
            << ",\"validity_metric\":" << json_number(r.validity_metric);
        if (!r.note.empty()) out << ",\"note\":" << json_string(r.note);
        out << '}';
    }
    out << "]}";
    return out.str();
}

} // namespace phasebound
