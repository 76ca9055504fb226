#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace phasebound {

/// Units: hbar = s = 1 throughout.
enum class PotentialKind { Delta, Sech, Exponential, Lorentzian, TopGate, Tabulated };

std::string_view kind_name(PotentialKind kind);

/// Accepts the lowercase names printed by kind_name plus a few aliases
/// ("exp", "top-gate", "table"). Throws InvalidParams otherwise.
PotentialKind parse_kind(std::string_view name);

/// Kind-specific parameters. Unused fields are ignored.
///   Delta:        U = G * delta(x)
///   Sech:         U = -U0 / cosh(x/d)
///   Exponential:  U =  U0 * exp(-|x|/d)
///   Lorentzian:   U = -U0 / (1 + (x/d)^2)
///   TopGate:      U = (U0/2) * ln((x^2 + (h2-h1)^2) / (x^2 + (h2+h1)^2))
///   Tabulated:    monotone cubic (PCHIP) through (table_x, table_u), zero outside
struct PotentialParams {
    double G = 0.0;
    double U0 = 0.0;
    double d = 1.0;
    double h1 = 0.0;
    double h2 = 0.0;
    std::vector<double> table_x;
    std::vector<double> table_u;
    /// Largest allowed |U| at either table edge, relative to max|U| of the table.
    double table_edge_tol = 1e-3;
};

namespace detail {
struct PotentialData;
}

/// Immutable, cheap-to-copy handle. Copies share the underlying data, so a
/// Potential can be handed to concurrent energy scans freely.
class Potential {
public:
    /// The zero potential.
    Potential();

    PotentialKind kind() const;
    const PotentialParams& params() const;

    /// G = integral of U over the line, and G = pi * (n_G + delta_n_G).
    double strength() const;
    int n_G() const;
    double delta_n_G() const;
    double width() const;

    /// Shortest length on which U varies; 0 for Delta.
    double feature_scale() const;
    bool is_zero() const;

    /// U(x). Throws EvalAtSingularity at a delta location.
    double operator()(double x) const;
    /// U(x) without the delta part; never throws.
    double regular(double x) const;
    double derivative(double x) const;

    /// sup |U(x)| over |x| >= r for the regular part of U.
    double envelope(double r) const;
    double min_value() const;
    double max_value() const;
    /// Location of max |U|; 0 for the symmetric catalog kinds.
    double argmax_abs() const;

    /// Points where U or U' is discontinuous (delta location, cusp, table
    /// edges). An integrator has to stop on them.
    const std::vector<double>& breakpoints() const;
    bool has_delta() const;
    /// Strength of the delta located at x = 0 (0 if none).
    double delta_strength() const;

    /// Integral of U from -infinity to x; right-continuous at a delta.
    double antiderivative(double x) const;
    bool x_moment_integrable() const;

private:
    explicit Potential(std::shared_ptr<const detail::PotentialData> data);
    std::shared_ptr<const detail::PotentialData> data_;
    friend Potential make_potential(PotentialKind kind, PotentialParams params);
};

/// Throws InvalidParams for non-positive widths, h1 >= h2, unsorted tables,
/// or tables that do not decay at their edges.
Potential make_potential(PotentialKind kind, PotentialParams params);

double evaluate(const Potential& p, double x);

/// f(x) = integral of U from x0 to x.
class Primitive {
public:
    Primitive(Potential pot, double x0);

    double anchor() const { return x0_; }
    double operator()(double x) const;
    double lower_limit() const;
    double upper_limit() const;
    /// Always true for the supported kinds; kept for callers that check.
    bool limits_finite() const { return true; }
    bool x_moment_integrable() const { return pot_.x_moment_integrable(); }

private:
    Potential pot_;
    double x0_;
    double f0_;
};

Primitive primitive(const Potential& p, double x0 = 0.0);

struct MonotoneInterval {
    double x_lo;
    double x_hi;
    double u_lo;
    double u_hi;
    /// +1 if U increases with x, -1 if it decreases, 0 for constant U.
    int orientation;
};

/// Split of the line into intervals on which U is monotone. slope(j, u) is
/// G_j(U) = U'(x) at the point of interval j where U(x) = u.
class MonotoneDecomposition {
public:
    MonotoneDecomposition(Potential pot, std::vector<double> breakpoints,
                          std::vector<MonotoneInterval> intervals);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<MonotoneInterval>& intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    bool degenerate() const;

    double inverse(std::size_t j, double u) const;
    double slope(std::size_t j, double u) const;

private:
    Potential pot_;
    std::vector<double> breakpoints_;
    std::vector<MonotoneInterval> intervals_;
};

/// Throws NonMonotoneResolutionFailure if a table has more than
/// max_intervals monotone pieces.
MonotoneDecomposition monotone_decomposition(const Potential& p, std::size_t max_intervals = 32);

/// Reads whitespace-separated "x U" rows; '#' starts a comment line.
void read_table(std::istream& in, std::vector<double>& x, std::vector<double>& u);

/// Parses "kind=<name> U0=<v> d=<v> G=<v> h1=<v> h2=<v> file=<path>".
/// A file without an explicit kind means Tabulated.
Potential parse_potential(std::string_view text);

} // namespace phasebound
