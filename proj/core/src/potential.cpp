#include "phasebound/potential.hpp"

#include "phasebound/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>

namespace phasebound {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

} // namespace

namespace detail {

struct Table {
    std::vector<double> x, y, m;  // nodes, values, PCHIP slopes
    std::vector<double> cum;      // integral from x[0] to x[i]
    std::vector<double> abs_x_desc, envelope_max;
    double min_spacing = inf;

    std::size_t segment(double t) const {
        auto it = std::upper_bound(x.begin(), x.end(), t);
        std::size_t i = static_cast<std::size_t>(it - x.begin());
        if (i == 0) return 0;
        return std::min(i - 1, x.size() - 2);
    }

    double value(double t) const {
        if (t < x.front() || t > x.back()) return 0.0;
        std::size_t i = segment(t);
        double h = x[i + 1] - x[i];
        double s = (t - x[i]) / h;
        double s2 = s * s, s3 = s2 * s;
        return y[i] * (2 * s3 - 3 * s2 + 1) + h * m[i] * (s3 - 2 * s2 + s) +
               y[i + 1] * (-2 * s3 + 3 * s2) + h * m[i + 1] * (s3 - s2);
    }

    double slope(double t) const {
        if (t < x.front() || t > x.back()) return 0.0;
        std::size_t i = segment(t);
        double h = x[i + 1] - x[i];
        double s = (t - x[i]) / h;
        double s2 = s * s;
        return (y[i] * (6 * s2 - 6 * s) + y[i + 1] * (-6 * s2 + 6 * s)) / h +
               m[i] * (3 * s2 - 4 * s + 1) + m[i + 1] * (3 * s2 - 2 * s);
    }

    double integral(double t) const {
        if (t <= x.front()) return 0.0;
        if (t >= x.back()) return cum.back();
        std::size_t i = segment(t);
        double h = x[i + 1] - x[i];
        double s = (t - x[i]) / h;
        double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
        double part = y[i] * (s - s3 + s4 / 2) + h * m[i] * (s2 / 2 - 2 * s3 / 3 + s4 / 4) +
                      y[i + 1] * (s3 - s4 / 2) + h * m[i + 1] * (-s3 / 3 + s4 / 4);
        return cum[i] + h * part;
    }

    double envelope(double r) const {
        double best = 0.0;
        // abs_x_desc is sorted descending; envelope_max[i] = max |y| over the first i+1.
        auto it = std::lower_bound(abs_x_desc.begin(), abs_x_desc.end(), r, std::greater<double>());
        std::size_t count = static_cast<std::size_t>(it - abs_x_desc.begin());
        if (count > 0) best = envelope_max[count - 1];
        best = std::max(best, std::abs(value(r)));
        best = std::max(best, std::abs(value(-r)));
        return best;
    }
};

struct PotentialData {
    PotentialKind kind = PotentialKind::Delta;
    PotentialParams params;
    double G = 0.0;
    int n_G = 0;
    double delta_n_G = 0.0;
    double width = 1.0;
    double scale = 0.0;
    bool zero = true;
    std::vector<double> breakpoints;
    Table table;
    double a = 0.0, b = 0.0;  // top-gate distances h2 -/+ h1
};

} // namespace detail

std::string_view kind_name(PotentialKind kind) {
    switch (kind) {
    case PotentialKind::Delta: return "delta";
    case PotentialKind::Sech: return "sech";
    case PotentialKind::Exponential: return "exponential";
    case PotentialKind::Lorentzian: return "lorentzian";
    case PotentialKind::TopGate: return "topgate";
    case PotentialKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

PotentialKind parse_kind(std::string_view name) {
    std::string n = lower(name);
    if (n == "delta") return PotentialKind::Delta;
    if (n == "sech") return PotentialKind::Sech;
    if (n == "exponential" || n == "exp") return PotentialKind::Exponential;
    if (n == "lorentzian" || n == "lorentz") return PotentialKind::Lorentzian;
    if (n == "topgate" || n == "top-gate" || n == "top_gate") return PotentialKind::TopGate;
    if (n == "tabulated" || n == "table") return PotentialKind::Tabulated;
    throw InvalidParams("unknown potential kind '" + std::string(name) + "'");
}

namespace {

using detail::PotentialData;
using detail::Table;

// Fritsch-Carlson slopes with the three-point edge rule.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    std::vector<double> h(n - 1), del(n - 1), m(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        del[i] = (y[i + 1] - y[i]) / h[i];
    }
    if (n == 2) {
        m[0] = m[1] = del[0];
        return m;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (del[k - 1] * del[k] <= 0.0) continue;
        double w1 = 2 * h[k] + h[k - 1];
        double w2 = h[k] + 2 * h[k - 1];
        m[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
    }
    auto edge = [](double h0, double h1, double d0, double d1) {
        double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (std::signbit(d) != std::signbit(d0) || d0 == 0.0) return 0.0;
        if (std::signbit(d0) != std::signbit(d1) && std::abs(d) > 3 * std::abs(d0)) return 3 * d0;
        return d;
    };
    m[0] = edge(h[0], h[1], del[0], del[1]);
    m[n - 1] = edge(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    return m;
}

void build_table(PotentialData& data) {
    auto& p = data.params;
    if (p.table_x.size() != p.table_u.size())
        throw InvalidParams("table columns differ in length");
    if (p.table_x.size() < 2) throw InvalidParams("table needs at least two rows");
    for (std::size_t i = 0; i < p.table_x.size(); ++i) {
        if (!std::isfinite(p.table_x[i]) || !std::isfinite(p.table_u[i]))
            throw InvalidParams("table contains non-finite values");
        if (i > 0 && !(p.table_x[i] > p.table_x[i - 1]))
            throw InvalidParams("table abscissae must be strictly increasing");
    }
    double umax = 0.0;
    for (double u : p.table_u) umax = std::max(umax, std::abs(u));
    double edge_limit = p.table_edge_tol * umax;
    if (std::abs(p.table_u.front()) > edge_limit || std::abs(p.table_u.back()) > edge_limit)
        throw InvalidParams("tabulated potential does not decay at the table edges");

    Table& t = data.table;
    t.x = p.table_x;
    t.y = p.table_u;
    t.m = pchip_slopes(t.x, t.y);
    std::size_t n = t.x.size();
    t.cum.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double h = t.x[i + 1] - t.x[i];
        t.min_spacing = std::min(t.min_spacing, h);
        t.cum[i + 1] = t.cum[i] + h * (t.y[i] + t.y[i + 1]) / 2 + h * h * (t.m[i] - t.m[i + 1]) / 12;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(t.x[i]) > std::abs(t.x[j]);
    });
    double run = 0.0;
    for (std::size_t i : order) {
        t.abs_x_desc.push_back(std::abs(t.x[i]));
        run = std::max(run, std::abs(t.y[i]));
        t.envelope_max.push_back(run);
    }
    data.zero = umax == 0.0;
    data.breakpoints = {t.x.front(), t.x.back()};
    data.scale = t.min_spacing;
}

double eval_regular(const PotentialData& d, double x) {
    const auto& p = d.params;
    switch (d.kind) {
    case PotentialKind::Delta: return 0.0;
    case PotentialKind::Sech: return -p.U0 / std::cosh(x / p.d);
    case PotentialKind::Exponential: return p.U0 * std::exp(-std::abs(x) / p.d);
    case PotentialKind::Lorentzian: {
        double s = x / p.d;
        return -p.U0 / (1.0 + s * s);
    }
    case PotentialKind::TopGate: {
        double x2 = x * x;
        double b2 = d.b * d.b;
        return 0.5 * p.U0 * std::log1p((d.a * d.a - b2) / (x2 + b2));
    }
    case PotentialKind::Tabulated: return d.table.value(x);
    }
    return 0.0;
}

double antiderivative_impl(const PotentialData& d, double x) {
    const auto& p = d.params;
    switch (d.kind) {
    case PotentialKind::Delta: return x >= 0.0 ? d.G : 0.0;
    case PotentialKind::Sech: return -2.0 * p.U0 * p.d * std::atan(std::exp(x / p.d));
    case PotentialKind::Exponential: {
        double e = std::exp(-std::abs(x) / p.d);
        return x < 0.0 ? p.U0 * p.d * e : p.U0 * p.d * (2.0 - e);
    }
    case PotentialKind::Lorentzian: {
        double s = x / p.d;
        double phase = s < 0.0 ? -std::atan(1.0 / s) : std::atan(s) + pi / 2;
        return -p.U0 * p.d * phase;
    }
    case PotentialKind::TopGate: {
        double a = d.a, b = d.b, x2 = x * x;
        double lg = x == 0.0 ? 0.0 : x * std::log1p((a * a - b * b) / (x2 + b * b));
        double prim = 0.5 * p.U0 * (lg + 2 * a * std::atan(x / a) - 2 * b * std::atan(x / b));
        return prim - p.U0 * pi * p.h1;
    }
    case PotentialKind::Tabulated: return d.table.integral(x);
    }
    return 0.0;
}

double second_moment_radius(const PotentialData& d) {
    const Table& t = d.table;
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i + 1 < t.x.size(); ++i) {
        auto w = [&](double x) { return std::abs(t.value(x)); };
        auto w2 = [&](double x) { return x * x * std::abs(t.value(x)); };
        m0 += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(w, t.x[i], t.x[i + 1], 0, 0);
        m2 += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(w2, t.x[i], t.x[i + 1], 0, 0);
    }
    return m0 > 0.0 ? std::sqrt(m2 / m0) : 1.0;
}

double compute_width(const PotentialData& d) {
    if (d.kind == PotentialKind::Delta) return 0.0;
    if (d.zero) return d.kind == PotentialKind::Tabulated ? 1.0 : d.params.d;
    if (d.G == 0.0) return second_moment_radius(d);
    auto miss = [&](double w) {
        return std::abs(antiderivative_impl(d, w) - antiderivative_impl(d, -w) - d.G) - 0.01 * std::abs(d.G);
    };
    double lo = 0.0, hi = d.scale > 0.0 ? d.scale : 1.0;
    for (int it = 0; miss(hi) >= 0.0; ++it) {
        lo = hi;
        hi *= 2.0;
        if (it > 200) throw QuadratureFailure("width search did not converge");
    }
    for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        (miss(mid) < 0.0 ? hi : lo) = mid;
    }
    return hi;
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidParams(std::string(name) + " must be positive and finite");
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidParams(std::string(name) + " must be finite");
}

} // namespace

Potential::Potential() : Potential(std::make_shared<const PotentialData>()) {}

Potential::Potential(std::shared_ptr<const detail::PotentialData> data) : data_(std::move(data)) {}

Potential make_potential(PotentialKind kind, PotentialParams params) {
    auto data = std::make_shared<PotentialData>();
    data->kind = kind;
    switch (kind) {
    case PotentialKind::Delta:
        require_finite(params.G, "G");
        data->G = params.G;
        data->zero = params.G == 0.0;
        data->breakpoints = {0.0};
        break;
    case PotentialKind::Sech:
    case PotentialKind::Exponential:
    case PotentialKind::Lorentzian:
        require_finite(params.U0, "U0");
        require_positive(params.d, "d");
        data->zero = params.U0 == 0.0;
        data->scale = params.d;
        if (kind == PotentialKind::Sech) data->G = -pi * params.U0 * params.d;
        if (kind == PotentialKind::Lorentzian) data->G = -pi * params.U0 * params.d;
        if (kind == PotentialKind::Exponential) {
            data->G = 2.0 * params.U0 * params.d;
            data->breakpoints = {0.0};
        }
        break;
    case PotentialKind::TopGate:
        require_finite(params.U0, "U0");
        require_positive(params.h1, "h1");
        require_positive(params.h2, "h2");
        if (!(params.h1 < params.h2)) throw InvalidParams("top gate needs h1 < h2");
        data->a = params.h2 - params.h1;
        data->b = params.h2 + params.h1;
        data->zero = params.U0 == 0.0;
        data->scale = data->a;
        data->G = -2.0 * pi * params.U0 * params.h1;
        break;
    case PotentialKind::Tabulated:
        data->params = params;
        build_table(*data);
        data->G = data->table.cum.back();
        break;
    }
    data->params = std::move(params);
    if (kind != PotentialKind::Tabulated) {
        data->params.table_x.clear();
        data->params.table_u.clear();
    }
    double q = data->G / pi;
    data->n_G = static_cast<int>(std::floor(q));
    data->delta_n_G = q - data->n_G;
    if (data->delta_n_G >= 1.0) {  // rounding at the top of the range
        data->n_G += 1;
        data->delta_n_G = 0.0;
    }
    data->width = compute_width(*data);
    return Potential(std::move(data));
}

PotentialKind Potential::kind() const { return data_->kind; }
const PotentialParams& Potential::params() const { return data_->params; }
double Potential::strength() const { return data_->G; }
int Potential::n_G() const { return data_->n_G; }
double Potential::delta_n_G() const { return data_->delta_n_G; }
double Potential::width() const { return data_->width; }
double Potential::feature_scale() const { return data_->scale; }
bool Potential::is_zero() const { return data_->zero; }
const std::vector<double>& Potential::breakpoints() const { return data_->breakpoints; }
bool Potential::has_delta() const { return data_->kind == PotentialKind::Delta && !data_->zero; }
double Potential::delta_strength() const { return has_delta() ? data_->G : 0.0; }

double Potential::operator()(double x) const {
    if (data_->kind == PotentialKind::Delta && x == 0.0 && !data_->zero)
        throw EvalAtSingularity("delta potential sampled at its support");
    return eval_regular(*data_, x);
}

double Potential::regular(double x) const { return eval_regular(*data_, x); }

double Potential::derivative(double x) const {
    const auto& d = *data_;
    const auto& p = d.params;
    switch (d.kind) {
    case PotentialKind::Delta: return 0.0;
    case PotentialKind::Sech: {
        double s = x / p.d;
        return p.U0 / p.d * std::tanh(s) / std::cosh(s);
    }
    case PotentialKind::Exponential:
        if (x == 0.0) return 0.0;
        return -(x > 0 ? 1.0 : -1.0) * p.U0 / p.d * std::exp(-std::abs(x) / p.d);
    case PotentialKind::Lorentzian: {
        double s = x / p.d;
        double q = 1.0 + s * s;
        return 2.0 * p.U0 * s / (p.d * q * q);
    }
    case PotentialKind::TopGate: {
        double x2 = x * x;
        return p.U0 * x * (d.b * d.b - d.a * d.a) / ((x2 + d.a * d.a) * (x2 + d.b * d.b));
    }
    case PotentialKind::Tabulated: return d.table.slope(x);
    }
    return 0.0;
}

double Potential::envelope(double r) const {
    const auto& d = *data_;
    r = std::abs(r);
    switch (d.kind) {
    case PotentialKind::Delta: return 0.0;
    case PotentialKind::Tabulated: return d.table.envelope(r);
    default: return std::abs(eval_regular(d, r));
    }
}

double Potential::min_value() const {
    const auto& d = *data_;
    if (d.kind == PotentialKind::Tabulated)
        return std::min(0.0, *std::min_element(d.table.y.begin(), d.table.y.end()));
    return std::min(0.0, eval_regular(d, 0.0));
}

double Potential::max_value() const {
    const auto& d = *data_;
    if (d.kind == PotentialKind::Tabulated)
        return std::max(0.0, *std::max_element(d.table.y.begin(), d.table.y.end()));
    return std::max(0.0, eval_regular(d, 0.0));
}

double Potential::argmax_abs() const {
    const auto& d = *data_;
    if (d.kind != PotentialKind::Tabulated) return 0.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < d.table.y.size(); ++i)
        if (std::abs(d.table.y[i]) > std::abs(d.table.y[best])) best = i;
    return d.table.x[best];
}

double Potential::antiderivative(double x) const { return antiderivative_impl(*data_, x); }

bool Potential::x_moment_integrable() const {
    if (data_->zero) return true;
    return data_->kind != PotentialKind::Lorentzian && data_->kind != PotentialKind::TopGate;
}

double evaluate(const Potential& p, double x) {
    if (!std::isfinite(x)) throw InvalidParams("evaluation point must be finite");
    return p(x);
}

Primitive::Primitive(Potential pot, double x0)
    : pot_(std::move(pot)), x0_(x0), f0_(pot_.antiderivative(x0)) {}

double Primitive::operator()(double x) const { return pot_.antiderivative(x) - f0_; }
double Primitive::lower_limit() const { return -f0_; }
double Primitive::upper_limit() const { return pot_.strength() - f0_; }

Primitive primitive(const Potential& p, double x0) {
    if (!std::isfinite(x0)) throw InvalidParams("primitive anchor must be finite");
    return Primitive(p, x0);
}

MonotoneDecomposition::MonotoneDecomposition(Potential pot, std::vector<double> breakpoints,
                                             std::vector<MonotoneInterval> intervals)
    : pot_(std::move(pot)), breakpoints_(std::move(breakpoints)), intervals_(std::move(intervals)) {}

bool MonotoneDecomposition::degenerate() const {
    return intervals_.size() == 1 && intervals_.front().orientation == 0;
}

double MonotoneDecomposition::inverse(std::size_t j, double u) const {
    const auto& iv = intervals_.at(j);
    if (iv.orientation == 0) return 0.0;
    const auto& p = pot_.params();
    double side = iv.x_hi <= 0.0 ? -1.0 : 1.0;
    switch (pot_.kind()) {
    case PotentialKind::Sech: {
        double r = -p.U0 / u;
        return r >= 1.0 ? side * p.d * std::acosh(r) : 0.0;
    }
    case PotentialKind::Lorentzian: {
        double r = -p.U0 / u - 1.0;
        return r > 0.0 ? side * p.d * std::sqrt(r) : 0.0;
    }
    case PotentialKind::Exponential: {
        double r = u / p.U0;
        return r < 1.0 ? -side * p.d * std::log(r) : 0.0;
    }
    case PotentialKind::TopGate: {
        double a = p.h2 - p.h1, b = p.h2 + p.h1;
        double q = std::exp(2.0 * u / p.U0);
        double x2 = (q * b * b - a * a) / (1.0 - q);
        return x2 > 0.0 ? side * std::sqrt(x2) : 0.0;
    }
    default: break;
    }
    // Tabulated: bisection inside the table part of the interval.
    const auto& tx = p.table_x;
    double lo = std::max(iv.x_lo, tx.front());
    double hi = std::min(iv.x_hi, tx.back());
    double s = static_cast<double>(iv.orientation);
    if (s * (u - pot_(lo)) <= 0.0) return lo;
    if (s * (u - pot_(hi)) >= 0.0) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (std::abs(lo) + std::abs(hi) + 1.0); ++it) {
        double mid = 0.5 * (lo + hi);
        (s * (pot_(mid) - u) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double MonotoneDecomposition::slope(std::size_t j, double u) const {
    const auto& iv = intervals_.at(j);
    if (iv.orientation == 0 || u == 0.0) return 0.0;
    const auto& p = pot_.params();
    double side = iv.x_hi <= 0.0 ? -1.0 : 1.0;
    switch (pot_.kind()) {
    case PotentialKind::Sech: {
        double r = u / p.U0;
        return -side * (u / p.d) * std::sqrt(std::max(0.0, 1.0 - r * r));
    }
    case PotentialKind::Lorentzian: {
        double r = -p.U0 / u - 1.0;
        return side * 2.0 * u * u / (p.d * p.U0) * std::sqrt(std::max(0.0, r));
    }
    case PotentialKind::Exponential: return -side * u / p.d;
    default: return pot_.derivative(inverse(j, u));
    }
}

MonotoneDecomposition monotone_decomposition(const Potential& p, std::size_t max_intervals) {
    if (p.is_zero() || p.kind() == PotentialKind::Delta) {
        return MonotoneDecomposition(p, {}, {{-inf, inf, 0.0, 0.0, 0}});
    }
    if (p.kind() != PotentialKind::Tabulated) {
        double u0 = p(0.0);
        int left = u0 > 0.0 ? 1 : -1;
        MonotoneInterval a{-inf, 0.0, std::min(0.0, u0), std::max(0.0, u0), left};
        MonotoneInterval b{0.0, inf, std::min(0.0, u0), std::max(0.0, u0), -left};
        return MonotoneDecomposition(p, {0.0}, {a, b});
    }
    const auto& x = p.params().table_x;
    const auto& y = p.params().table_u;
    std::size_t n = x.size();
    // Sign of each segment; flat segments inherit a neighbour's sign.
    std::vector<int> sgn(n - 1, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) sgn[i] = (y[i + 1] > y[i]) - (y[i + 1] < y[i]);
    int last = 0;
    for (auto& s : sgn) {
        if (s == 0) s = last;
        else last = s;
    }
    last = 0;
    for (std::size_t i = n - 1; i-- > 0;) {
        if (sgn[i] == 0) sgn[i] = last;
        else last = sgn[i];
    }
    if (sgn.front() == 0) return MonotoneDecomposition(p, {}, {{-inf, inf, 0.0, 0.0, 0}});

    std::vector<double> breaks;
    std::vector<MonotoneInterval> intervals;
    double start = -inf;
    double u_start = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        bool turn = i + 2 < n && sgn[i + 1] != sgn[i];
        if (!turn) continue;
        double xb = x[i + 1];
        double ub = y[i + 1];
        intervals.push_back({start, xb, std::min(u_start, ub), std::max(u_start, ub), sgn[i]});
        breaks.push_back(xb);
        start = xb;
        u_start = ub;
        if (intervals.size() >= max_intervals)
            throw NonMonotoneResolutionFailure("table has too many monotone pieces");
    }
    intervals.push_back({start, inf, std::min(u_start, 0.0), std::max(u_start, 0.0), sgn.back()});
    return MonotoneDecomposition(p, std::move(breaks), std::move(intervals));
}

void read_table(std::istream& in, std::vector<double>& x, std::vector<double>& u) {
    x.clear();
    u.clear();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream row(line);
        double a = 0.0, b = 0.0;
        if (!(row >> a >> b))
            throw InvalidParams("table line " + std::to_string(lineno) + " is not 'x U'");
        x.push_back(a);
        u.push_back(b);
    }
}

Potential parse_potential(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string token;
    PotentialParams params;
    std::string kind_text;
    std::string file;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos) throw InvalidParams("expected key=value, got '" + token + "'");
        std::string key = lower(token.substr(0, eq));
        std::string value = token.substr(eq + 1);
        auto number = [&]() {
            try {
                std::size_t used = 0;
                double v = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
                return v;
            } catch (const std::exception&) {
                throw InvalidParams("bad number for " + key + ": '" + value + "'");
            }
        };
        if (key == "kind") kind_text = value;
        else if (key == "u0") params.U0 = number();
        else if (key == "d") params.d = number();
        else if (key == "g") params.G = number();
        else if (key == "h1") params.h1 = number();
        else if (key == "h2") params.h2 = number();
        else if (key == "file") file = value;
        else throw InvalidParams("unknown potential key '" + key + "'");
    }
    PotentialKind kind = kind_text.empty()
                             ? (file.empty() ? throw InvalidParams("potential kind missing")
                                             : PotentialKind::Tabulated)
                             : parse_kind(kind_text);
    if (kind == PotentialKind::Tabulated) {
        if (file.empty()) throw InvalidParams("tabulated potential needs file=<path>");
        std::ifstream f(file);
        if (!f) throw InvalidParams("cannot open table '" + file + "'");
        read_table(f, params.table_x, params.table_u);
    }
    return make_potential(kind, std::move(params));
}

} // namespace phasebound
