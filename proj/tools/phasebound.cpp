// phasebound command-line front end.

#include "phasebound/phasebound.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace phasebound;

namespace {

struct RunConfig {
    std::string kind;
    std::optional<double> U0, d, G, h1, h2;
    std::string file;
    std::string potential;
    double p_y = 0.0;
    double tol_phase = 1e-9;
    double classify_tol = 1e-3;
    double refine_tol = 1e-8;
    double eps_edge = 1e-6;
    unsigned threads = 0;
    bool no_polish = false;
    std::string out;
    std::string config;

    // Subcommand arguments.
    std::size_t index = 0;
    double energy = 0.0;
    double seed = 0.05;
    std::size_t u_points = 64;
    std::size_t omega_points = 128;
    double gamma = 0.5;
};

IntegratorControl control(const RunConfig& c) {
    IntegratorControl ctrl;
    ctrl.tol_phase = c.tol_phase;
    ctrl.classify_tol = c.classify_tol;
    ctrl.eps_edge = c.eps_edge;
    return ctrl;
}

SpectrumOptions spectrum_options(const RunConfig& c) {
    SpectrumOptions o;
    o.control = control(c);
    o.refine_tol = c.refine_tol;
    o.polish = !c.no_polish;
    o.threads = c.threads;
    return o;
}

void check(const RunConfig& c) {
    if (!(c.p_y > 0.0) || !std::isfinite(c.p_y)) throw InvalidParams("--py must be positive");
    for (double t : {c.tol_phase, c.classify_tol, c.refine_tol, c.eps_edge})
        if (!(t > 0.0)) throw InvalidParams("tolerances must be positive");
}

// The flags mirror the potential grammar one to one, so they are turned back
// into a grammar string.
Potential build_potential(const RunConfig& c) {
    std::ostringstream grammar;
    if (!c.potential.empty()) grammar << c.potential << ' ';
    if (!c.kind.empty()) grammar << "kind=" << c.kind << ' ';
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) grammar << key << '=' << format_number(*v) << ' ';
    };
    put("U0", c.U0);
    put("d", c.d);
    put("G", c.G);
    put("h1", c.h1);
    put("h2", c.h2);
    if (!c.file.empty()) grammar << "file=" << c.file << ' ';
    if (grammar.str().empty()) throw InvalidParams("no potential given (use --kind or --potential)");
    return parse_potential(grammar.str());
}

void write_file(const RunConfig& c, const std::string& name, const std::string& text) {
    fs::create_directories(c.out);
    std::ofstream f(fs::path(c.out) / name, std::ios::binary);
    if (!f) throw InvalidParams("cannot write " + (fs::path(c.out) / name).string());
    f << text;
}

int cmd_count(const RunConfig& c) {
    check(c);
    Potential pot = build_potential(c);
    IntegratorControl ctrl = control(c);
    if (!primitive(pot).limits_finite()) throw DivergentPrimitive("primitive diverges at infinity");
    int minus = staircase_value(pot, c.p_y, -c.p_y, ctrl);
    int plus = staircase_value(pot, c.p_y, c.p_y, ctrl);
    std::string json = count_json(c.p_y, minus - plus, minus, plus);
    std::cout << json << '\n';
    if (!c.out.empty()) write_file(c, "count.json", json);
    return 0;
}

int cmd_spectrum(const RunConfig& c) {
    check(c);
    SpectrumReport rep = find_eigenvalues(build_potential(c), c.p_y, spectrum_options(c));
    std::string json = spectrum_json(rep);
    std::cout << json << '\n';
    if (!c.out.empty()) {
        write_file(c, "spectrum.json", json);
        write_file(c, "staircase.csv", staircase_csv(rep.staircase));
    }
    return 0;
}

int cmd_wavefunction(const RunConfig& c) {
    check(c);
    Potential pot = build_potential(c);
    SpectrumReport rep = find_eigenvalues(pot, c.p_y, spectrum_options(c));
    if (c.index >= rep.eigenvalues.size())
        throw IndexOutOfRange("--index " + std::to_string(c.index) + " but N_d = " + std::to_string(rep.level_count));
    Eigenstate st = eigenstate(pot, c.p_y, rep.eigenvalues[c.index].energy, control(c));
    std::string csv = eigenstate_csv(st);
    if (c.out.empty())
        std::cout << csv;
    else
        write_file(c, "wavefunction_" + std::to_string(c.index) + ".csv", csv);
    return 0;
}

int cmd_portrait(const RunConfig& c) {
    check(c);
    Potential pot = build_potential(c);
    IntegratorControl ctrl = control(c);
    PortraitOptions opts;
    opts.u_points = c.u_points;
    opts.omega_points = c.omega_points;
    opts.threads = c.threads;
    if (std::abs(c.energy) > c.p_y) throw InvalidParams("--E must lie in [-p_y, p_y]");
    double e = std::clamp(c.energy, -edge_energy(c.p_y, 1, ctrl), edge_energy(c.p_y, 1, ctrl));
    PortraitResult pr = separatrix_in_phase_space(pot, c.p_y, e, c.seed, opts, ctrl);
    std::string json = portrait_json(pr);
    std::cout << json << '\n';
    if (!c.out.empty()) {
        write_file(c, "portrait.json", json);
        write_file(c, "ring.csv", ring_csv(pr.ring));
        for (const auto& t : pr.traces) write_file(c, "trace_" + std::to_string(t.interval) + ".csv", trace_csv(t));
        std::size_t n = monotone_decomposition(pot).size();
        for (std::size_t j = 0; j < n; ++j)
            write_file(c, "field_" + std::to_string(j) + ".csv", field_grid_csv(field_grid(pot, c.p_y, e, j, opts, ctrl)));
    }
    return 0;
}

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double nearest(const SpectrumReport& rep, double e) {
    double best = nan;
    for (const auto& ev : rep.eigenvalues)
        if (!(std::abs(ev.energy - e) >= std::abs(best - e))) best = ev.energy;
    return best;
}

int cmd_validate(const RunConfig& c) {
    check(c);
    Potential pot = build_potential(c);
    IntegratorControl ctrl = control(c);
    SpectrumReport rep = find_eigenvalues(pot, c.p_y, spectrum_options(c));
    std::vector<ValidationRow> rows;

    try {
        DeltaLimitResult d = delta_limit_energy(pot, c.p_y);
        double num = nearest(rep, d.E_pred);
        std::string note = d.zero_mode ? "zero mode" : "";
        if (std::isfinite(num)) {
            IntegratorControl quiet = ctrl;
            quiet.basin_fallback = true;
            double kappa = kappa_integral(left_separatrix(PhaseProblem(pot, num, c.p_y), quiet));
            note += (note.empty() ? "" : "; ") + std::string("kappa integral ") + format_number(kappa);
        }
        rows.push_back({"delta", d.E_pred, num, std::abs(num - d.E_pred), d.validity, note});
    } catch (const Error& e) {
        rows.push_back({"delta", nan, nan, nan, nan, e.what()});
    }

    try {
        NonRelativisticResult nr = nonrelativistic_levels(pot, c.p_y);
        if (nr.energies.empty()) {
            rows.push_back({"nonrelativistic", nan, nan, nan, nr.applicability, "no bound Schroedinger level"});
        } else {
            double num = nearest(rep, nr.energies.front());
            double eps = nr.eps.front();
            rows.push_back({"nonrelativistic", eps, num - c.p_y, std::abs(num - c.p_y - eps) / std::abs(eps),
                            nr.applicability, nr.applicable ? "ground level, relative discrepancy" : "outside the regime"});
        }
    } catch (const Error& e) {
        rows.push_back({"nonrelativistic", nan, nan, nan, nan, e.what()});
    }

    try {
        BohrSommerfeldResult bs = bohr_sommerfeld_levels(pot, c.p_y, c.gamma, ctrl);
        double validity = 0.0;
        for (const auto& l : bs.levels) validity = std::max(validity, l.validity);
        double n_bs = static_cast<double>(bs.levels.size());
        rows.push_back({"semiclassical_count", n_bs, static_cast<double>(rep.level_count),
                        std::abs(n_bs - rep.level_count), validity,
                        bs.multiple_regions ? "several classical regions" : "level count"});
        if (!bs.levels.empty() && !rep.eigenvalues.empty()) {
            double e = bs.levels.back().energy;
            double num = nearest(rep, e);
            rows.push_back({"semiclassical_top_level", e, num, std::abs(e - num), bs.levels.back().validity,
                            "highest level"});
        }
    } catch (const Error& e) {
        rows.push_back({"semiclassical_count", nan, nan, nan, nan, e.what()});
    }

    std::string json = validation_json(c.p_y, rows);
    std::cout << json << '\n';
    if (!c.out.empty()) write_file(c, "validate.json", json);
    return 0;
}

std::string env_name(const std::string& flag) {
    std::string s = "PHASEBOUND_";
    for (char ch : flag) s += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
}

// Config values fill options that were given neither on the command line nor
// through the environment.
void apply_config(CLI::App& app, CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParams("cannot read config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParams("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw InvalidParams("config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = it.key();
        std::replace(key.begin(), key.end(), '_', '-');
        CLI::Option* opt = sub ? sub->get_option_no_throw("--" + key) : nullptr;
        if (!opt) opt = app.get_option_no_throw("--" + key);
        if (!opt) throw InvalidParams("unknown config key '" + it.key() + "'");
        if (opt->count() > 0) continue;
        const auto& v = it.value();
        std::string text;
        if (v.is_string())
            text = v.get<std::string>();
        else if (v.is_number_float())
            text = format_number(v.get<double>());
        else if (v.is_number() || v.is_boolean())
            text = v.dump();
        else
            throw InvalidParams("config key '" + it.key() + "' must be a scalar");
        opt->add_result(text);
        opt->run_callback();
    }
}

} // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"Bound states of 2D Dirac-Weyl particles in 1D potentials by the variable phase method"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "phasebound 0.1.0");

    auto env = [](CLI::Option* o, const std::string& flag) { o->envname(env_name(flag)); };
    env(app.add_option("--kind", c.kind, "delta | sech | exponential | lorentzian | topgate | tabulated"), "kind");
    env(app.add_option("--U0", c.U0, "Potential depth U0"), "U0");
    env(app.add_option("--d", c.d, "Potential width d"), "d");
    env(app.add_option("--G", c.G, "Delta strength G"), "G");
    env(app.add_option("--h1", c.h1, "Top-gate h1"), "h1");
    env(app.add_option("--h2", c.h2, "Top-gate h2"), "h2");
    env(app.add_option("--file", c.file, "Two-column 'x U' table (tabulated kind)"), "file");
    env(app.add_option("--potential", c.potential, "Grammar string 'kind=<name> U0=<v> d=<v> ...'"), "potential");
    env(app.add_option("--py", c.p_y, "Transverse momentum p_y > 0"), "py");
    env(app.add_option("--tol-phase", c.tol_phase, "Integrator tolerance")->capture_default_str(), "tol-phase");
    env(app.add_option("--classify-tol", c.classify_tol, "Terminal classification tolerance (rad)")->capture_default_str(),
        "classify-tol");
    env(app.add_option("--refine-tol", c.refine_tol, "Eigenvalue bracket width relative to p_y")->capture_default_str(),
        "refine-tol");
    env(app.add_option("--eps-edge", c.eps_edge, "Band-edge offset relative to p_y")->capture_default_str(), "eps-edge");
    env(app.add_option("--threads", c.threads, "Worker threads (0 = all cores)")->capture_default_str(), "threads");
    env(app.add_flag("--no-polish", c.no_polish, "Skip the separatrix-mismatch polish"), "no-polish");
    env(app.add_option("--out", c.out, "Output directory"), "out");
    app.add_option("--config", c.config, "JSON file with option values; flags and environment win")
        ->envname("PHASEBOUND_CONFIG");

    auto* count = app.add_subcommand("count", "Print the number of levels N_d");
    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues and staircase");
    auto* wave = app.add_subcommand("wavefunction", "Spinor samples of one eigenstate");
    wave->add_option("--index", c.index, "Level index, 0 = lowest")->capture_default_str();
    auto* portrait = app.add_subcommand("portrait", "Phase portrait and Poincare index at one energy");
    portrait->add_option("--E", c.energy, "Energy in [-p_y, p_y]")->required();
    portrait->add_option("--seed", c.seed, "Start offset from the repellor")->capture_default_str();
    portrait->add_option("--u-points", c.u_points, "Field grid rows")->capture_default_str();
    portrait->add_option("--omega-points", c.omega_points, "Field grid columns")->capture_default_str();
    auto* validate = app.add_subcommand("validate", "Compare with the delta, nonrelativistic and semiclassical limits");
    validate->add_option("--gamma", c.gamma, "Bohr-Sommerfeld offset")->capture_default_str();
    for (auto* s : {count, spectrum, wave, portrait, validate}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (!c.config.empty()) apply_config(app, sub, c.config);
        if (sub == count) return cmd_count(c);
        if (sub == spectrum) return cmd_spectrum(c);
        if (sub == wave) return cmd_wavefunction(c);
        if (sub == portrait) return cmd_portrait(c);
        return cmd_validate(c);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
