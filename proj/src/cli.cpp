#include "hive/cli.hpp"
#include "hive/csv.hpp"
#include "hive/dynamics.hpp"
#include "hive/equilibrium.hpp"
#include "hive/errors.hpp"
#include "hive/model.hpp"
#include "hive/plot.hpp"
#include "hive/regime.hpp"
#include "hive/service.hpp"
#include "hive/spectral.hpp"
#include "hive/statics.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace hive {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config;
    std::string out = ".";
    double dt = 1e-2;
    double horizon = 50.0;
    int starts = 64;
    std::uint64_t seed = 0;
    double delta = 1e-2;
    std::string param;
    std::string range;
    int steps = 40;
    std::string grid = "10x10";
    std::string axis1 = "gamma";
    std::string axis2 = "eta[1]";
    std::string range2 = "0.5:1.4";
    bool cap = false;
    bool plot = false;
    std::string n0;
    bool renormalize = false;
    double perturbation = 1e-2;
    double cycle_offset = 0.02;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string log_dir;
    std::string static_dir;
};

class Manifest {
public:
    void set(const std::string& key, const std::string& value) { entries_[key] = value; }
    void set(const std::string& key, double value) { entries_[key] = format_number(value); }
    void set(const std::string& key, const Vector& v)
    {
        std::string s;
        for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
        entries_[key] = s;
    }
    void write(const fs::path& path) const
    {
        std::ofstream f(path);
        for (const auto& [k, v] : entries_) f << k << '=' << v << '\n';
    }

private:
    std::map<std::string, std::string> entries_;
};

std::pair<double, double> parse_range(const std::string& text, const char* flag)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw DomainViolation(std::string(flag) + ": expected LO:HI, got '" + text + "'");
    try {
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw DomainViolation(std::string(flag) + ": expected LO:HI, got '" + text + "'");
    }
}

std::pair<int, int> parse_grid(const std::string& text)
{
    const auto x = text.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(text);
        return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
    } catch (const std::exception&) {
        throw DomainViolation("--grid: expected N1xN2, got '" + text + "'");
    }
}

Vector parse_vector(const std::string& text, int size, const char* flag)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    try {
        while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    } catch (const std::exception&) {
        throw DomainViolation(std::string(flag) + ": expected comma-separated numbers");
    }
    if (static_cast<int>(v.size()) != size)
        throw DimensionMismatch(std::string(flag) + ": expected " + std::to_string(size) + " entries, got " +
                                std::to_string(v.size()));
    Vector out(size);
    for (int i = 0; i < size; ++i) {
        if (v[static_cast<std::size_t>(i)] < 0.0) throw DomainViolation(std::string(flag) + ": entries must be >= 0");
        out[i] = v[static_cast<std::size_t>(i)];
    }
    return out;
}

std::vector<std::string> labelled(const char* stem, int n)
{
    std::vector<std::string> v;
    for (int i = 1; i <= n; ++i) v.push_back(std::string(stem) + "_" + std::to_string(i));
    return v;
}

void write_trajectory_csv(const fs::path& path, const HiveConfig& cfg, const Trajectory& traj)
{
    std::ofstream f(path);
    CsvWriter csv(f);
    std::vector<std::string> header{"t"};
    for (const auto& n : labelled("N", cfg.families())) header.push_back(n);
    header.push_back("W_star");
    header.push_back("budget_utilization");
    csv.row(header);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::vector<double> row{traj.states[k].t};
        for (Eigen::Index j = 0; j < traj.states[k].N.size(); ++j) row.push_back(traj.states[k].N[j]);
        row.push_back(traj.welfare[k]);
        row.push_back(traj.budget_utilization[k]);
        csv.row(row);
    }
}

void plot_trajectory(const fs::path& path, const HiveConfig& cfg, const Trajectory& traj, const std::string& title)
{
    std::vector<Series> series;
    for (int j = 0; j < cfg.families(); ++j) {
        Series s;
        s.label = cfg.family_names[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k < traj.size(); ++k) {
            s.x.push_back(traj.states[k].t);
            s.y.push_back(traj.states[k].N[j]);
        }
        series.push_back(std::move(s));
    }
    std::ofstream f(path);
    write_line_plot_svg(f, title, "t", "N", series);
}

void write_eigen_csv(const fs::path& path, const std::vector<Complex>& ev)
{
    std::ofstream f(path);
    CsvWriter csv(f);
    csv.row(std::vector<std::string>{"re", "im"});
    for (const auto& z : ev) csv.row(std::vector<double>{z.real(), z.imag()});
}

void write_matrix_csv(const fs::path& path, const Matrix& m, const std::vector<std::string>& rows,
                      const std::vector<std::string>& cols)
{
    std::ofstream f(path);
    CsvWriter csv(f);
    std::vector<std::string> header{""};
    header.insert(header.end(), cols.begin(), cols.end());
    csv.row(header);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::vector<std::string> row{rows[static_cast<std::size_t>(r)]};
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(format_number(m(r, c)));
        csv.row(row);
    }
}

// Base equilibrium for the analyses that need one: Newton from --n0 when
// given, otherwise the highest-welfare interior record of a multistart.
EquilibriumRecord base_equilibrium(const HiveConfig& cfg, const Options& o, Manifest& m)
{
    if (!o.n0.empty()) {
        EquilibriumRecord r = solve_from(cfg, parse_vector(o.n0, cfg.families(), "--n0"));
        if (!r.valid()) throw NoConvergence("equilibrium reached from --n0 fails complementarity or budget checks");
        m.set("base.source", "n0");
        return r;
    }
    const auto all = find_all(cfg, o.starts, o.seed);
    for (const auto& r : all)
        if (r.interior()) {
            m.set("base.source", "multistart");
            return r;
        }
    throw NoConvergence("no interior equilibrium found from " + std::to_string(o.starts) + " starts");
}

void describe(Manifest& m, const std::string& prefix, const EquilibriumRecord& r)
{
    m.set(prefix + ".N", r.N_star);
    m.set(prefix + ".lambda", r.allocation.lambda);
    m.set(prefix + ".W_star", r.welfare());
    m.set(prefix + ".max_abs_V", r.V_residual);
    m.set(prefix + ".stability", to_string(r.stability));
}

int cmd_validate(const HiveConfig& cfg, const Options&, Manifest& m, std::ostream& out)
{
    const ValidationReport rep = validate(cfg);
    out << "families " << cfg.families() << ", resources " << cfg.resources() << '\n';
    out << "externality_norm " << format_number(rep.externality_norm) << '\n';
    out << "eta_max " << format_number(rep.eta_max) << '\n';
    out << "weak_externality " << (!rep.weak_ext_applicable ? "inapplicable" : rep.weak_ext_satisfied ? "satisfied" : "violated")
        << '\n';
    for (const auto& msg : rep.messages) out << "note: " << msg << '\n';
    m.set("result.externality_norm", rep.externality_norm);
    m.set("result.eta_max", rep.eta_max);
    m.set("result.weak_ext_bound", rep.weak_ext_bound);
    m.set("result.weak_ext_satisfied", rep.weak_ext_satisfied ? "true" : "false");
    return 0;
}

int cmd_solve(const HiveConfig& cfg, const Options& o, Manifest& m, std::ostream& out)
{
    const Vector N0 = o.n0.empty() ? default_start(cfg) : parse_vector(o.n0, cfg.families(), "--n0");
    EquilibriumRecord r = solve_from(cfg, N0);
    jacobian_eigen(cfg, r);
    {
        std::ofstream f(fs::path(o.out) / "equilibrium.csv");
        write_equilibria_csv(f, cfg, {r});
    }
    write_matrix_csv(fs::path(o.out) / "allocation.csv", r.allocation.K, cfg.family_names, cfg.resource_names);
    describe(m, "result", r);
    m.set("result.valid", r.valid() ? "true" : "false");
    out << "N* = " << r.N_star.transpose() << "\nlambda* = " << r.allocation.lambda.transpose() << "\nW* = "
        << format_number(r.welfare()) << "\nstability " << to_string(r.stability) << '\n';
    if (!r.valid()) {
        out << "warning: root fails complementarity or budget checks\n";
        return 2;
    }
    return 0;
}

int cmd_simulate(const HiveConfig& cfg, const Options& o, Manifest& m, std::ostream& out)
{
    IntegrateOptions io;
    io.dt = o.dt;
    io.horizon = o.horizon;
    io.cap_mode = o.cap;
    const Vector N0 = o.n0.empty() ? default_start(cfg) : parse_vector(o.n0, cfg.families(), "--n0");
    const Trajectory traj = integrate(cfg, N0, io);
    write_trajectory_csv(fs::path(o.out) / "trajectory.csv", cfg, traj);
    {
        std::ofstream f(fs::path(o.out) / "events.csv");
        CsvWriter csv(f);
        csv.row(std::vector<std::string>{"t", "event"});
        for (const auto& e : traj.events) csv.row(std::vector<std::string>{format_number(e.t), e.label});
    }
    if (o.plot) plot_trajectory(fs::path(o.out) / "trajectory.svg", cfg, traj, "Population trajectory");
    const LyapunovReport ly = lyapunov_check(cfg, traj);
    m.set("result.final_t", traj.back().t);
    m.set("result.final_N", traj.back().N);
    m.set("result.final_W_star", traj.welfare.back());
    m.set("result.converged", traj.converged ? "true" : "false");
    m.set("result.aborted", traj.aborted ? "true" : "false");
    m.set("result.lyapunov_max_mismatch", ly.max_mismatch);
    m.set("result.welfare_non_decreasing", ly.non_decreasing ? "true" : "false");
    out << "t = " << format_number(traj.back().t) << "  N = " << traj.back().N.transpose() << '\n';
    for (const auto& e : traj.events) out << "event t=" << format_number(e.t) << ' ' << e.label << '\n';
    return traj.aborted ? 2 : 0;
}

int cmd_equilibria(const HiveConfig& cfg, const Options& o, Manifest& m, std::ostream& out)
{
    auto all = find_all(cfg, o.starts, o.seed);
    for (auto& r : all) {
        try {
            jacobian_eigen(cfg, r);
        } catch (const SolverError&) {
        }
    }
    std::ofstream f(fs::path(o.out) / "equilibria.csv");
    write_equilibria_csv(f, cfg, all);
    int interior = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        describe(m, "result.equilibrium_" + std::to_string(i + 1), all[i]);
        interior += all[i].interior();
        out << i + 1 << ": N* = " << all[i].N_star.transpose() << "  W* = " << format_number(all[i].welfare()) << "  "
            << to_string(all[i].stability) << '\n';
    }
    m.set("result.count", static_cast<double>(all.size()));
    m.set("result.interior_count", static_cast<double>(interior));
    return 0;
}

int cmd_spectrum(const HiveConfig& cfg, const Options& o, Manifest& m, std::ostream& out)
{
    EquilibriumRecord r = base_equilibrium(cfg, o, m);
    const Spectrum sp = jacobian_eigen(cfg, r);
    const SufficientStabilityReport suff = sufficient_stability(cfg, r);
    std::vector<std::string> names;
    for (int j : sp.active) names.push_back(cfg.family_names[static_cast<std::size_t>(j)]);
    write_matrix_csv(fs::path(o.out) / "jacobian.csv", sp.J, names, names);
    write_eigen_csv(fs::path(o.out) / "eigenvalues.csv", sp.eigenvalues);
    describe(m, "result", r);
    m.set("result.spectral_abscissa", sp.cls.spectral_abscissa);
    m.set("result.sufficient_condition", suff.holds ? "true" : "false");
    m.set("result.gershgorin_left_half_plane", suff.disks_in_left_half_plane ? "true" : "false");
    out << "N* = " << r.N_star.transpose() << "\nstability " << to_string(sp.cls.tag) << '\n';
    for (const auto& z : sp.eigenvalues) out << "  " << format_number(z.real()) << " " << format_number(z.imag()) << "i\n";
    return 0;
}

int cmd_statics(const HiveConfig& cfg, const Options& o, Manifest& m, std::ostream& out)
{
    EquilibriumRecord r = base_equilibrium(cfg, o, m);
    describe(m, "base", r);
    const ElasticityMatrix ss = stolper_samuelson(cfg, r, o.delta);
    const ElasticityMatrix rb = rybczynski(cfg, r, o.delta);
    {
        std::ofstream f(fs::path(o.out) / "stolper_samuelson.csv");
        write_elasticity_csv(f, ss);
    }
    {
        std::ofstream f(fs::path(o.out) / "rybczynski.csv");
        write_elasticity_csv(f, rb);
    }
    for (std::size_t c = 0; c < rb.col_labels.size(); ++c) {
        m.set("result.rb." + rb.col_labels[c] + ".magnified", rb.intensive_magnified[c] ? "true" : "false");
        m.set("result.rb." + rb.col_labels[c] + ".some_negative", rb.some_negative[c] ? "true" : "false");
    }
    m.set("result.ss.convention", ss.convention);
    if (!o.param.empty()) {
        const ParamSelector sel = ParamSelector::parse(o.param);
        const ParameterElasticity pe = parameter_elasticity(cfg, r, sel, o.delta);
        m.set("result.param.N", pe.N);
        m.set("result.param.lambda", pe.lambda);
        m.set("result.param.lost", pe.lost ? "true" : "false");
    }
    out << "Stolper-Samuelson (rows lambda, columns w)\n" << ss.values << "\nRybczynski (rows N, columns R)\n"
        << rb.values << '\n';
    return 0;
}

int cmd_hopf(const HiveConfig& cfg, const Options& o, Manifest& m, std::ostream& out)
{
    if (o.param.empty() || o.range.empty()) throw DomainViolation("hopf: --param and --range are required");
    const ParamSelector sel = ParamSelector::parse(o.param);
    const auto [lo, hi] = parse_range(o.range, "--range");
    HopfOptions ho;
    ho.starts = o.starts;
    ho.seed = o.seed;
    std::optional<Vector> N0;
    if (!o.n0.empty()) N0 = parse_vector(o.n0, cfg.families(), "--n0");
    const HopfResult res = hopf_scan(cfg, sel, lo, hi, o.steps, ho, N0 ? &*N0 : nullptr);
    {
        std::ofstream f(fs::path(o.out) / "hopf_branch.csv");
        write_branch_csv(f, cfg, res);
    }
    m.set("result.crossing_found", res.crossing_found ? "true" : "false");
    m.set("result.branch_lost", res.branch_lost ? "true" : "false");
    if (!res.note.empty()) m.set("result.note", res.note);
    if (!res.crossing_found) {
        out << "no crossing in [" << format_number(lo) << ", " << format_number(hi) << "]";
        if (!res.note.empty()) out << " (" << res.note << ")";
        out << '\n';
        return 0;
    }
    m.set("result.p_critical", res.p_critical);
    m.set("result.alpha_slope", res.alpha_slope);
    m.set("result.omega", res.omega);
    m.set("result.period_estimate", res.period_estimate);
    m.set("result.N_critical", res.N_critical);
    out << "crossing at " << res.param_name << " = " << format_number(res.p_critical) << ", omega "
        << format_number(res.omega) << ", period " << format_number(res.period_estimate) << '\n';

    CycleOptions co;
    co.keep_trajectory = true;
    const CycleInfo cy = cycle_past_crossing(cfg, sel, res, o.cycle_offset * std::abs(hi - lo), o.perturbation, co);
    m.set("result.cycle_found", cy.found ? "true" : "false");
    if (!cy.note.empty()) m.set("result.cycle_note", cy.note);
    if (cy.found) {
        m.set("result.cycle_period", cy.period);
        m.set("result.cycle_amplitude", cy.amplitude);
        m.set("result.cycle_convergence_ratio", cy.convergence_ratio);
        out << "limit cycle: period " << format_number(cy.period) << '\n';
    } else {
        out << "no limit cycle: " << cy.note << '\n';
    }
    if (!cy.trajectory.states.empty()) {
        write_trajectory_csv(fs::path(o.out) / "cycle_trajectory.csv", cfg, cy.trajectory);
        if (o.plot) plot_trajectory(fs::path(o.out) / "cycle.svg", cfg, cy.trajectory, "Trajectory past the crossing");
    }
    return 0;
}

int cmd_regime(const HiveConfig& cfg, const Options& o, Manifest& m, std::ostream& out, std::ostream& err)
{
    const auto [n1, n2] = parse_grid(o.grid);
    if (n1 < 2 || n2 < 2) throw DomainViolation("--grid: resolutions must be >= 2");
    Axis a1, a2;
    a1.param = ParamSelector::parse(o.axis1);
    std::tie(a1.lo, a1.hi) = parse_range(o.range.empty() ? "0:0.5" : o.range, "--range");
    a1.resolution = n1;
    a2.param = ParamSelector::parse(o.axis2);
    std::tie(a2.lo, a2.hi) = parse_range(o.range2, "--range2");
    a2.resolution = n2;
    const RegimeGrid grid = sweep(cfg, a1, a2, o.starts, o.seed, {}, [&](int done, int total) {
        err << "\rregime " << done << '/' << total << std::flush;
        if (done == total) err << '\n';
    });
    {
        std::ofstream f(fs::path(o.out) / "regime.csv");
        write_regime_csv(f, grid);
    }
    if (o.plot) {
        std::ofstream f(fs::path(o.out) / "regime.svg");
        write_regime_svg(f, grid);
    }
    std::map<std::string, int> counts;
    for (const auto& c : grid.cells) ++counts[to_string(c.classification)];
    for (const auto& [k, v] : counts) m.set("result.cells." + k, static_cast<double>(v));
    m.set("result.frontier.axis1", grid.frontier.axis1 ? format_number(*grid.frontier.axis1) : "none");
    m.set("result.frontier.axis2", grid.frontier.axis2 ? format_number(*grid.frontier.axis2) : "none");
    for (const auto& [k, v] : counts) out << k << ": " << v << '\n';
    out << "frontier " << o.axis1 << ": " << (grid.frontier.axis1 ? format_number(*grid.frontier.axis1) : "none") << '\n'
        << "frontier " << o.axis2 << ": " << (grid.frontier.axis2 ? format_number(*grid.frontier.axis2) : "none") << '\n';
    return 0;
}

void echo_options(Manifest& m, const std::string& command, const Options& o)
{
    m.set("command", command);
    m.set("config", o.config);
    m.set("dt", o.dt);
    m.set("horizon", o.horizon);
    m.set("starts", static_cast<double>(o.starts));
    m.set("seed", std::to_string(o.seed));
    m.set("delta", o.delta);
    m.set("param", o.param);
    m.set("range", o.range);
    m.set("steps", static_cast<double>(o.steps));
    m.set("grid", o.grid);
    m.set("axis1", o.axis1);
    m.set("axis2", o.axis2);
    m.set("range2", o.range2);
    m.set("cap", o.cap ? "true" : "false");
    m.set("plot", o.plot ? "true" : "false");
    m.set("n0", o.n0);
    m.set("renormalize", o.renormalize ? "true" : "false");
    m.set("perturbation", o.perturbation);
    m.set("cycle_offset", o.cycle_offset);
}

} // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Agentic Hive numerical engine"};
    app.require_subcommand(1);
    Options o;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"validate", "Check a configuration and report assumption diagnostics"},
        {"solve", "Newton solve for one equilibrium and its allocation"},
        {"simulate", "Integrate the replicator dynamics"},
        {"equilibria", "Multistart search for all equilibria"},
        {"spectrum", "Jacobian, eigenvalues and stability at an equilibrium"},
        {"statics", "Endowment and preference elasticities"},
        {"hopf", "Continuation scan for a Hopf crossing and limit cycle"},
        {"regime", "Two-parameter regime sweep and frontier estimate"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", o.config, "Configuration document")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "Output directory");
        sub->add_flag("--renormalize", o.renormalize, "Renormalize w and alpha rows instead of rejecting them");
        if (name == "validate") continue;
        sub->add_option("--n0", o.n0, "Start population, comma separated");
        sub->add_option("--starts", o.starts, "Multistart count")->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "Multistart seed");
        sub->add_flag("--plot", o.plot, "Emit SVG plots");
        if (name == "simulate") {
            sub->add_option("--dt", o.dt, "Step size")->check(CLI::PositiveNumber);
            sub->add_option("--horizon", o.horizon, "Integration horizon")->check(CLI::PositiveNumber);
            sub->add_flag("--cap", o.cap, "Project onto the budget set after each step");
        }
        if (name == "statics") {
            sub->add_option("--delta", o.delta, "Relative perturbation");
            sub->add_option("--param", o.param, "Extra parameter elasticity, e.g. gamma[1,2]");
        }
        if (name == "hopf") {
            sub->add_option("--param", o.param, "Continuation parameter, e.g. gamma[2,1]");
            sub->add_option("--range", o.range, "LO:HI");
            sub->add_option("--steps", o.steps, "Continuation samples")->check(CLI::Range(2, 100000));
            sub->add_option("--perturbation", o.perturbation, "Relative kick along the unstable direction");
            sub->add_option("--cycle-offset", o.cycle_offset, "Distance past the crossing, as a fraction of the range");
        }
        if (name == "regime") {
            sub->add_option("--grid", o.grid, "N1xN2");
            sub->add_option("--axis1", o.axis1, "First sweep parameter");
            sub->add_option("--axis2", o.axis2, "Second sweep parameter");
            sub->add_option("--range", o.range, "LO:HI of axis 1 (default 0:0.5)");
            sub->add_option("--range2", o.range2, "LO:HI of axis 2");
        }
    }
    ServerOptions so;
    auto* serve = app.add_subcommand("serve", "Run the steering service");
    serve->add_option("--host", so.host);
    serve->add_option("--port", so.port);
    serve->add_option("--log-dir", so.log_dir, "Directory for per-session event logs");
    serve->add_option("--static", so.static_dir, "Directory served at /");
    serve->add_option("--dt", so.session.dt, "Session step size")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (command == "serve") return run_server(so);

        ParseOptions po;
        po.renormalize = o.renormalize;
        const HiveConfig cfg = load_config(o.config, po);
        fs::create_directories(o.out);
        Manifest m;
        echo_options(m, command, o);
        int code = 0;
        if (command == "validate") code = cmd_validate(cfg, o, m, out);
        else if (command == "solve") code = cmd_solve(cfg, o, m, out);
        else if (command == "simulate") code = cmd_simulate(cfg, o, m, out);
        else if (command == "equilibria") code = cmd_equilibria(cfg, o, m, out);
        else if (command == "spectrum") code = cmd_spectrum(cfg, o, m, out);
        else if (command == "statics") code = cmd_statics(cfg, o, m, out);
        else if (command == "hopf") code = cmd_hopf(cfg, o, m, out);
        else if (command == "regime") code = cmd_regime(cfg, o, m, out, err);
        m.set("exit_status", static_cast<double>(code));
        m.write(fs::path(o.out) / "manifest.txt");
        return code;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace hive
