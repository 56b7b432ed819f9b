#include "hive/regime.hpp"
#include "hive/csv.hpp"
#include "hive/dynamics.hpp"
#include "hive/errors.hpp"
#include "hive/parallel.hpp"
#include "hive/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>

namespace hive {

std::string to_string(Regime r)
{
    switch (r) {
    case Regime::unique_stable: return "unique-stable";
    case Regime::multiple_stable: return "multiple-stable";
    case Regime::cycles: return "cycles";
    case Regime::instability: return "instability";
    }
    return "instability";
}

double Axis::value(int i) const
{
    if (resolution < 2) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
}

namespace {

struct ProbeOutcome {
    int diverged = 0;
    int collapsed = 0;
    int settled = 0;
};

ProbeOutcome run_probes(const HiveConfig& cfg, const ProbeOptions& opt)
{
    ProbeOutcome out;
    const Vector centroid = omega_centroid(cfg);
    const Vector starts[3] = {centroid, 0.25 * centroid, project_onto_budget(1.5 * centroid, cfg.c, cfg.B)};
    IntegrateOptions io;
    io.dt = opt.dt;
    io.horizon = opt.horizon;
    for (const Vector& N0 : starts) {
        const Trajectory traj = integrate(cfg, N0, io);
        bool diverged = false;
        for (std::size_t k = 0; k < traj.size() && !diverged; ++k)
            diverged = traj.budget_utilization[k] > opt.divergence_utilization ||
                       traj.states[k].N.maxCoeff() > opt.divergence_population;
        const bool collapsed =
            traj.aborted || std::any_of(traj.events.begin(), traj.events.end(),
                                        [](const TrajectoryEvent& e) { return e.label.rfind("extinct:", 0) == 0; });
        if (diverged)
            ++out.diverged;
        else if (collapsed)
            ++out.collapsed;
        else
            ++out.settled;
    }
    return out;
}

} // namespace

RegimeCell classify_cell(const HiveConfig& cfg, int starts, std::uint64_t seed, const ClassifyOptions& opt)
{
    RegimeCell cell;
    std::vector<EquilibriumRecord> interior;
    for (auto& r : find_all(cfg, starts, seed, opt.find))
        if (r.interior()) interior.push_back(std::move(r));
    cell.n_interior = static_cast<int>(interior.size());
    for (auto& r : interior) {
        try {
            jacobian_eigen(cfg, r);
        } catch (const SolverError& e) {
            cell.notes.push_back(std::string("spectrum failed: ") + e.what());
        }
        if (is_stable(r.stability)) ++cell.n_stable;
    }
    if (cell.n_interior == 1 && interior.front().stability != StabilityTag::unknown)
        cell.sufficient_condition = sufficient_stability(cfg, interior.front()).holds;

    if (cell.n_stable >= 2) {
        cell.classification = Regime::multiple_stable;
        return cell;
    }
    if (cell.n_interior == 1 && cell.n_stable == 1) {
        cell.classification = Regime::unique_stable;
        return cell;
    }
    for (auto& r : interior) {
        if (r.eigenvalues.empty()) continue;
        const StabilityClass cls = classify_spectrum(r.eigenvalues);
        if (is_stable(cls.tag) || std::abs(cls.leading.imag()) <= 1e-8) continue;
        const CycleInfo cyc = detect_limit_cycle(cfg, r, opt.cycle_perturbation);
        if (cyc.found) {
            cell.classification = Regime::cycles;
            cell.cycle_period = cyc.period;
            return cell;
        }
        cell.notes.push_back("no bounded cycle near an unstable focus: " + cyc.note);
    }
    if (cell.n_stable == 1) {
        cell.classification = Regime::unique_stable;
        cell.notes.push_back("one stable interior equilibrium alongside " + std::to_string(cell.n_interior - 1) +
                             " unstable one(s)");
        return cell;
    }
    cell.classification = Regime::instability;
    const ProbeOutcome p = run_probes(cfg, opt.probe);
    cell.notes.push_back("probe trajectories: " + std::to_string(p.diverged) + " diverged, " +
                         std::to_string(p.collapsed) + " collapsed to the boundary, " + std::to_string(p.settled) +
                         " bounded");
    if (cell.n_interior > 0 && p.diverged == 0 && p.collapsed == 0)
        cell.notes.push_back("ambiguous: interior equilibria are unstable but probes stay bounded");
    return cell;
}

RegimeGrid sweep(const HiveConfig& base, const Axis& a1, const Axis& a2, int starts, std::uint64_t seed,
                 const ClassifyOptions& opt, const ProgressFn& progress)
{
    if (a1.resolution < 2 || a2.resolution < 2) throw DomainViolation("sweep: resolutions must be >= 2");
    RegimeGrid grid;
    grid.axis1 = a1;
    grid.axis2 = a2;
    const int total = a1.resolution * a2.resolution;
    grid.cells.resize(static_cast<std::size_t>(total));
    std::atomic<int> done{0};
    std::mutex report;
    parallel_for(static_cast<std::size_t>(total), [&](std::size_t idx) {
        const int i1 = static_cast<int>(idx) / a2.resolution;
        const int i2 = static_cast<int>(idx) % a2.resolution;
        const double v1 = a1.value(i1), v2 = a2.value(i2);
        const HiveConfig cfg = a2.param.apply(a1.param.apply(base, v1), v2);
        RegimeCell cell;
        try {
            cell = classify_cell(cfg, starts, seed, opt);
        } catch (const std::exception& e) {
            cell.classification = Regime::instability;
            cell.notes.push_back(std::string("classification failed: ") + e.what());
        }
        cell.gamma_value = v1;
        cell.eta_value = v2;
        grid.cells[idx] = std::move(cell);
        const int d = ++done;
        if (progress) {
            std::lock_guard<std::mutex> lock(report);
            progress(d, total);
        }
    });
    grid.frontier = estimate_frontier(grid);
    return grid;
}

namespace {

std::optional<double> median(std::vector<double> v)
{
    if (v.empty()) return std::nullopt;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

FrontierEstimate estimate_frontier(const RegimeGrid& g)
{
    const int n1 = g.axis1.resolution, n2 = g.axis2.resolution;
    std::vector<double> along1, along2;
    for (int i2 = 0; i2 < n2; ++i2) {
        if (g.at(0, i2).classification != Regime::unique_stable) continue;
        for (int i1 = 1; i1 < n1; ++i1) {
            if (g.at(i1, i2).classification != Regime::unique_stable) {
                along1.push_back(0.5 * (g.axis1.value(i1 - 1) + g.axis1.value(i1)));
                break;
            }
        }
    }
    for (int i1 = 0; i1 < n1; ++i1) {
        if (g.at(i1, 0).classification != Regime::unique_stable) continue;
        for (int i2 = 1; i2 < n2; ++i2) {
            if (g.at(i1, i2).classification != Regime::unique_stable) {
                along2.push_back(0.5 * (g.axis2.value(i2 - 1) + g.axis2.value(i2)));
                break;
            }
        }
    }
    return {median(along1), median(along2)};
}

void write_regime_csv(std::ostream& out, const RegimeGrid& grid)
{
    CsvWriter csv(out);
    csv.row(std::vector<std::string>{"gamma", "eta", "classification", "n_interior", "n_stable", "cycle_period"});
    for (const auto& c : grid.cells) {
        csv.row(std::vector<std::string>{format_number(c.gamma_value), format_number(c.eta_value),
                                         to_string(c.classification), std::to_string(c.n_interior),
                                         std::to_string(c.n_stable),
                                         c.cycle_period ? format_number(*c.cycle_period) : std::string()});
    }
}

} // namespace hive
