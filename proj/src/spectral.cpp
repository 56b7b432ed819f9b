#include "hive/spectral.hpp"
#include "hive/csv.hpp"
#include "hive/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hive {

namespace {

constexpr double kZeroBand = 1e-8;
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::size_t leading_complex_index(const std::vector<Complex>& ev)
{
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (ev[i].imag() > kZeroBand) return i;
    return 0;
}

struct Tracked {
    Complex value;
    Eigen::VectorXcd vector;
};

// Picks the eigenpair whose eigenvector overlaps most with the previous one;
// the member of a conjugate pair with positive imaginary part is reported.
Tracked track(const Spectrum& sp, const Eigen::VectorXcd& previous)
{
    std::size_t best = 0;
    double best_overlap = -1.0;
    for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
        const Eigen::VectorXcd v = sp.eigenvectors.col(static_cast<Eigen::Index>(i));
        const double overlap = std::abs(previous.dot(v)) / (previous.norm() * v.norm());
        if (overlap > best_overlap + 1e-12) {
            best_overlap = overlap;
            best = i;
        }
    }
    Tracked t{sp.eigenvalues[best], sp.eigenvectors.col(static_cast<Eigen::Index>(best))};
    if (t.value.imag() < 0.0) {
        t.value = std::conj(t.value);
        t.vector = t.vector.conjugate();
    }
    return t;
}

Tracked initial_track(const Spectrum& sp)
{
    const std::size_t i = leading_complex_index(sp.eigenvalues);
    return {sp.eigenvalues[i], sp.eigenvectors.col(static_cast<Eigen::Index>(i))};
}

} // namespace

StabilityClass classify_spectrum(const std::vector<Complex>& ev, double zb)
{
    StabilityClass cls;
    if (ev.empty()) return cls;
    std::size_t lead = 0;
    for (std::size_t i = 1; i < ev.size(); ++i) {
        if (ev[i].real() > ev[lead].real() ||
            (ev[i].real() == ev[lead].real() && ev[i].imag() > ev[lead].imag()))
            lead = i;
    }
    cls.leading = ev[lead];
    cls.spectral_abscissa = ev[lead].real();
    const double a = cls.spectral_abscissa;
    const bool complex_lead = std::abs(cls.leading.imag()) > zb;
    if (std::abs(a) <= zb) {
        cls.tag = StabilityTag::center_candidate;
    } else if (a < 0.0) {
        cls.tag = complex_lead ? StabilityTag::stable_spiral : StabilityTag::stable_node;
    } else {
        const bool some_negative = std::any_of(ev.begin(), ev.end(), [&](const Complex& z) { return z.real() < -zb; });
        cls.tag = (some_negative && !complex_lead) ? StabilityTag::saddle : StabilityTag::unstable;
    }
    return cls;
}

Spectrum spectrum_at(const HiveConfig& cfg, const Vector& N, const std::vector<int>& active, double rel_step)
{
    Spectrum sp;
    sp.active = active;
    const Matrix D = value_jacobian(cfg, N, active, rel_step);
    sp.J = D;
    for (std::size_t r = 0; r < active.size(); ++r) sp.J.row(static_cast<Eigen::Index>(r)) *= N[active[r]];

    Eigen::EigenSolver<Matrix> es(sp.J, true);
    if (es.info() != Eigen::Success) throw FDFailure("eigendecomposition did not converge");
    const auto n = static_cast<std::size_t>(sp.J.rows());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const Eigen::VectorXcd values = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Complex za = values[static_cast<Eigen::Index>(a)], zb = values[static_cast<Eigen::Index>(b)];
        if (za.real() != zb.real()) return za.real() > zb.real();
        return za.imag() > zb.imag();
    });
    const Eigen::MatrixXcd vectors = es.eigenvectors();
    sp.eigenvectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        sp.eigenvalues.push_back(values[static_cast<Eigen::Index>(order[i])]);
        sp.eigenvectors.col(static_cast<Eigen::Index>(i)) = vectors.col(static_cast<Eigen::Index>(order[i]));
    }
    sp.cls = classify_spectrum(sp.eigenvalues);
    return sp;
}

Spectrum jacobian_eigen(const HiveConfig& cfg, EquilibriumRecord& rec, double rel_step)
{
    Spectrum sp = spectrum_at(cfg, rec.N_star, rec.active_set, rel_step);
    const int S = cfg.families();
    rec.jacobian = Matrix::Zero(S, S);
    for (std::size_t r = 0; r < sp.active.size(); ++r)
        for (std::size_t k = 0; k < sp.active.size(); ++k)
            rec.jacobian(sp.active[r], sp.active[k]) = sp.J(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k));
    rec.eigenvalues = sp.eigenvalues;
    rec.stability = sp.cls.tag;
    return sp;
}

SufficientStabilityReport sufficient_stability(const HiveConfig& cfg, EquilibriumRecord& rec)
{
    if (rec.stability == StabilityTag::unknown) jacobian_eigen(cfg, rec);
    SufficientStabilityReport rep;
    rep.eta_condition = eta_max(cfg) < 1.0;
    rep.lhs = externality_norm(cfg) * rec.N_star.maxCoeff();
    rep.rhs = std::numeric_limits<double>::infinity();
    rep.disks_in_left_half_plane = true;
    for (int j : rec.active_set) {
        GershgorinDisk d;
        d.center = rec.jacobian(j, j);
        for (int k : rec.active_set)
            if (k != j) d.radius += std::abs(rec.jacobian(j, k));
        rep.disks.push_back(d);
        // |dV_j/dN^j| N*_j is exactly |J_jj|.
        rep.rhs = std::min(rep.rhs, std::abs(d.center));
        if (!(d.center + d.radius < 0.0)) rep.disks_in_left_half_plane = false;
    }
    rep.holds = rep.eta_condition && rep.lhs < rep.rhs;
    return rep;
}

HopfResult hopf_scan(const HiveConfig& cfg, const ParamSelector& param, double lo, double hi, int steps,
                     const HopfOptions& opt, const Vector* N0)
{
    if (steps < 2) throw DomainViolation("hopf: steps must be >= 2");
    if (!(lo != hi)) throw DomainViolation("hopf: empty parameter range");
    HopfResult res;
    res.param_name = param.to_string();

    const HiveConfig cfg_lo = param.apply(cfg, lo);
    EquilibriumRecord rec;
    if (N0) {
        try {
            rec = solve_from(cfg_lo, *N0, opt.solve);
        } catch (const SolverError& e) {
            throw BranchLost(std::string("no equilibrium at the range start: ") + e.what());
        }
    } else {
        const auto all = find_all(cfg_lo, opt.starts, opt.seed);
        auto it = std::find_if(all.begin(), all.end(), [](const EquilibriumRecord& r) { return r.interior(); });
        if (it == all.end()) throw BranchLost("no interior equilibrium at the range start");
        rec = *it;
    }

    Spectrum sp = spectrum_at(cfg_lo, rec.N_star, rec.active_set);
    Tracked tr = initial_track(sp);
    res.branch.push_back({lo, rec.N_star, tr.value});

    bool bisected = false;
    for (int i = 1; i < steps; ++i) {
        const double p = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
        const HiveConfig cfg_p = param.apply(cfg, p);
        EquilibriumRecord next;
        Spectrum sp_next;
        try {
            next = continue_equilibrium(cfg_p, rec, opt.solve);
            sp_next = spectrum_at(cfg_p, next.N_star, next.active_set);
        } catch (const SolverError& e) {
            res.branch_lost = true;
            res.note = "branch lost at p = " + format_number(p) + ": " + e.what();
            break;
        }
        const Tracked tr_next = track(sp_next, tr.vector);
        res.branch.push_back({p, next.N_star, tr_next.value});

        const double a0 = tr.value.real(), a1 = tr_next.value.real();
        const bool sign_change = (a0 < 0.0) != (a1 < 0.0);
        const bool oscillatory = tr.value.imag() > kZeroBand && tr_next.value.imag() > kZeroBand;
        if (sign_change && !oscillatory && res.note.empty())
            res.note = "real eigenvalue crosses zero near p = " + format_number(p) + " (not a Hopf point)";
        if (sign_change && oscillatory && !bisected) {
            bisected = true;
            double pa = res.branch[res.branch.size() - 2].p, pb = p;
            EquilibriumRecord ra = rec;
            Tracked ta = tr;
            double pm = pb;
            EquilibriumRecord rm = next;
            Tracked tm = tr_next;
            try {
                for (int b = 0; b < opt.max_bisections; ++b) {
                    pm = 0.5 * (pa + pb);
                    const HiveConfig cfg_m = param.apply(cfg, pm);
                    rm = continue_equilibrium(cfg_m, ra, opt.solve);
                    tm = track(spectrum_at(cfg_m, rm.N_star, rm.active_set), ta.vector);
                    if (std::abs(tm.value.real()) < opt.alpha_tolerance) break;
                    if ((tm.value.real() < 0.0) == (ta.value.real() < 0.0)) {
                        pa = pm;
                        ra = rm;
                        ta = tm;
                    } else {
                        pb = pm;
                    }
                    if (std::abs(pb - pa) <= 4e-16 * std::max(1.0, std::abs(pm))) break;
                }
                res.crossing_found = true;
                res.p_critical = pm;
                res.alpha_at_critical = tm.value.real();
                res.omega = std::abs(tm.value.imag());
                res.period_estimate = kTwoPi / res.omega;
                res.N_critical = rm.N_star;

                const double dp = opt.slope_fraction * (pm != 0.0 ? std::abs(pm) : 1.0);
                double alpha_pm[2];
                for (int s = 0; s < 2; ++s) {
                    const double q = pm + (s == 0 ? dp : -dp);
                    const HiveConfig cfg_q = param.apply(cfg, q);
                    const EquilibriumRecord rq = continue_equilibrium(cfg_q, rm, opt.solve);
                    alpha_pm[s] = track(spectrum_at(cfg_q, rq.N_star, rq.active_set), tm.vector).value.real();
                }
                res.alpha_slope = (alpha_pm[0] - alpha_pm[1]) / (2.0 * dp);
            } catch (const SolverError& e) {
                res.note = std::string("refinement of the crossing failed: ") + e.what();
            }
        }
        rec = std::move(next);
        tr = tr_next;
    }
    if (!res.crossing_found && res.note.empty()) res.note = "no crossing in range";
    return res;
}

void write_branch_csv(std::ostream& out, const HiveConfig& cfg, const HopfResult& res)
{
    CsvWriter csv(out);
    std::vector<std::string> header{"p"};
    for (int j = 1; j <= cfg.families(); ++j) header.push_back("N_" + std::to_string(j));
    header.push_back("re_lead");
    header.push_back("im_lead");
    csv.row(header);
    for (const auto& s : res.branch) {
        std::vector<double> row{s.p};
        for (Eigen::Index j = 0; j < s.N.size(); ++j) row.push_back(s.N[j]);
        row.push_back(s.lead.real());
        row.push_back(s.lead.imag());
        csv.row(row);
    }
}

CycleInfo detect_limit_cycle(const HiveConfig& cfg, EquilibriumRecord& rec, double perturbation, const CycleOptions& opt)
{
    CycleInfo info;
    const int S = cfg.families();
    info.amplitude = Vector::Zero(S);
    Spectrum sp;
    try {
        sp = jacobian_eigen(cfg, rec);
    } catch (const SolverError& e) {
        info.note = std::string("spectrum unavailable: ") + e.what();
        return info;
    }

    const Complex lead = sp.eigenvalues.front();
    const std::size_t idx = leading_complex_index(sp.eigenvalues);
    const bool complex_pair = sp.eigenvalues[idx].imag() > kZeroBand;
    const Eigen::VectorXcd v = sp.eigenvectors.col(static_cast<Eigen::Index>(complex_pair ? idx : 0));
    double T = 10.0;
    if (complex_pair)
        T = kTwoPi / sp.eigenvalues[idx].imag();
    else
        info.note = "no complex leading pair";
    if (lead.real() < -kZeroBand) info.note += std::string(info.note.empty() ? "" : "; ") + "equilibrium is stable";

    Vector dir = v.real();
    if (dir.lpNorm<Eigen::Infinity>() < 1e-12) dir = v.imag();
    dir /= dir.lpNorm<Eigen::Infinity>();
    Vector N0 = rec.N_star;
    for (std::size_t r = 0; r < sp.active.size(); ++r)
        N0[sp.active[r]] *= 1.0 + perturbation * dir[static_cast<Eigen::Index>(r)];

    IntegrateOptions io;
    io.dt = opt.dt > 0.0 ? opt.dt : std::min(0.01, T / 400.0);
    io.horizon = std::max(opt.periods * T, opt.min_horizon);
    io.early_stop = true;
    const Trajectory traj = integrate(cfg, N0, io);
    if (opt.keep_trajectory) info.trajectory = traj;

    auto fail = [&](const std::string& why) {
        info.note += std::string(info.note.empty() ? "" : "; ") + why;
        return info;
    };
    if (traj.aborted) return fail("trajectory aborted");
    for (const auto& e : traj.events)
        if (e.label.rfind("extinct:", 0) == 0) return fail("trajectory collapses to the boundary (" + e.label + ")");
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.budget_utilization[k] > opt.divergence_utilization ||
            traj.states[k].N.maxCoeff() > opt.divergence_population)
            return fail("trajectory diverges");
    }
    if (traj.converged) return fail("perturbation decays");

    const std::size_t start = traj.size() / 2;
    int fam = -1;
    double widest = 0.0;
    for (int j = 0; j < S; ++j) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t k = start; k < traj.size(); ++k) {
            lo = std::min(lo, traj.states[k].N[j]);
            hi = std::max(hi, traj.states[k].N[j]);
        }
        if (hi - lo > widest) {
            widest = hi - lo;
            fam = j;
        }
    }
    info.tracked_family = fam;
    if (fam < 0 || widest < 1e-6 * std::max(1.0, rec.N_star.maxCoeff())) return fail("no sustained oscillation");

    double mean = 0.0;
    for (std::size_t k = start; k < traj.size(); ++k) mean += traj.states[k].N[fam];
    mean /= static_cast<double>(traj.size() - start);

    std::vector<double> up;
    std::vector<std::size_t> up_index;
    for (std::size_t k = start + 1; k < traj.size(); ++k) {
        const double y0 = traj.states[k - 1].N[fam] - mean, y1 = traj.states[k].N[fam] - mean;
        if (y0 < 0.0 && y1 >= 0.0) {
            const double t0 = traj.states[k - 1].t, t1 = traj.states[k].t;
            up.push_back(t0 + (t1 - t0) * (-y0) / (y1 - y0));
            up_index.push_back(k);
        }
    }
    if (up.size() < 5) return fail("fewer than four full cycles after the transient");
    info.period = (up.back() - up.front()) / static_cast<double>(up.size() - 1);

    std::vector<double> amps;
    for (std::size_t c = 1; c < up_index.size(); ++c) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t k = up_index[c - 1]; k <= up_index[c]; ++k) {
            lo = std::min(lo, traj.states[k].N[fam]);
            hi = std::max(hi, traj.states[k].N[fam]);
        }
        amps.push_back(hi - lo);
    }
    for (int j = 0; j < S; ++j) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t k = up_index[up_index.size() - 2]; k <= up_index.back(); ++k) {
            lo = std::min(lo, traj.states[k].N[j]);
            hi = std::max(hi, traj.states[k].N[j]);
        }
        info.amplitude[j] = hi - lo;
    }
    const std::size_t n = amps.size();
    const double r1 = amps[n - 1] / amps[n - 2];
    const double r2 = amps[n - 2] / amps[n - 3];
    info.convergence_ratio = r1;
    const bool stable_amp = r1 >= 0.95 && r1 <= 1.05 && r2 >= 0.95 && r2 <= 1.05;
    if (!stable_amp) return fail("amplitude not stabilized (ratio " + format_number(r1) + ")");
    if (lead.real() < -kZeroBand && std::adjacent_find(amps.begin(), amps.end(), std::less_equal<double>()) == amps.end())
        return fail("oscillation decays monotonically around a stable focus");
    info.found = info.period > 0.0;
    return info;
}

CycleInfo cycle_past_crossing(const HiveConfig& cfg, const ParamSelector& param, const HopfResult& hopf, double offset,
                              double perturbation, const CycleOptions& opt)
{
    if (!hopf.crossing_found) throw DomainViolation("cycle_past_crossing: no crossing in the scan");
    const double dir = hopf.alpha_slope >= 0.0 ? 1.0 : -1.0;
    const HiveConfig past = param.apply(cfg, hopf.p_critical + dir * std::abs(offset));
    EquilibriumRecord rec = solve_from(past, hopf.N_critical, {});
    return detect_limit_cycle(past, rec, perturbation, opt);
}

} // namespace hive
