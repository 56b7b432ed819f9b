#include "hive/dynamics.hpp"
#include "hive/errors.hpp"
#include "hive/production.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double own_term(const HiveConfig& cfg, const Allocation& alloc, const Vector& N, int j)
{
    return cfg.w[j] * cfg.eta[j] * crra_value_share(alloc.Y[j], cfg.sigma) / N[j];
}

} // namespace

ValueEvaluation evaluate_values(const HiveConfig& cfg, const Vector& N, const InnerOptions& options)
{
    const int S = cfg.families();
    ValueEvaluation ev;
    ev.alloc = solve_inner(cfg, N, options);
    ev.V = Vector::Zero(S);
    ev.sentinel.assign(static_cast<std::size_t>(S), 0);

    for (int j = 0; j < S; ++j) {
        if (N[j] > 0.0) {
            double v = own_term(cfg, ev.alloc, N, j);
            if (cfg.value_rule == ValueRule::gradient) {
                for (int k : ev.alloc.active) {
                    if (k == j || cfg.gamma(k, j) == 0.0) continue;
                    v += cfg.w[k] * cfg.gamma(k, j) * crra_value_share(ev.alloc.Y[k], cfg.sigma) / N[j];
                }
            }
            ev.V[j] = v - cfg.c[j];
            continue;
        }
        ev.sentinel[static_cast<std::size_t>(j)] = 1;
        const double e = cfg.eta[j] * (1.0 - cfg.sigma) / cfg.sigma - 1.0;
        if (e < 0.0) {
            ev.V[j] = kInf;
        } else if (e > 0.0) {
            ev.V[j] = -cfg.c[j];
        } else {
            Vector probe = N;
            probe[j] = 1e-8;
            const Allocation a = solve_inner(cfg, probe, options);
            ev.V[j] = own_term(cfg, a, probe, j) - cfg.c[j];
        }
    }
    return ev;
}

Vector marginal_value(const HiveConfig& cfg, const Vector& N) { return evaluate_values(cfg, N).V; }

Vector selection_field(const HiveConfig& cfg, const Vector& N)
{
    const Vector V = marginal_value(cfg, N);
    Vector phi = Vector::Zero(N.size());
    for (Eigen::Index j = 0; j < N.size(); ++j)
        if (N[j] > 0.0) phi[j] = V[j] * N[j];
    return phi;
}

Vector project_onto_budget(const Vector& y, const Vector& c, double B, double lower)
{
    Vector N = y.cwiseMax(lower);
    if (c.dot(N) <= B) return N;
    if (c.sum() * lower > B) throw DomainViolation("projection: lower bound leaves the budget set empty");

    // N(mu) = max(lower, y - mu c); find mu with c . N(mu) = B.
    auto cost = [&](double mu) { return c.dot((y - mu * c).cwiseMax(lower)); };
    double lo = 0.0;
    double hi = 0.0;
    for (Eigen::Index j = 0; j < y.size(); ++j) hi = std::max(hi, (y[j] - lower) / c[j]);
    for (int it = 0; it < 200 && hi - lo > 1e-300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cost(mid) > B)
            lo = mid;
        else
            hi = mid;
    }
    // Solve the linear piece exactly on the identified free set.
    double num = -B, den = 0.0;
    for (Eigen::Index j = 0; j < y.size(); ++j) {
        if (y[j] - hi * c[j] > lower) {
            num += c[j] * y[j];
            den += c[j] * c[j];
        } else {
            num += c[j] * lower;
        }
    }
    const double mu = den > 0.0 ? num / den : hi;
    N = (y - mu * c).cwiseMax(lower);
    return N;
}

Trajectory integrate(const HiveConfig& cfg, const Vector& N0, const IntegrateOptions& opt)
{
    const int S = cfg.families();
    if (!(opt.dt > 0.0)) throw DomainViolation("integrate: dt must be > 0");
    if (opt.horizon < opt.dt * (1.0 - 1e-12)) throw DomainViolation("integrate: horizon must be >= dt");
    if (N0.size() != S) throw DimensionMismatch("integrate: N0 must have length S");
    if ((N0.array() < 0.0).any()) throw DomainViolation("integrate: N0 must be >= 0");

    Trajectory traj;
    std::vector<char> frozen(static_cast<std::size_t>(S), 0);
    for (int j : opt.frozen) frozen[static_cast<std::size_t>(j)] = 1;
    Vector N = N0;
    for (int j = 0; j < S; ++j)
        if (frozen[static_cast<std::size_t>(j)]) N[j] = 0.0;

    auto rhs = [&](const Vector& state, ValueEvaluation* keep) {
        Vector clamped = state.cwiseMax(0.0);
        for (int j = 0; j < S; ++j)
            if (frozen[static_cast<std::size_t>(j)]) clamped[j] = 0.0;
        ValueEvaluation ev = evaluate_values(cfg, clamped);
        Vector phi = Vector::Zero(S);
        for (int j = 0; j < S; ++j)
            if (clamped[j] > 0.0) phi[j] = ev.V[j] * clamped[j];
        if (keep) *keep = std::move(ev);
        return phi;
    };

    bool over_budget = false;
    auto record = [&](double t, const ValueEvaluation& ev) {
        traj.states.push_back({N, t});
        traj.welfare.push_back(ev.alloc.W_star);
        traj.values.push_back(ev.V);
        const double util = budget_utilization(cfg, N);
        traj.budget_utilization.push_back(util);
        if (util > 1.0 && !over_budget) traj.events.push_back({t, "budget_exceeded"});
        if (util <= 1.0 && over_budget) traj.events.push_back({t, "budget_restored"});
        over_budget = util > 1.0;
    };

    auto rk4_step = [&](const Vector& state, const Vector& k1, double h) {
        const Vector k2 = rhs(state + 0.5 * h * k1, nullptr);
        const Vector k3 = rhs(state + 0.5 * h * k2, nullptr);
        const Vector k4 = rhs(state + h * k3, nullptr);
        return Vector(state + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    };

    const long steps = std::max(1L, std::lround(opt.horizon / opt.dt));
    const int every = std::max(1, opt.record_every);
    int quiet = 0;
    ValueEvaluation ev;
    Vector k1;
    try {
        k1 = rhs(N, &ev);
    } catch (const SolverError& e) {
        traj.aborted = true;
        traj.events.push_back({opt.t0, std::string("step_failure: ") + e.what()});
        return traj;
    } catch (const NoActiveFamily&) {
        traj.aborted = true;
        traj.events.push_back({opt.t0, "no_active_family"});
        return traj;
    }
    record(opt.t0, ev);

    for (long k = 0; k < steps; ++k) {
        const double t_next = opt.t0 + static_cast<double>(k + 1) * opt.dt;
        Vector next;
        try {
            next = rk4_step(N, k1, opt.dt);
        } catch (const SolverError&) {
            try {
                const Vector half = rk4_step(N, k1, 0.5 * opt.dt);
                next = rk4_step(half, rhs(half, nullptr), 0.5 * opt.dt);
                traj.events.push_back({t_next, "step_halved"});
            } catch (const SolverError& e) {
                traj.aborted = true;
                traj.events.push_back({t_next, std::string("step_failure: ") + e.what()});
                break;
            }
        }

        for (int j = 0; j < S; ++j) {
            if (frozen[static_cast<std::size_t>(j)]) {
                next[j] = 0.0;
                continue;
            }
            if (next[j] < opt.extinction_threshold) {
                next[j] = 0.0;
                frozen[static_cast<std::size_t>(j)] = 1;
                const std::string name = j < static_cast<int>(cfg.family_names.size()) ? cfg.family_names[static_cast<std::size_t>(j)]
                                                                                       : std::to_string(j + 1);
                traj.events.push_back({t_next, "extinct:" + name});
            }
        }
        if (cfg.c.dot(next) > cfg.B && opt.cap_mode) {
            next = project_onto_budget(next, cfg.c, cfg.B, 0.0);
            traj.events.push_back({t_next, "cap_hit"});
        }
        if (!next.allFinite()) {
            traj.aborted = true;
            traj.events.push_back({t_next, "non_finite_state"});
            break;
        }
        N = next;
        if ((N.array() <= 0.0).all()) {
            ValueEvaluation empty;
            empty.V = Vector::Zero(S);
            empty.alloc.W_star = std::numeric_limits<double>::quiet_NaN();
            record(t_next, empty);
            traj.aborted = true;
            traj.events.push_back({t_next, "no_active_family"});
            break;
        }

        try {
            k1 = rhs(N, &ev);
        } catch (const SolverError& e) {
            traj.aborted = true;
            traj.events.push_back({t_next, std::string("step_failure: ") + e.what()});
            break;
        }
        const bool last = (k + 1 == steps);
        const bool quiet_now = k1.lpNorm<Eigen::Infinity>() < opt.converged_tolerance;
        quiet = quiet_now ? quiet + 1 : 0;
        const bool stop = opt.early_stop && quiet >= opt.converged_steps;
        if ((k + 1) % every == 0 || last || stop) record(t_next, ev);
        if (quiet >= opt.converged_steps && !traj.converged) {
            traj.converged = true;
            traj.events.push_back({t_next, "converged"});
        }
        if (stop) break;
    }
    return traj;
}

LyapunovReport lyapunov_check(const HiveConfig& cfg, const Trajectory& traj, double tol)
{
    LyapunovReport rep;
    const ValidationReport vr = validate(cfg);
    rep.weak_ext_regime = vr.weak_ext_applicable && vr.weak_ext_satisfied;
    const std::size_t n = traj.size();
    rep.slope.assign(n, 0.0);
    rep.rhs.assign(n, 0.0);
    if (n < 3) return rep;

    const auto& W = traj.welfare;
    auto t = [&](std::size_t k) { return traj.states[k].t; };
    for (std::size_t k = 0; k < n; ++k) {
        double slope;
        if (k == 0) {
            const double h = t(1) - t(0);
            slope = (-3.0 * W[0] + 4.0 * W[1] - W[2]) / (2.0 * h);
        } else if (k == n - 1) {
            const double h = t(n - 1) - t(n - 2);
            slope = (3.0 * W[n - 1] - 4.0 * W[n - 2] + W[n - 3]) / (2.0 * h);
        } else {
            slope = (W[k + 1] - W[k - 1]) / (t(k + 1) - t(k - 1));
        }
        double r = 0.0;
        const Vector& N = traj.states[k].N;
        const Vector& V = traj.values[k];
        for (Eigen::Index j = 0; j < N.size(); ++j)
            if (N[j] > 0.0) r += V[j] * V[j] * N[j];
        rep.slope[k] = slope;
        rep.rhs[k] = r;
        rep.max_mismatch = std::max(rep.max_mismatch, std::abs(slope - r));
        rep.max_slope = std::max(rep.max_slope, std::abs(slope));
        rep.max_rhs = std::max(rep.max_rhs, r);
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double d = W[k + 1] - W[k];
        rep.worst_decrease = std::min(rep.worst_decrease, d);
        if (d < -tol) rep.non_decreasing = false;
    }
    rep.defect = rep.weak_ext_regime && !rep.non_decreasing;
    return rep;
}

FixedPointResult fixed_point_iterate(const HiveConfig& cfg, double eps, const Vector& N0, int max_iterations,
                                     double tolerance)
{
    if (!(eps > 0.0)) throw DomainViolation("fixed point: eps must be > 0");
    if (cfg.c.sum() * eps > cfg.B) throw DomainViolation("fixed point: truncated feasible set is empty");
    FixedPointResult res;
    Vector N = project_onto_budget(N0, cfg.c, cfg.B, eps);
    for (int it = 1; it <= max_iterations; ++it) {
        const Vector next = project_onto_budget(N + eps * selection_field(cfg, N), cfg.c, cfg.B, eps);
        res.last_step = (next - N).lpNorm<Eigen::Infinity>();
        N = next;
        res.iterations = it;
        if (res.last_step < tolerance) {
            res.converged = true;
            break;
        }
    }
    res.N = N;
    return res;
}

} // namespace hive
