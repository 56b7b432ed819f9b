#include "hive/equilibrium.hpp"
#include "hive/csv.hpp"
#include "hive/dynamics.hpp"
#include "hive/errors.hpp"
#include "hive/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace hive {

std::string to_string(StabilityTag tag)
{
    switch (tag) {
    case StabilityTag::stable_node: return "stable-node";
    case StabilityTag::stable_spiral: return "stable-spiral";
    case StabilityTag::unstable: return "unstable";
    case StabilityTag::saddle: return "saddle";
    case StabilityTag::center_candidate: return "center-candidate";
    case StabilityTag::unknown: break;
    }
    return "unknown";
}

bool is_stable(StabilityTag tag) { return tag == StabilityTag::stable_node || tag == StabilityTag::stable_spiral; }

bool EquilibriumRecord::valid(double tolerance) const
{
    return V_residual < tolerance && inactive_ok && budget_ok && allocation.residual < 1e-10;
}

namespace {

Vector restrict(const Vector& v, const std::vector<int>& index)
{
    Vector out(static_cast<Eigen::Index>(index.size()));
    for (std::size_t i = 0; i < index.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[index[i]];
    return out;
}

Vector active_values(const HiveConfig& cfg, const Vector& N, const std::vector<int>& index)
{
    const Vector V = evaluate_values(cfg, N).V;
    return restrict(V, index);
}

Vector expand(const Vector& x, const std::vector<int>& index, int S)
{
    Vector N = Vector::Zero(S);
    for (std::size_t i = 0; i < index.size(); ++i) N[index[i]] = std::exp(x[static_cast<Eigen::Index>(i)]);
    return N;
}

Vector newton_direction(const Matrix& J, const Vector& rhs)
{
    Vector dx = J.colPivHouseholderQr().solve(rhs);
    if (!dx.allFinite() || (J * dx - rhs).norm() > 1e-6 * (1.0 + rhs.norm()))
        dx = J.completeOrthogonalDecomposition().solve(rhs);
    return dx;
}

double halton(std::uint64_t index, unsigned base)
{
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

unsigned nth_prime(int n)
{
    static const unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    if (n < static_cast<int>(sizeof primes / sizeof primes[0])) return primes[n];
    throw TooLarge("multistart: at most 24 families supported");
}

// splitmix64, for a seed-stable shift independent of the standard library.
std::uint64_t splitmix(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

Matrix value_jacobian(const HiveConfig& cfg, const Vector& N, const std::vector<int>& index, double rel_step)
{
    const auto n = static_cast<Eigen::Index>(index.size());
    Matrix D(n, n);
    try {
        for (Eigen::Index k = 0; k < n; ++k) {
            const int col = index[static_cast<std::size_t>(k)];
            const double h = rel_step * N[col];
            Vector Np = N, Nm = N;
            Np[col] += h;
            Nm[col] -= h;
            D.col(k) = (active_values(cfg, Np, index) - active_values(cfg, Nm, index)) / (2.0 * h);
        }
    } catch (const SolverError& e) {
        throw FDFailure(std::string("Jacobian probe failed: ") + e.what());
    }
    if (!D.allFinite()) throw FDFailure("Jacobian probe produced non-finite entries");
    return D;
}

EquilibriumRecord solve_from(const HiveConfig& cfg, const Vector& N0, const SolveOptions& opt)
{
    const int S = cfg.families();
    if (N0.size() != S) throw DimensionMismatch("solve_from: N0 must have length S");
    std::vector<int> active;
    for (int j = 0; j < S; ++j) {
        if (!(N0[j] >= 0.0) || !std::isfinite(N0[j])) throw DomainViolation("solve_from: N0 must be finite and >= 0");
        if (N0[j] > 0.0) active.push_back(j);
    }
    if (active.empty()) throw NoActiveFamily("solve_from: N0 has no active family");

    Vector x = restrict(N0, active).array().log().matrix();
    Vector V = active_values(cfg, expand(x, active, S), active);
    if (!V.allFinite()) throw NoConvergence("solve_from: non-finite marginal values at the start point");
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        if (V.lpNorm<Eigen::Infinity>() < opt.tolerance) break;
        const Vector N = expand(x, active, S);
        Matrix J = value_jacobian(cfg, N, active, opt.fd_step);
        for (Eigen::Index k = 0; k < J.cols(); ++k) J.col(k) *= N[active[static_cast<std::size_t>(k)]];

        Vector dx = newton_direction(J, -V);
        const double size = dx.lpNorm<Eigen::Infinity>();
        if (!std::isfinite(size)) throw NoConvergence("solve_from: singular Newton system");
        if (size > opt.max_log_step) dx *= opt.max_log_step / size;

        const double merit = V.norm();
        double t = 1.0;
        bool accepted = false;
        Vector x_try, V_try;
        for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
            x_try = x + t * dx;
            try {
                V_try = active_values(cfg, expand(x_try, active, S), active);
            } catch (const SolverError&) {
                continue;
            }
            if (V_try.allFinite() && V_try.norm() <= (1.0 - 1e-4 * t) * merit) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // Stalled at the noise floor of the inner solver.
            if (V.lpNorm<Eigen::Infinity>() < 1e-9) break;
            throw NoConvergence("solve_from: line search failed");
        }
        x = x_try;
        V = V_try;
        if (x.minCoeff() < -40.0) throw NoConvergence("solve_from: a family collapses towards zero");
        if (x.maxCoeff() > 40.0) throw NoConvergence("solve_from: population diverges");
    }
    if (!(V.lpNorm<Eigen::Infinity>() < std::max(opt.tolerance, 1e-9)))
        throw NoConvergence("solve_from: no convergence after " + std::to_string(it) + " iterations (max |V| = " +
                            format_number(V.lpNorm<Eigen::Infinity>()) + ")");

    EquilibriumRecord rec;
    rec.N_star = expand(x, active, S);
    rec.active_set = active;
    rec.iterations = it;
    const ValueEvaluation ev = evaluate_values(cfg, rec.N_star);
    rec.allocation = ev.alloc;
    rec.V = ev.V;
    rec.V_residual = restrict(ev.V, active).lpNorm<Eigen::Infinity>();
    rec.entry_values = Vector::Constant(S, std::numeric_limits<double>::quiet_NaN());
    for (int j = 0; j < S; ++j) {
        if (rec.N_star[j] > 0.0) continue;
        Vector probe = rec.N_star;
        probe[j] = opt.entry_delta;
        rec.entry_values[j] = evaluate_values(cfg, probe).V[j];
        if (!(rec.entry_values[j] <= 1e-8)) rec.inactive_ok = false;
    }
    rec.budget_ok = budget_cost(cfg, rec.N_star) <= cfg.B * (1.0 + 1e-12);
    return rec;
}

EquilibriumRecord continue_equilibrium(const HiveConfig& cfg, const EquilibriumRecord& previous, const SolveOptions& opt)
{
    EquilibriumRecord rec;
    try {
        rec = solve_from(cfg, previous.N_star, opt);
    } catch (const SolverError& e) {
        throw BranchLost(std::string("continuation failed: ") + e.what());
    }
    if (rec.active_set != previous.active_set) throw BranchLost("continuation changed the active set");
    return rec;
}

std::vector<Vector> multistart_points(const HiveConfig& cfg, int starts, std::uint64_t seed, double fraction)
{
    if (starts < 1) throw DomainViolation("starts must be >= 1");
    const int S = cfg.families();
    std::uint64_t state = seed;
    std::vector<double> shift(static_cast<std::size_t>(S + 1));
    for (auto& s : shift) s = static_cast<double>(splitmix(state) >> 11) * 0x1.0p-53;

    std::vector<Vector> points;
    points.reserve(static_cast<std::size_t>(starts));
    for (int i = 1; i <= starts; ++i) {
        Vector e(S + 1);
        for (int d = 0; d <= S; ++d) {
            double u = halton(static_cast<std::uint64_t>(i), nth_prime(d)) + shift[static_cast<std::size_t>(d)];
            u -= std::floor(u);
            u = std::clamp(u, 1e-12, 1.0 - 1e-12);
            e[d] = -std::log(1.0 - u);
        }
        e /= e.sum();
        Vector N(S);
        for (int j = 0; j < S; ++j) N[j] = fraction * cfg.B * e[j] / cfg.c[j];
        points.push_back(N);
    }
    return points;
}

std::vector<EquilibriumRecord> find_all(const HiveConfig& cfg, int starts, std::uint64_t seed, const FindOptions& opt)
{
    std::vector<Vector> candidates = multistart_points(cfg, starts, seed, opt.budget_fraction);
    const int S = cfg.families();
    if (opt.boundary_candidates && S >= 2) {
        for (int j = 0; j < S; ++j) {
            Vector N = omega_centroid(cfg);
            N[j] = 0.0;
            candidates.push_back(N);
        }
    }

    std::vector<std::optional<EquilibriumRecord>> results(candidates.size());
    parallel_for(
        candidates.size(),
        [&](std::size_t i) {
            try {
                results[i] = solve_from(cfg, candidates[i], opt.solve);
            } catch (const SolverError&) {
            }
        },
        opt.workers);

    std::vector<EquilibriumRecord> unique;
    for (auto& r : results) {
        if (!r || !r->valid()) continue;
        bool duplicate = false;
        for (const auto& u : unique) {
            const double scale = std::max(u.N_star.lpNorm<Eigen::Infinity>(), 1e-300);
            if ((r->N_star - u.N_star).lpNorm<Eigen::Infinity>() / scale < opt.dedup_tolerance) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) unique.push_back(std::move(*r));
    }
    std::stable_sort(unique.begin(), unique.end(),
                     [](const EquilibriumRecord& a, const EquilibriumRecord& b) { return a.welfare() > b.welfare(); });
    return unique;
}

void write_equilibria_csv(std::ostream& out, const HiveConfig& cfg, const std::vector<EquilibriumRecord>& records)
{
    CsvWriter csv(out);
    std::vector<std::string> header{"id"};
    for (int j = 1; j <= cfg.families(); ++j) header.push_back("N_" + std::to_string(j));
    header.push_back("W_star");
    for (int m = 1; m <= cfg.resources(); ++m) header.push_back("lambda_" + std::to_string(m));
    header.push_back("stability");
    header.push_back("max_abs_V");
    csv.row(header);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        std::vector<std::string> row{std::to_string(i + 1)};
        for (Eigen::Index j = 0; j < r.N_star.size(); ++j) row.push_back(format_number(r.N_star[j]));
        row.push_back(format_number(r.welfare()));
        for (Eigen::Index m = 0; m < r.allocation.lambda.size(); ++m) row.push_back(format_number(r.allocation.lambda[m]));
        row.push_back(to_string(r.stability));
        row.push_back(format_number(r.V_residual));
        csv.row(row);
    }
}

} // namespace hive
