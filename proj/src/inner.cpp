#include "hive/inner.hpp"
#include "hive/errors.hpp"
#include "hive/production.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace hive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> active_families(const Vector& N)
{
    std::vector<int> act;
    for (Eigen::Index j = 0; j < N.size(); ++j) {
        if (!(N[j] >= 0.0) || !std::isfinite(N[j]))
            throw DomainViolation("population entries must be finite and >= 0");
        if (N[j] > 0.0) act.push_back(static_cast<int>(j));
    }
    return act;
}

// Market-clearing system in log prices for the active families.
struct DualProblem {
    const HiveConfig& cfg;
    const std::vector<int>& act;
    Vector logB;  // indexed like act

    DualProblem(const HiveConfig& c, const Vector& N, const std::vector<int>& a) : cfg(c), act(a)
    {
        logB.resize(static_cast<Eigen::Index>(act.size()));
        for (std::size_t i = 0; i < act.size(); ++i) logB[i] = log_productivity_scale(cfg, N, act[i]);
    }

    // Log conditional demands ln K_jm at log prices x (rows follow act).
    void log_demands(const Vector& x, Matrix& lnK, Matrix& shares) const
    {
        const int M = cfg.resources();
        const Eigen::Index Sa = static_cast<Eigen::Index>(act.size());
        const double sigma = cfg.sigma;
        lnK.resize(Sa, M);
        shares.resize(Sa, M);
        Vector s;
        for (Eigen::Index i = 0; i < Sa; ++i) {
            const int j = act[i];
            const double rho = cfg.rho[j];
            const double lnP = ces_log_unit_cost(cfg.alpha.row(j).transpose(), rho, x, s);
            shares.row(i) = s.transpose();
            double lnE;
            if (sigma == 1.0)
                lnE = std::log(cfg.w[j]);
            else
                lnE = std::log(cfg.w[j]) / sigma + (1.0 - sigma) / sigma * logB[i] + (sigma - 1.0) / sigma * lnP;
            for (int m = 0; m < M; ++m)
                lnK(i, m) = lnE + (rho - 1.0) * lnP + rho * std::log(cfg.alpha(j, m)) - rho * x[m];
        }
    }

    // r_m = ln D_m - ln R_m and its Jacobian in x.
    bool residual(const Vector& x, Vector& r, Matrix* J, Matrix* K) const
    {
        const int M = cfg.resources();
        Matrix lnK, s;
        log_demands(x, lnK, s);
        Matrix Kx = lnK.array().exp().matrix();
        if (!Kx.allFinite()) return false;
        Vector D = Kx.colwise().sum().transpose();
        if ((D.array() <= 0.0).any()) return false;
        r.resize(M);
        for (int m = 0; m < M; ++m) r[m] = std::log(D[m]) - std::log(cfg.R[m]);
        if (J) {
            J->setZero(M, M);
            for (Eigen::Index i = 0; i < Kx.rows(); ++i) {
                const int j = act[i];
                const double rho = cfg.rho[j];
                const double a = rho - 1.0 / cfg.sigma;
                for (int m = 0; m < M; ++m) {
                    const double weight = Kx(i, m) / D[m];
                    for (int n = 0; n < M; ++n) (*J)(m, n) += weight * a * s(i, n);
                    (*J)(m, m) -= weight * rho;
                }
            }
        }
        if (K) *K = std::move(Kx);
        return r.allFinite();
    }
};

struct NewtonOutcome {
    bool converged = false;
    Vector x;
    double residual = kInf;
    int iterations = 0;
};

NewtonOutcome dual_newton(const DualProblem& prob, Vector x, const InnerOptions& opt)
{
    NewtonOutcome out;
    Vector r;
    Matrix J;
    if (!prob.residual(x, r, &J, nullptr)) return out;
    double norm = r.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < opt.max_iterations; ++it) {
        out.iterations = it;
        if (norm < opt.tolerance) break;
        Eigen::PartialPivLU<Matrix> lu(J);
        Vector step = lu.solve(-r);
        if (!step.allFinite()) break;
        // cap the move at a factor e^5 per iteration
        const double big = step.lpNorm<Eigen::Infinity>();
        if (big > 5.0) step *= 5.0 / big;
        double t = 1.0;
        bool accepted = false;
        Vector xn, rn;
        Matrix Jn;
        for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
            xn = x + t * step;
            if (prob.residual(xn, rn, &Jn, nullptr) && rn.norm() < r.norm()) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        x = xn;
        r = rn;
        J = Jn;
        norm = r.lpNorm<Eigen::Infinity>();
    }
    out.x = x;
    out.residual = norm;
    out.converged = norm < opt.accept;
    return out;
}

// Euclidean projection of v onto {k >= lo, sum k = total}.
Vector project_capped_simplex(const Vector& v, double total, double lo)
{
    const Eigen::Index n = v.size();
    const double mass = total - lo * static_cast<double>(n);
    Vector y = v.array() - lo;
    std::vector<double> u(y.data(), y.data() + n);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0, tau = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        cum += u[i];
        const double t = (cum - mass) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) tau = t;
    }
    return (y.array() - tau).max(0.0).matrix().array() + lo;
}

Allocation finalize(const HiveConfig& cfg, const Vector& N, const std::vector<int>& act, Matrix K_full,
                    Vector lambda)
{
    const int S = cfg.families();
    const int M = cfg.resources();
    Allocation alloc;
    alloc.active = act;
    alloc.K = std::move(K_full);
    alloc.lambda = std::move(lambda);
    alloc.Y = Vector::Zero(S);
    alloc.theta = Matrix::Zero(S, M);

    double foc = 0.0;
    for (int j : act) {
        const double logB = log_productivity_scale(cfg, N, j);
        const Vector Kj = alloc.K.row(j).transpose();
        const double F = ces_output(cfg.alpha.row(j).transpose(), cfg.rho[j], Kj);
        alloc.Y[j] = std::exp(logB) * F;
        const double value = cfg.w[j] * crra_marginal_utility(alloc.Y[j], cfg.sigma) * alloc.Y[j];
        const Vector mp = ces_marginal_products(cfg.alpha.row(j).transpose(), cfg.rho[j], Kj);
        for (int m = 0; m < M; ++m) {
            alloc.theta(j, m) = alloc.lambda[m] * alloc.K(j, m) / value;
            const double lhs = cfg.w[j] * crra_marginal_utility(alloc.Y[j], cfg.sigma) * std::exp(logB) * mp[m];
            foc = std::max(foc, std::abs(lhs - alloc.lambda[m]) / alloc.lambda[m]);
        }
    }
    alloc.foc_residual = foc;
    double res = 0.0;
    for (int m = 0; m < M; ++m)
        res = std::max(res, std::abs(alloc.K.col(m).sum() - cfg.R[m]) / cfg.R[m]);
    alloc.residual = res;
    alloc.W_star = welfare_at(cfg, N, alloc.K).value;
    return alloc;
}

Allocation projected_gradient(const HiveConfig& cfg, const Vector& N, const std::vector<int>& act)
{
    const int M = cfg.resources();
    const Eigen::Index Sa = static_cast<Eigen::Index>(act.size());
    Vector logB(Sa);
    for (Eigen::Index i = 0; i < Sa; ++i) logB[i] = log_productivity_scale(cfg, N, act[i]);

    auto objective = [&](const Matrix& K) {
        double v = 0.0;
        for (Eigen::Index i = 0; i < Sa; ++i) {
            const int j = act[i];
            const double Y = std::exp(logB[i]) * ces_output(cfg.alpha.row(j).transpose(), cfg.rho[j], K.row(i).transpose());
            v += cfg.w[j] * crra_utility(Y, cfg.sigma);
        }
        return v;
    };
    auto gradient = [&](const Matrix& K) {
        Matrix G(Sa, M);
        for (Eigen::Index i = 0; i < Sa; ++i) {
            const int j = act[i];
            const Vector Ki = K.row(i).transpose();
            const double Bj = std::exp(logB[i]);
            const double Y = Bj * ces_output(cfg.alpha.row(j).transpose(), cfg.rho[j], Ki);
            const Vector mp = ces_marginal_products(cfg.alpha.row(j).transpose(), cfg.rho[j], Ki);
            G.row(i) = (cfg.w[j] * crra_marginal_utility(Y, cfg.sigma) * Bj * mp).transpose();
        }
        return G;
    };

    Matrix K(Sa, M);
    for (int m = 0; m < M; ++m) K.col(m).setConstant(cfg.R[m] / static_cast<double>(Sa));
    double f = objective(K);
    double t = 1.0;
    for (int it = 0; it < 20000; ++it) {
        const Matrix G = gradient(K);
        bool moved = false;
        for (int h = 0; h < 60; ++h) {
            Matrix Kn(Sa, M);
            for (int m = 0; m < M; ++m) {
                // scale the step to the resource's magnitude
                const Vector v = K.col(m) + t * cfg.R[m] * cfg.R[m] * G.col(m);
                Kn.col(m) = project_capped_simplex(v, cfg.R[m], 1e-12 * cfg.R[m]);
            }
            const double fn = objective(Kn);
            if (std::isfinite(fn) && fn >= f + 1e-4 * ((Kn - K).cwiseProduct(G)).sum()) {
                const double gain = fn - f;
                K = Kn;
                f = fn;
                moved = gain > 1e-15 * std::max(1.0, std::abs(f));
                t *= 2.0;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break;
    }
    if (!std::isfinite(f)) throw SolverDivergence("inner allocation: projected-gradient fallback failed");

    const Matrix G = gradient(K);
    Vector lambda(M);
    for (int m = 0; m < M; ++m) lambda[m] = K.col(m).dot(G.col(m)) / K.col(m).sum();
    Matrix K_full = Matrix::Zero(cfg.families(), M);
    for (Eigen::Index i = 0; i < Sa; ++i) K_full.row(act[i]) = K.row(i);
    Allocation alloc = finalize(cfg, N, act, std::move(K_full), std::move(lambda));
    alloc.used_fallback = true;
    return alloc;
}

} // namespace

Allocation solve_inner(const HiveConfig& cfg, const Vector& N, const InnerOptions& opt)
{
    const int M = cfg.resources();
    if (N.size() != cfg.families()) throw DimensionMismatch("population vector must have length S");
    const std::vector<int> act = active_families(N);
    if (act.empty()) throw NoActiveFamily("inner allocation: every family has zero population");

    if (opt.force_fallback) return projected_gradient(cfg, N, act);

    DualProblem prob(cfg, N, act);
    double wsum = 0.0;
    for (int j : act) wsum += cfg.w[j];
    Vector x0(M);
    for (int m = 0; m < M; ++m) x0[m] = std::log(wsum / cfg.R[m]);

    std::vector<Vector> starts;
    if (opt.warm_log_prices && opt.warm_log_prices->size() == M) starts.push_back(*opt.warm_log_prices);
    starts.push_back(x0);
    const double shifts[] = {std::log(10.0), -std::log(10.0), std::log(1000.0)};
    for (int k = 0; k < opt.restarts && k < 3; ++k) starts.push_back(x0.array() + shifts[k]);

    int total_iterations = 0;
    for (const Vector& start : starts) {
        NewtonOutcome out = dual_newton(prob, start, opt);
        total_iterations += out.iterations;
        if (!out.converged) continue;
        Vector r;
        Matrix Ka;
        prob.residual(out.x, r, nullptr, &Ka);
        Matrix K_full = Matrix::Zero(cfg.families(), M);
        for (std::size_t i = 0; i < act.size(); ++i) K_full.row(act[i]) = Ka.row(static_cast<Eigen::Index>(i));
        Allocation alloc = finalize(cfg, N, act, std::move(K_full), out.x.array().exp().matrix());
        alloc.iterations = total_iterations;
        return alloc;
    }
    return projected_gradient(cfg, N, act);
}

WelfareValue welfare_at(const HiveConfig& cfg, const Vector& N, const Matrix& K)
{
    WelfareValue out;
    double v = 0.0;
    for (int j = 0; j < cfg.families(); ++j) {
        v -= cfg.c[j] * N[j];
        if (!(N[j] > 0.0)) continue;
        const double Y = std::exp(log_productivity_scale(cfg, N, j)) *
                         ces_output(cfg.alpha.row(j).transpose(), cfg.rho[j], K.row(j).transpose());
        const double u = crra_utility(Y, cfg.sigma);
        if (!std::isfinite(u)) {
            out.finite = false;
            out.value = -kInf;
            return out;
        }
        v += cfg.w[j] * u;
    }
    out.value = v;
    return out;
}

std::vector<int> most_intensive_family(const Matrix& theta)
{
    std::vector<int> out(static_cast<std::size_t>(theta.cols()), -1);
    for (Eigen::Index m = 0; m < theta.cols(); ++m) {
        Eigen::Index best;
        theta.col(m).maxCoeff(&best);
        out[static_cast<std::size_t>(m)] = static_cast<int>(best);
    }
    return out;
}

FactorIntensity factor_intensity(const HiveConfig& cfg, const Allocation& alloc)
{
    FactorIntensity fi;
    fi.theta = Matrix::Zero(cfg.families(), cfg.resources());
    fi.most_intensive.assign(static_cast<std::size_t>(cfg.families()), -1);
    for (int j : alloc.active) {
        const double value = cfg.w[j] * crra_marginal_utility(alloc.Y[j], cfg.sigma) * alloc.Y[j];
        for (int m = 0; m < cfg.resources(); ++m) fi.theta(j, m) = alloc.lambda[m] * alloc.K(j, m) / value;
        Eigen::Index best;
        fi.theta.row(j).maxCoeff(&best);
        fi.most_intensive[static_cast<std::size_t>(j)] = static_cast<int>(best);
    }
    return fi;
}

Allocation brute_force_inner(const HiveConfig& cfg, const Vector& N, int grid_points)
{
    const int M = cfg.resources();
    const std::vector<int> act = active_families(N);
    if (act.empty()) throw NoActiveFamily("brute force: every family has zero population");
    const int Sa = static_cast<int>(act.size());
    if (Sa * M > 6) throw TooLarge("brute force oracle limited to (active families) x M <= 6");
    if (grid_points < 16) throw TooLarge("brute force oracle needs at least 16 grid points");

    Matrix best_K = Matrix::Zero(cfg.families(), M);
    if (Sa == 1) {
        best_K.row(act[0]) = cfg.R.transpose();
    } else {
        // Each resource m is described by Sa-1 free shares; the last family takes the remainder.
        const int dims_per = Sa - 1;
        const int dims = dims_per * M;
        auto welfare_of = [&](const std::vector<double>& shares, Matrix& K) {
            K.setZero(cfg.families(), M);
            for (int m = 0; m < M; ++m) {
                double rest = 1.0;
                for (int i = 0; i < dims_per; ++i) {
                    const double s = shares[static_cast<std::size_t>(m * dims_per + i)];
                    if (s <= 0.0) return -kInf;
                    K(act[i], m) = s * cfg.R[m];
                    rest -= s;
                }
                if (rest <= 0.0) return -kInf;
                K(act[Sa - 1], m) = rest * cfg.R[m];
            }
            return welfare_at(cfg, N, K).value;
        };

        // Initial pass: interior compositions k_i >= 1, sum k_i = g on each simplex.
        std::vector<std::vector<double>> simplex_points;
        {
            std::vector<int> k(static_cast<std::size_t>(Sa), 1);
            std::function<void(int, int)> rec = [&](int pos, int remaining) {
                if (pos == Sa - 1) {
                    if (remaining < 1) return;
                    std::vector<double> p;
                    for (int i = 0; i < dims_per; ++i) p.push_back(k[static_cast<std::size_t>(i)] / double(grid_points));
                    simplex_points.push_back(std::move(p));
                    return;
                }
                for (int v = 1; v <= remaining - (Sa - 1 - pos); ++v) {
                    k[static_cast<std::size_t>(pos)] = v;
                    rec(pos + 1, remaining - v);
                }
            };
            rec(0, grid_points);
        }

        double best = -kInf;
        std::vector<double> best_shares(static_cast<std::size_t>(dims), 0.0);
        std::vector<double> shares(static_cast<std::size_t>(dims));
        Matrix K;
        std::vector<std::size_t> idx(static_cast<std::size_t>(M), 0);
        for (;;) {
            for (int m = 0; m < M; ++m)
                for (int i = 0; i < dims_per; ++i)
                    shares[static_cast<std::size_t>(m * dims_per + i)] = simplex_points[idx[static_cast<std::size_t>(m)]][static_cast<std::size_t>(i)];
            const double v = welfare_of(shares, K);
            if (v > best) {
                best = v;
                best_shares = shares;
            }
            int m = 0;
            while (m < M && ++idx[static_cast<std::size_t>(m)] == simplex_points.size()) idx[static_cast<std::size_t>(m++)] = 0;
            if (m == M) break;
        }

        // Two refinement passes on a box of +-1 cell around the incumbent.
        double cell = 1.0 / grid_points;
        const int q = std::max(3, std::min(grid_points, static_cast<int>(std::pow(2e5, 1.0 / dims))));
        for (int pass = 0; pass < 2; ++pass) {
            const double h = 2.0 * cell / (q - 1);
            const std::vector<double> center = best_shares;
            std::vector<int> t(static_cast<std::size_t>(dims), 0);
            for (;;) {
                for (int d = 0; d < dims; ++d)
                    shares[static_cast<std::size_t>(d)] = center[static_cast<std::size_t>(d)] - cell + h * t[static_cast<std::size_t>(d)];
                const double v = welfare_of(shares, K);
                if (v > best) {
                    best = v;
                    best_shares = shares;
                }
                int d = 0;
                while (d < dims && ++t[static_cast<std::size_t>(d)] == q) t[static_cast<std::size_t>(d++)] = 0;
                if (d == dims) break;
            }
            cell = h;
        }
        welfare_of(best_shares, best_K);
    }

    // Prices from the first-order conditions at the grid point (value-weighted).
    Vector lambda = Vector::Zero(M);
    for (int m = 0; m < M; ++m) {
        double num = 0.0;
        for (int j : act) {
            const Vector Kj = best_K.row(j).transpose();
            const double Bj = std::exp(log_productivity_scale(cfg, N, j));
            const double Y = Bj * ces_output(cfg.alpha.row(j).transpose(), cfg.rho[j], Kj);
            const Vector mp = ces_marginal_products(cfg.alpha.row(j).transpose(), cfg.rho[j], Kj);
            num += best_K(j, m) * cfg.w[j] * crra_marginal_utility(Y, cfg.sigma) * Bj * mp[m];
        }
        lambda[m] = num / cfg.R[m];
    }
    return finalize(cfg, N, act, std::move(best_K), std::move(lambda));
}

} // namespace hive
