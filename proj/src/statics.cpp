#include "hive/statics.hpp"
#include "hive/csv.hpp"
#include "hive/dynamics.hpp"
#include "hive/errors.hpp"
#include "hive/parallel.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace hive {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Walks the parameter from its base value by a relative amount `rel` in
// equal increments. Returns nullopt when the branch is lost or jumps.
std::optional<EquilibriumRecord> walk(const HiveConfig& cfg, const EquilibriumRecord& base, const ParamSelector& sel,
                                      double rel, const StaticsOptions& opt)
{
    const double p0 = sel.get(cfg);
    EquilibriumRecord cur = base;
    double first = -1.0;
    const int n = std::max(1, opt.substeps);
    for (int i = 1; i <= n; ++i) {
        const double p = p0 * (1.0 + rel * static_cast<double>(i) / n);
        EquilibriumRecord next;
        try {
            next = continue_equilibrium(sel.apply(cfg, p), cur, opt.solve);
        } catch (const SolverError&) {
            return std::nullopt;
        }
        const double step = (next.N_star - cur.N_star).lpNorm<Eigen::Infinity>();
        const double floor = 1e-7 * cur.N_star.lpNorm<Eigen::Infinity>();
        if (first < 0.0)
            first = step;
        else if (step > 4.0 * first + floor)
            return std::nullopt;
        cur = std::move(next);
    }
    return cur;
}

void require_interior(const EquilibriumRecord& rec, const char* what)
{
    if (!rec.interior()) throw DomainViolation(std::string(what) + ": the base equilibrium must be interior");
}

template <typename Extract>
void fill_columns(ElasticityMatrix& E, const HiveConfig& cfg, const EquilibriumRecord& rec,
                  const std::vector<ParamSelector>& sels, double delta, const StaticsOptions& opt, Extract extract)
{
    const Vector x0 = extract(rec);
    const auto rows = x0.size();
    const auto cols = static_cast<Eigen::Index>(sels.size());
    E.values = Matrix::Constant(rows, cols, kNaN);
    E.plus = E.values;
    E.minus = E.values;
    E.lost.assign(sels.size(), 0);
    E.step = delta;
    parallel_for(sels.size(), [&](std::size_t c) {
        const auto up = walk(cfg, rec, sels[c], delta, opt);
        const auto dn = up ? walk(cfg, rec, sels[c], -delta, opt) : std::nullopt;
        if (!up || !dn) {
            E.lost[c] = 1;
            return;
        }
        const Vector xp = extract(*up), xm = extract(*dn);
        const auto col = static_cast<Eigen::Index>(c);
        for (Eigen::Index r = 0; r < rows; ++r) {
            E.values(r, col) = (xp[r] - xm[r]) / (2.0 * delta * x0[r]);
            E.plus(r, col) = (xp[r] - x0[r]) / (delta * x0[r]);
            E.minus(r, col) = (x0[r] - xm[r]) / (delta * x0[r]);
        }
    });
}

} // namespace

ElasticityMatrix stolper_samuelson(const HiveConfig& cfg, const EquilibriumRecord& rec, double delta,
                                   const StaticsOptions& opt)
{
    require_interior(rec, "stolper_samuelson");
    if (!(delta >= 1e-4 && delta <= 0.2)) throw DomainViolation("stolper_samuelson: delta must lie in [1e-4, 0.2]");
    ElasticityMatrix E;
    E.kind = ElasticityMatrix::Kind::SS;
    std::vector<ParamSelector> sels;
    for (int j = 0; j < cfg.families(); ++j) {
        ParamSelector s;
        s.kind = ParamSelector::Kind::w;
        s.i = j;
        sels.push_back(s);
        E.col_labels.push_back("w_" + std::to_string(j + 1));
    }
    for (int m = 0; m < cfg.resources(); ++m) E.row_labels.push_back("lambda_" + std::to_string(m + 1));
    fill_columns(E, cfg, rec, sels, delta, opt, [](const EquilibriumRecord& r) { return r.allocation.lambda; });
    const FactorIntensity fi = factor_intensity(cfg, rec.allocation);
    E.intensity_argmax = fi.most_intensive;
    E.convention = "preference shocks renormalize the other weights proportionally; a ceteris-paribus change leaves the simplex";
    return E;
}

ElasticityMatrix rybczynski(const HiveConfig& cfg, const EquilibriumRecord& rec, double delta, const StaticsOptions& opt)
{
    require_interior(rec, "rybczynski");
    if (!(delta >= 1e-4 && delta <= 0.5)) throw DomainViolation("rybczynski: delta must lie in [1e-4, 0.5]");
    ElasticityMatrix E;
    E.kind = ElasticityMatrix::Kind::RB;
    std::vector<ParamSelector> sels;
    for (int m = 0; m < cfg.resources(); ++m) {
        ParamSelector s;
        s.kind = ParamSelector::Kind::R;
        s.i = m;
        sels.push_back(s);
        E.col_labels.push_back("R_" + std::to_string(m + 1));
    }
    for (int j = 0; j < cfg.families(); ++j) E.row_labels.push_back("N_" + std::to_string(j + 1));
    fill_columns(E, cfg, rec, sels, delta, opt, [](const EquilibriumRecord& r) { return r.N_star; });
    const FactorIntensity fi = factor_intensity(cfg, rec.allocation);
    E.intensity_argmax = most_intensive_family(fi.theta);
    E.convention = "endowment shocks, all other parameters fixed";
    for (int m = 0; m < cfg.resources(); ++m) {
        const auto c = static_cast<std::size_t>(m);
        if (E.lost[c]) {
            E.intensive_magnified.push_back(0);
            E.some_negative.push_back(0);
            continue;
        }
        const int k = E.intensity_argmax[c];
        E.intensive_magnified.push_back(k >= 0 && E.values(k, m) > 1.0 ? 1 : 0);
        E.some_negative.push_back(E.values.col(m).minCoeff() < 0.0 ? 1 : 0);
    }
    return E;
}

ParameterElasticity parameter_elasticity(const HiveConfig& cfg, const EquilibriumRecord& rec, const ParamSelector& sel,
                                         double delta, const StaticsOptions& opt)
{
    ParameterElasticity out;
    const double p0 = sel.get(cfg);
    const auto S = rec.N_star.size(), M = rec.allocation.lambda.size();
    out.N = Vector::Constant(S, kNaN);
    out.lambda = Vector::Constant(M, kNaN);
    if (p0 == 0.0) throw DomainViolation("elasticity undefined at a zero parameter value: " + sel.to_string());
    const auto up = walk(cfg, rec, sel, delta, opt);
    const auto dn = up ? walk(cfg, rec, sel, -delta, opt) : std::nullopt;
    if (!up || !dn) {
        out.lost = true;
        return out;
    }
    for (Eigen::Index j = 0; j < S; ++j)
        if (rec.N_star[j] > 0.0) out.N[j] = (up->N_star[j] - dn->N_star[j]) / (2.0 * delta * rec.N_star[j]);
    for (Eigen::Index m = 0; m < M; ++m)
        out.lambda[m] = (up->allocation.lambda[m] - dn->allocation.lambda[m]) / (2.0 * delta * rec.allocation.lambda[m]);
    return out;
}

Matrix rybczynski_implicit(const HiveConfig& cfg, const EquilibriumRecord& rec, double h)
{
    require_interior(rec, "rybczynski_implicit");
    const int S = cfg.families(), M = cfg.resources();
    const Matrix DN = value_jacobian(cfg, rec.N_star, rec.active_set, h);
    Matrix DR(S, M);
    try {
        for (int m = 0; m < M; ++m) {
            HiveConfig up = cfg, dn = cfg;
            const double step = h * cfg.R[m];
            up.R[m] += step;
            dn.R[m] -= step;
            DR.col(m) = (evaluate_values(up, rec.N_star).V - evaluate_values(dn, rec.N_star).V) / (2.0 * step);
        }
    } catch (const SolverError& e) {
        throw FDFailure(std::string("endowment probe failed: ") + e.what());
    }
    const Matrix dNdR = -DN.fullPivLu().solve(DR);
    Matrix E(S, M);
    for (int j = 0; j < S; ++j)
        for (int m = 0; m < M; ++m) E(j, m) = dNdR(j, m) * cfg.R[m] / rec.N_star[j];
    return E;
}

ShockResponse continue_shock(const HiveConfig& cfg, const EquilibriumRecord& rec, const ParamSelector& sel, double value,
                             int substeps, const SolveOptions& opt)
{
    ShockResponse out;
    const double p0 = sel.get(cfg);
    EquilibriumRecord cur = rec;
    const int n = std::max(1, substeps);
    try {
        for (int i = 1; i <= n; ++i) {
            const double p = p0 + (value - p0) * static_cast<double>(i) / n;
            cur = continue_equilibrium(sel.apply(cfg, p), cur, opt);
        }
    } catch (const SolverError& e) {
        out.lost = true;
        out.note = e.what();
    }
    out.record = cur;
    out.N_change = (cur.N_star.array() / rec.N_star.array() - 1.0).matrix();
    out.lambda_change = (cur.allocation.lambda.array() / rec.allocation.lambda.array() - 1.0).matrix();
    return out;
}

void write_elasticity_csv(std::ostream& out, const ElasticityMatrix& E)
{
    CsvWriter csv(out);
    std::vector<std::string> header{E.kind == ElasticityMatrix::Kind::SS ? "SS" : "RB"};
    header.insert(header.end(), E.col_labels.begin(), E.col_labels.end());
    header.push_back("flags");
    csv.row(header);
    std::string lost;
    for (std::size_t c = 0; c < E.lost.size(); ++c)
        if (E.lost[c]) lost += (lost.empty() ? "continuation_lost:" : ";") + E.col_labels[c];
    for (Eigen::Index r = 0; r < E.values.rows(); ++r) {
        std::vector<std::string> row{E.row_labels[static_cast<std::size_t>(r)]};
        for (Eigen::Index c = 0; c < E.values.cols(); ++c) row.push_back(format_number(E.values(r, c)));
        row.push_back(lost);
        csv.row(row);
    }
}

} // namespace hive
