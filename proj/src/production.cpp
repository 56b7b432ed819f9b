#include "hive/production.hpp"

#include <cmath>
#include <limits>

namespace hive {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double ces_output(const Eigen::Ref<const Vector>& a, double rho, const Eigen::Ref<const Vector>& K)
{
    const Eigen::Index M = a.size();
    if (rho == 1.0) {
        double logF = 0.0;
        for (Eigen::Index m = 0; m < M; ++m) {
            if (K[m] <= 0.0) return 0.0;
            logF += a[m] * std::log(K[m]);
        }
        return std::exp(logF);
    }
    const double r = (rho - 1.0) / rho;
    if (r < 0.0) {
        for (Eigen::Index m = 0; m < M; ++m)
            if (K[m] <= 0.0) return 0.0;
    }
    // Factor out the largest input to keep the power sum in range.
    const double scale = K.maxCoeff();
    if (scale <= 0.0) return 0.0;
    double sum = 0.0;
    for (Eigen::Index m = 0; m < M; ++m)
        if (K[m] > 0.0) sum += a[m] * std::pow(K[m] / scale, r);
    return scale * std::pow(sum, 1.0 / r);
}

Vector ces_marginal_products(const Eigen::Ref<const Vector>& a, double rho, const Eigen::Ref<const Vector>& K)
{
    const Eigen::Index M = a.size();
    Vector mp(M);
    const double F = ces_output(a, rho, K);
    for (Eigen::Index m = 0; m < M; ++m) {
        if (K[m] <= 0.0) {
            mp[m] = kInf;
            continue;
        }
        // dF/dK_m = a_m (F / K_m)^(1/rho)
        mp[m] = a[m] * std::pow(F / K[m], 1.0 / rho);
    }
    return mp;
}

double ces_log_unit_cost(const Eigen::Ref<const Vector>& a, double rho, const Eigen::Ref<const Vector>& x,
                         Vector& s)
{
    const Eigen::Index M = a.size();
    s.resize(M);
    if (rho == 1.0) {
        double logP = 0.0;
        for (Eigen::Index m = 0; m < M; ++m) {
            logP += a[m] * (x[m] - std::log(a[m]));
            s[m] = a[m];
        }
        return logP;
    }
    // ln P = ln(sum_m a_m^rho lambda_m^(1-rho)) / (1 - rho), via log-sum-exp.
    Vector terms(M);
    for (Eigen::Index m = 0; m < M; ++m) terms[m] = rho * std::log(a[m]) + (1.0 - rho) * x[m];
    const double top = terms.maxCoeff();
    double sum = 0.0;
    for (Eigen::Index m = 0; m < M; ++m) {
        s[m] = std::exp(terms[m] - top);
        sum += s[m];
    }
    s /= sum;
    return (top + std::log(sum)) / (1.0 - rho);
}

double crra_utility(double Y, double sigma)
{
    if (sigma == 1.0) return Y > 0.0 ? std::log(Y) : -kInf;
    if (Y <= 0.0) return sigma > 1.0 ? -kInf : 0.0;
    return std::pow(Y, 1.0 - sigma) / (1.0 - sigma);
}

double crra_marginal_utility(double Y, double sigma)
{
    if (Y <= 0.0) return kInf;
    if (sigma == 1.0) return 1.0 / Y;
    return std::pow(Y, -sigma);
}

double crra_value_share(double Y, double sigma)
{
    if (sigma == 1.0) return 1.0;
    if (Y <= 0.0) return sigma < 1.0 ? 0.0 : kInf;
    return std::pow(Y, 1.0 - sigma);
}

double log_productivity_scale(const HiveConfig& cfg, const Vector& N, int j)
{
    double v = std::log(cfg.A[j]) + cfg.eta[j] * std::log(N[j]);
    for (int k = 0; k < cfg.families(); ++k)
        if (k != j && N[k] > 0.0 && cfg.gamma(j, k) != 0.0) v += cfg.gamma(j, k) * std::log(N[k]);
    return v;
}

} // namespace hive
