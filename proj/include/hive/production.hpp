#pragma once

#include "hive/model.hpp"

namespace hive {

// CES aggregator F(K) = [sum_m a_m K_m^((rho-1)/rho)]^(rho/(rho-1)); the
// Cobb-Douglas form is used when rho == 1.
double ces_output(const Eigen::Ref<const Vector>& shares, double rho, const Eigen::Ref<const Vector>& K);

/// dF/dK_m. Infinite where K_m == 0 (Inada).
Vector ces_marginal_products(const Eigen::Ref<const Vector>& shares, double rho, const Eigen::Ref<const Vector>& K);

// Unit cost index of the CES technology at factor prices exp(log_prices).
// cost_shares receives d ln P / d ln lambda_m, the cost share of each factor.
double ces_log_unit_cost(const Eigen::Ref<const Vector>& shares, double rho,
                         const Eigen::Ref<const Vector>& log_prices, Vector& cost_shares);

// CRRA utility; sigma == 1 is the logarithmic branch.
double crra_utility(double Y, double sigma);
double crra_marginal_utility(double Y, double sigma);
/// Y^(1 - sigma), i.e. u'(Y) * Y. Exactly 1 for log utility.
double crra_value_share(double Y, double sigma);

/// ln of A_j (N^j)^eta_j prod_{k != j, N^k > 0} (N^k)^gamma_jk. Families with
/// zero population exert no spillover.
double log_productivity_scale(const HiveConfig& config, const Vector& N, int j);

} // namespace hive
