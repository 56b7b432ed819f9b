#pragma once

#include "hive/model.hpp"

#include <optional>
#include <vector>

namespace hive {

// Solution of the orchestrator's allocation problem at a fixed population.
struct Allocation {
    Matrix K;           // S x M resource assignments; zero rows for inactive families
    Vector lambda;      // M shadow prices
    Vector Y;           // S outputs
    double W_star = 0;  // optimized welfare
    Matrix theta;       // S x M factor intensities (value shares)
    double residual = 0;      // max_m |sum_j K_jm - R_m| / R_m
    double foc_residual = 0;  // max relative mismatch of the first-order conditions
    std::vector<int> active;  // families with N^j > 0
    int iterations = 0;
    bool used_fallback = false;
};

struct InnerOptions {
    std::optional<Vector> warm_log_prices;
    double tolerance = 1e-12;  // on the log market-clearing residual
    double accept = 1e-10;     // residual accepted if tolerance is not reached
    int max_iterations = 100;
    int max_halvings = 30;
    int restarts = 3;
    bool force_fallback = false;  // skip the dual Newton (testing)
};

/// Welfare-maximizing allocation for population N. Throws NoActiveFamily or
/// SolverDivergence.
Allocation solve_inner(const HiveConfig& config, const Vector& N, const InnerOptions& options = {});

struct WelfareValue {
    double value = 0.0;
    bool finite = true;  // false: some active family has zero output under sigma >= 1
};

/// Social welfare at an arbitrary feasible allocation. Families with N^j = 0
/// only contribute their (zero) cost.
WelfareValue welfare_at(const HiveConfig& config, const Vector& N, const Matrix& K);

struct FactorIntensity {
    Matrix theta;
    std::vector<int> most_intensive;  // per family, argmax_m theta_jm (-1 if inactive)
};

FactorIntensity factor_intensity(const HiveConfig& config, const Allocation& alloc);

/// For each resource, the family that uses it most intensively (argmax_j theta_jm).
std::vector<int> most_intensive_family(const Matrix& theta);

/// Grid-search oracle for solve_inner. Requires (#active families) * M <= 6
/// and grid_points >= 16; throws TooLarge otherwise.
Allocation brute_force_inner(const HiveConfig& config, const Vector& N, int grid_points = 16);

} // namespace hive
