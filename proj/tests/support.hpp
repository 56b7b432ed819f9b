#pragma once

#include "hive/model.hpp"

#include <cmath>
#include <random>
#include <string>

#ifndef HIVE_SOURCE_DIR
#define HIVE_SOURCE_DIR "."
#endif

namespace hive::testing {

inline std::string source_path(const std::string& rel) { return std::string(HIVE_SOURCE_DIR) + "/" + rel; }

inline HiveConfig load(const std::string& rel) { return load_config(source_path(rel)); }

// Cobb-Douglas families with equal shares, no externalities, log utility.
inline HiveConfig plain_config(int S, int M)
{
    HiveConfig cfg;
    for (int j = 0; j < S; ++j) cfg.family_names.push_back("f" + std::to_string(j + 1));
    for (int m = 0; m < M; ++m) cfg.resource_names.push_back("r" + std::to_string(m + 1));
    cfg.A = Vector::Ones(S);
    cfg.c = Vector::Ones(S);
    cfg.eta = Vector::Constant(S, 0.5);
    cfg.rho = Vector::Ones(S);
    cfg.alpha = Matrix::Constant(S, M, 1.0 / M);
    cfg.gamma = Matrix::Zero(S, S);
    cfg.w = Vector::Constant(S, 1.0 / S);
    cfg.R = Vector::Constant(M, 5.0);
    cfg.B = 10.0 * S;
    return cfg;
}

inline HiveConfig single_family(double A, double c, double eta, double R, double sigma)
{
    HiveConfig cfg = plain_config(1, 1);
    cfg.A[0] = A;
    cfg.c[0] = c;
    cfg.eta[0] = eta;
    cfg.R[0] = R;
    cfg.sigma = sigma;
    cfg.w[0] = 1.0;
    cfg.B = 1e3;
    return cfg;
}

// Random config with decreasing returns and externality norm at most
// `fraction` of the weak-externality bound.
inline HiveConfig random_weak_config(std::mt19937_64& rng, int S, int M, double fraction = 0.5, bool ces = true)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    HiveConfig cfg = plain_config(S, M);
    for (int j = 0; j < S; ++j) {
        cfg.A[j] = 0.5 + U(rng);
        cfg.c[j] = 0.5 + U(rng);
        cfg.eta[j] = 0.3 + 0.5 * U(rng);
        cfg.rho[j] = ces ? 0.5 + U(rng) : 1.0;
        double row = 0.0;
        for (int m = 0; m < M; ++m) row += cfg.alpha(j, m) = 0.2 + U(rng);
        cfg.alpha.row(j) /= row;
        cfg.w[j] = 0.2 + U(rng);
    }
    cfg.w /= cfg.w.sum();
    for (int m = 0; m < M; ++m) cfg.R[m] = 2.0 + 8.0 * U(rng);
    cfg.sigma = 1.0;
    const double eta_max = cfg.eta.maxCoeff();
    const double bound = (1.0 - eta_max) / (1.0 + cfg.sigma * eta_max);
    if (S > 1) {
        for (int j = 0; j < S; ++j)
            for (int k = 0; k < S; ++k)
                if (j != k) cfg.gamma(j, k) = (2.0 * U(rng) - 1.0) * fraction * bound / (S - 1);
    }
    cfg.B = 20.0 * S;
    return cfg;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

} // namespace hive::testing
