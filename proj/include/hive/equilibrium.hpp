#pragma once

#include "hive/inner.hpp"
#include "hive/model.hpp"

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace hive {

enum class StabilityTag { unknown, stable_node, stable_spiral, unstable, saddle, center_candidate };

std::string to_string(StabilityTag tag);
bool is_stable(StabilityTag tag);

struct EquilibriumRecord {
    Vector N_star;
    std::vector<int> active_set;
    Allocation allocation;
    Vector V;
    double V_residual = 0.0;  // max |V_j| over the active set
    Vector entry_values;      // V_j probed at N^j = delta_entry for inactive j, NaN otherwise
    bool inactive_ok = true;
    bool budget_ok = true;
    int iterations = 0;

    // Filled by the spectral module.
    Matrix jacobian;
    std::vector<std::complex<double>> eigenvalues;
    StabilityTag stability = StabilityTag::unknown;

    bool interior() const { return static_cast<int>(active_set.size()) == N_star.size(); }
    double welfare() const { return allocation.W_star; }
    /// Residual, complementarity and budget conditions all hold.
    bool valid(double tolerance = 1e-8) const;
};

struct SolveOptions {
    int max_iterations = 200;
    double tolerance = 1e-11;       // on max |V_j| over the active set
    double fd_step = 1e-6;          // relative step for the Jacobian
    double entry_delta = 1e-6;      // complementarity probe population
    double max_log_step = 1.0;      // cap on each Newton step in log coordinates
    int max_halvings = 30;
};

/// Damped Newton on V(exp(x)) = 0 over the families with N0_j > 0. Throws
/// NoConvergence. A root that fails complementarity is returned with
/// inactive_ok == false.
EquilibriumRecord solve_from(const HiveConfig& config, const Vector& N0, const SolveOptions& options = {});

/// Re-solves under a modified config from a previous equilibrium. Throws
/// BranchLost if Newton fails or the active set changes.
EquilibriumRecord continue_equilibrium(const HiveConfig& config, const EquilibriumRecord& previous,
                                       const SolveOptions& options = {});

/// d V_j / d N^k by central differences on the given index set.
Matrix value_jacobian(const HiveConfig& config, const Vector& N, const std::vector<int>& index, double rel_step = 1e-6);

struct FindOptions {
    SolveOptions solve;
    double budget_fraction = 0.9;
    double dedup_tolerance = 1e-5;
    bool boundary_candidates = true;
    int workers = 0;
};

/// Deterministic start points: a Halton sequence with a seeded
/// Cranley-Patterson shift mapped onto budget_fraction * Omega.
std::vector<Vector> multistart_points(const HiveConfig& config, int starts, std::uint64_t seed,
                                      double budget_fraction = 0.9);

/// All distinct valid equilibria reached from the start set plus the
/// single-family-removed boundary candidates, sorted by W* descending.
std::vector<EquilibriumRecord> find_all(const HiveConfig& config, int starts, std::uint64_t seed,
                                        const FindOptions& options = {});

/// id, N_1..N_S, W_star, lambda_1..lambda_M, stability, max_abs_V
void write_equilibria_csv(std::ostream& out, const HiveConfig& config, const std::vector<EquilibriumRecord>& records);

} // namespace hive
