#pragma once

#include "hive/inner.hpp"
#include "hive/model.hpp"

#include <string>
#include <vector>

namespace hive {

// Marginal social values together with the allocation they were computed from.
struct ValueEvaluation {
    Vector V;
    std::vector<char> sentinel;  // V_j is a boundary limit (N^j == 0), not a derivative
    Allocation alloc;
};

// Boundary convention at N^j == 0: the own-output term of V_j scales like
// (N^j)^e with e = eta_j (1 - sigma) / sigma - 1. For e < 0 the value is the
// +infinity entry incentive; for e > 0 it is -c_j; for e == 0 the finite
// limit is probed numerically.
ValueEvaluation evaluate_values(const HiveConfig& config, const Vector& N, const InnerOptions& options = {});
Vector marginal_value(const HiveConfig& config, const Vector& N);

/// Phi(N) = V(N) * N with Phi_j = 0 on inactive families.
Vector selection_field(const HiveConfig& config, const Vector& N);

struct PopulationState {
    Vector N;
    double t = 0.0;
};

struct TrajectoryEvent {
    double t = 0.0;
    std::string label;
};

struct Trajectory {
    std::vector<PopulationState> states;
    std::vector<double> welfare;
    std::vector<Vector> values;
    std::vector<double> budget_utilization;
    std::vector<TrajectoryEvent> events;
    bool converged = false;
    bool aborted = false;

    std::size_t size() const { return states.size(); }
    const PopulationState& back() const { return states.back(); }
};

struct IntegrateOptions {
    double dt = 1e-2;
    double horizon = 10.0;
    bool cap_mode = false;
    double t0 = 0.0;
    bool early_stop = true;
    int record_every = 1;
    double extinction_threshold = 1e-9;
    double converged_tolerance = 1e-10;
    int converged_steps = 10;
    std::vector<int> frozen;  // families already extinct (carried across calls)
};

/// Classical fixed-step RK4 on dN/dt = V(N) N.
Trajectory integrate(const HiveConfig& config, const Vector& N0, const IntegrateOptions& options = {});

/// Euclidean projection onto {N >= lower, c . N <= B}.
Vector project_onto_budget(const Vector& y, const Vector& c, double B, double lower = 0.0);

struct LyapunovReport {
    double max_mismatch = 0.0;  // max_k |dW*/dt - sum_j V_j^2 N^j|
    double max_slope = 0.0;
    double max_rhs = 0.0;
    bool non_decreasing = true;
    double worst_decrease = 0.0;  // most negative W*(t_{k+1}) - W*(t_k)
    bool weak_ext_regime = false;
    bool defect = false;  // decrease in the weak-externality regime
    std::vector<double> slope;
    std::vector<double> rhs;
};

LyapunovReport lyapunov_check(const HiveConfig& config, const Trajectory& traj, double decrease_tolerance = 1e-9);

struct FixedPointResult {
    Vector N;
    int iterations = 0;
    double last_step = 0.0;
    bool converged = false;  // false: iteration cap hit, N is the last iterate
};

FixedPointResult fixed_point_iterate(const HiveConfig& config, double eps, const Vector& N0,
                                     int max_iterations = 100000, double tolerance = 1e-10);

} // namespace hive
