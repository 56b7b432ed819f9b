#pragma once

#include "hive/dynamics.hpp"
#include "hive/equilibrium.hpp"
#include "hive/model.hpp"

#include <complex>
#include <ostream>
#include <string>
#include <vector>

namespace hive {

using Complex = std::complex<double>;

struct StabilityClass {
    StabilityTag tag = StabilityTag::unknown;
    Complex leading;               // eigenvalue with the largest real part
    double spectral_abscissa = 0;  // max real part
};

/// Classifies an eigenvalue set with the 1e-8 zero band.
StabilityClass classify_spectrum(const std::vector<Complex>& eigenvalues, double zero_band = 1e-8);

struct Spectrum {
    Matrix J;                           // N*_j dV_j/dN^k on the active block
    std::vector<int> active;
    std::vector<Complex> eigenvalues;   // sorted by real part, then imaginary part, descending
    Eigen::MatrixXcd eigenvectors;      // columns match eigenvalues
    StabilityClass cls;
};

Spectrum spectrum_at(const HiveConfig& config, const Vector& N, const std::vector<int>& active, double rel_step = 1e-6);

/// Fills record.jacobian (S x S, zero outside the active block), eigenvalues
/// and stability. Throws FDFailure.
Spectrum jacobian_eigen(const HiveConfig& config, EquilibriumRecord& record, double rel_step = 1e-6);

struct GershgorinDisk {
    double center = 0.0;
    double radius = 0.0;
};

struct SufficientStabilityReport {
    bool eta_condition = false;  // eta_max < 1
    double lhs = 0.0;            // ||gamma||_inf * max_j N*_j
    double rhs = 0.0;            // min_j |dV_j/dN^j| N*_j
    bool holds = false;
    std::vector<GershgorinDisk> disks;
    bool disks_in_left_half_plane = false;
};

SufficientStabilityReport sufficient_stability(const HiveConfig& config, EquilibriumRecord& record);

struct BranchSample {
    double p = 0.0;
    Vector N;
    Complex lead;
};

struct HopfResult {
    std::string param_name;
    bool crossing_found = false;
    double p_critical = 0.0;
    double alpha_at_critical = 0.0;
    double alpha_slope = 0.0;
    double omega = 0.0;
    double period_estimate = 0.0;
    Vector N_critical;
    std::vector<BranchSample> branch;
    bool branch_lost = false;
    std::string note;
};

struct HopfOptions {
    SolveOptions solve;
    double alpha_tolerance = 1e-8;
    int max_bisections = 200;
    double slope_fraction = 0.01;
    int starts = 32;       // multistart at the range start when no N0 is given
    std::uint64_t seed = 0;
};

/// Natural continuation of an equilibrium over `steps` uniform samples of
/// [lo, hi], tracking the leading complex pair by eigenvector overlap and
/// bisecting the first sign change of its real part.
HopfResult hopf_scan(const HiveConfig& config, const ParamSelector& param, double lo, double hi, int steps,
                     const HopfOptions& options = {}, const Vector* N0 = nullptr);

/// p, N_1..N_S, re_lead, im_lead
void write_branch_csv(std::ostream& out, const HiveConfig& config, const HopfResult& result);

struct CycleInfo {
    bool found = false;
    double period = 0.0;
    Vector amplitude;  // per-family peak-to-peak over the last cycle
    double convergence_ratio = 0.0;
    int tracked_family = -1;
    std::string note;
    Trajectory trajectory;
};

struct CycleOptions {
    double periods = 20.0;      // horizon in predicted periods
    double min_horizon = 100.0;
    double dt = 0.0;            // 0: min(0.01, T / 400)
    double divergence_utilization = 5.0;
    double divergence_population = 1e3;
    bool keep_trajectory = false;
};

/// Integrates from N* (1 + perturbation * unstable direction) and measures
/// the saturated oscillation.
CycleInfo detect_limit_cycle(const HiveConfig& config, EquilibriumRecord& record, double perturbation,
                             const CycleOptions& options = {});

/// Runs detect_limit_cycle at p_critical + offset on the side where the
/// tracked pair has positive real part.
CycleInfo cycle_past_crossing(const HiveConfig& config, const ParamSelector& param, const HopfResult& hopf,
                              double offset, double perturbation = 0.01, const CycleOptions& options = {});

} // namespace hive
