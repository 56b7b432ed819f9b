#pragma once

#include "hive/equilibrium.hpp"
#include "hive/model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hive {

enum class Regime { unique_stable, multiple_stable, cycles, instability };

std::string to_string(Regime regime);

struct RegimeCell {
    double gamma_value = 0.0;
    double eta_value = 0.0;
    Regime classification = Regime::instability;
    int n_interior = 0;
    int n_stable = 0;
    std::optional<double> cycle_period;
    bool sufficient_condition = false;  // the sufficient stability test holds at a unique interior equilibrium
    std::vector<std::string> notes;
};

struct ProbeOptions {
    double horizon = 200.0;
    double dt = 0.02;
    double divergence_utilization = 5.0;
    double divergence_population = 1e3;
};

struct ClassifyOptions {
    FindOptions find;
    ProbeOptions probe;
    double cycle_perturbation = 0.05;
};

/// Decision procedure: multiple-stable, unique-stable, cycles, instability (in that order).
RegimeCell classify_cell(const HiveConfig& config, int starts, std::uint64_t seed, const ClassifyOptions& options = {});

struct Axis {
    ParamSelector param;
    double lo = 0.0;
    double hi = 0.0;
    int resolution = 2;

    double value(int i) const;
};

struct FrontierEstimate {
    std::optional<double> axis1;  // median location where rows leave unique-stable along axis 1
    std::optional<double> axis2;
};

struct RegimeGrid {
    Axis axis1;
    Axis axis2;
    std::vector<RegimeCell> cells;  // row-major: index = i1 * resolution2 + i2
    FrontierEstimate frontier;

    const RegimeCell& at(int i1, int i2) const { return cells[static_cast<std::size_t>(i1 * axis2.resolution + i2)]; }
};

using ProgressFn = std::function<void(int done, int total)>;

RegimeGrid sweep(const HiveConfig& base, const Axis& axis1, const Axis& axis2, int starts, std::uint64_t seed,
                 const ClassifyOptions& options = {}, const ProgressFn& progress = {});

FrontierEstimate estimate_frontier(const RegimeGrid& grid);

/// gamma, eta, classification, n_interior, n_stable, cycle_period
void write_regime_csv(std::ostream& out, const RegimeGrid& grid);

} // namespace hive
