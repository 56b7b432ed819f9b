#pragma once

#include "hive/equilibrium.hpp"
#include "hive/model.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace hive {

struct ElasticityMatrix {
    enum class Kind { SS, RB };
    Kind kind = Kind::SS;
    Matrix values;  // SS: M x S (d ln lambda_m / d ln w_j); RB: S x M (d ln N_j / d ln R_m)
    Matrix plus;    // one-sided estimates at +delta
    Matrix minus;   // one-sided estimates at -delta
    double step = 0.0;
    std::vector<int> intensity_argmax;  // per column: SS most intensive resource of family j, RB most intensive family of resource m
    std::vector<char> lost;             // per column: continuation lost, entries NaN
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::string convention;

    // RB only, per resource column.
    std::vector<char> intensive_magnified;  // elasticity of the theta-most-intensive family > 1
    std::vector<char> some_negative;
};

struct StaticsOptions {
    SolveOptions solve;
    int substeps = 4;  // continuation increments from the base point to +-delta
};

/// Stolper-Samuelson elasticities with proportional renormalization of the other weights.
ElasticityMatrix stolper_samuelson(const HiveConfig& config, const EquilibriumRecord& record, double delta = 1e-2,
                                   const StaticsOptions& options = {});

/// Rybczynski elasticities of equilibrium populations with respect to endowments.
ElasticityMatrix rybczynski(const HiveConfig& config, const EquilibriumRecord& record, double delta = 1e-2,
                            const StaticsOptions& options = {});

/// -(D_N V)^-1 D_R V from finite-difference blocks, as elasticities (S x M).
Matrix rybczynski_implicit(const HiveConfig& config, const EquilibriumRecord& record, double rel_step = 1e-6);

struct ParameterElasticity {
    Vector N;       // d ln N* / d ln p
    Vector lambda;  // d ln lambda* / d ln p
    bool lost = false;
};

/// Central-difference elasticities of N* and lambda* with respect to one parameter.
ParameterElasticity parameter_elasticity(const HiveConfig& config, const EquilibriumRecord& record,
                                         const ParamSelector& param, double delta = 1e-2,
                                         const StaticsOptions& options = {});

struct ShockResponse {
    EquilibriumRecord record;
    Vector N_change;       // relative change of N* per family
    Vector lambda_change;  // relative change of lambda* per resource
    bool lost = false;
    std::string note;
};

/// Moves a parameter from its current value to `value` in `substeps`
/// continuation steps and reports the relative changes of N* and lambda*.
ShockResponse continue_shock(const HiveConfig& config, const EquilibriumRecord& record, const ParamSelector& param,
                             double value, int substeps = 20, const SolveOptions& options = {});

/// Labeled matrix with a trailing `flags` column.
void write_elasticity_csv(std::ostream& out, const ElasticityMatrix& matrix);

} // namespace hive
