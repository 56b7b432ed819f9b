#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hive {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// How the marginal social value of an agent is evaluated.
//
//  gradient   : V_j = dW*/dN^j, the full envelope derivative, including the
//               spillover that family j exerts on every other family's output.
//  own_effect : only the own-output channel w_j u'(Y_j) dY_j/dN^j - c_j.
//
// The two agree whenever the externality matrix is zero.
enum class ValueRule { gradient, own_effect };

std::string to_string(ValueRule rule);

struct HiveConfig {
    std::vector<std::string> family_names;
    std::vector<std::string> resource_names;

    Vector A;      // total factor productivity, S
    Vector c;      // maintenance cost per agent, S
    Vector eta;    // within-family returns to scale, S
    Vector rho;    // CES elasticity of substitution, S
    Matrix alpha;  // factor shares, S x M, rows sum to one
    Matrix gamma;  // externality exponents, S x S, zero diagonal
    Vector w;      // preference weights, S, on the simplex
    Vector R;      // resource endowments, M
    double B = 1.0;
    double sigma = 1.0;

    ValueRule value_rule = ValueRule::gradient;
    std::optional<Vector> initial_population;
    // Off-diagonal gamma entries (0-based j,k) that uniform-externality sweeps leave alone.
    std::vector<std::pair<int, int>> gamma_fixed;

    int families() const { return static_cast<int>(A.size()); }
    int resources() const { return static_cast<int>(R.size()); }
    bool log_utility() const { return sigma == 1.0; }
};

struct ValidationReport {
    bool ok = true;
    double externality_norm = 0.0;
    double weak_ext_bound = 0.0;
    bool weak_ext_applicable = true;  // false when eta_max >= 1
    bool weak_ext_satisfied = false;
    double eta_max = 0.0;
    bool budget_feasible_nonempty = true;
    std::vector<std::string> messages;
};

struct ParseOptions {
    // Renormalize w and the rows of alpha instead of rejecting them.
    bool renormalize = false;
};

/// Parses a JSON configuration document. Throws MalformedDocument,
/// DimensionMismatch or DomainViolation.
HiveConfig parse_config(const std::string& document, const ParseOptions& options = {});
HiveConfig load_config(const std::string& path, const ParseOptions& options = {});
std::string serialize_config(const HiveConfig& config);

/// Throws DimensionMismatch / DomainViolation naming the offending field.
void check_invariants(const HiveConfig& config);

ValidationReport validate(const HiveConfig& config);

double externality_norm(const HiveConfig& config);
double eta_max(const HiveConfig& config);

double budget_cost(const HiveConfig& config, const Vector& N);
double budget_utilization(const HiveConfig& config, const Vector& N);
/// Centroid of the feasible population set: N^j = B / (c_j (S + 1)).
Vector omega_centroid(const HiveConfig& config);
Vector default_start(const HiveConfig& config);

// A scalar model entry addressable from the command line and the sweep
// layer. Text form uses 1-based indices: "gamma[2,1]", "eta[1]", "w[4]",
// "R[1]", "A[2]", "c[3]", "B", "sigma", and "gamma" for the uniform
// off-diagonal externality.
struct ParamSelector {
    enum class Kind { gamma_entry, gamma_uniform, eta, w, R, A, c, B, sigma };
    Kind kind = Kind::B;
    int i = 0;  // 0-based
    int j = 0;

    static ParamSelector parse(const std::string& text);
    std::string to_string() const;

    double get(const HiveConfig& config) const;
    /// Returns a copy with the entry set. Preference weights are
    /// renormalized proportionally: w_k <- w_k (1 - w_i') / (1 - w_i).
    HiveConfig apply(const HiveConfig& config, double value) const;
};

} // namespace hive
