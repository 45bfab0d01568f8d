#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "flrdt/saddle.hpp"

namespace flrdt {

enum class PerceptronFamily { Spherical, Binary };

const char* to_string(PerceptronFamily family);
PerceptronFamily perceptron_family_from_string(const std::string& name);
ModelSpec perceptron_model(PerceptronFamily family, double alpha, double kappa);

struct CapacityConfig {
    LiftConfig lift = LiftConfig::FullyLifted;
    int r = 2;
    SolverConfig solver;
    double tol_alpha = 1e-3;
    int max_bisections = 60;
};

// One sign test. value > 0 <=> predicted infeasible (E xi_feas / sqrt(n) > 0).
struct AlphaEvaluation {
    double alpha = 0.0;
    DualEvaluation value;
    // Configuration whose candidate set the returned value (may be a lower one).
    LiftConfig source = LiftConfig::NonLifted;
    bool flagged = false;
    std::string note;
    std::optional<SaddleSolution> solution; // winning stationary point
    // Every converged stationary point that entered the selection.
    std::vector<SaddleSolution> candidates;
};

// The stationary psi_rd for the requested configuration, maximized together
// with the values of all lower configurations (lifting never loosens the bound).
AlphaEvaluation dual_value_at_alpha(PerceptronFamily family, double kappa, double alpha, const CapacityConfig& cfg,
                                    const std::vector<Start>& warm = {});

struct CapacityResult {
    double alpha_star = std::numeric_limits<double>::quiet_NaN();
    double lo = 0.0;
    double hi = 0.0;
    int r = 2;
    LiftConfig lift = LiftConfig::FullyLifted;
    std::string model;
    double kappa = 0.0;
    std::string method = "SeparableQuadrature";
    std::vector<AlphaEvaluation> trace;
    bool monotone = true;
    bool flagged = false;
    std::string note;
    std::optional<double> oracle_alpha;
};

using AlphaEvaluator = std::function<AlphaEvaluation(double alpha, int escalation)>;

// Bisection on the sign of eval; value <= 0 at lo, > 0 at hi. Sign tests with
// |value| <= 3 std_error escalate once, then flag NoisyBoundary.
CapacityResult capacity_bisect(const AlphaEvaluator& eval, double lo, double hi, double tol_alpha = 1e-3,
                               int max_bisections = 60);

CapacityResult capacity_bisect(PerceptronFamily family, double kappa, double lo, double hi, const CapacityConfig& cfg);

// Expands geometrically from `start` until the sign changes; returns (lo, hi).
std::pair<double, double> find_bracket(const AlphaEvaluator& eval, double start, double factor = 1.5,
                                       int max_steps = 40);

// One capacity per kappa, each warm-started from its neighbour; failures become
// flagged entries instead of aborting the sweep.
std::vector<CapacityResult> capacity_curve(PerceptronFamily family, const std::vector<double>& kappa_grid,
                                           const CapacityConfig& cfg);

void to_json(nlohmann::json& j, const AlphaEvaluation& eval);
void to_json(nlohmann::json& j, const CapacityResult& result);

} // namespace flrdt
