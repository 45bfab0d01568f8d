#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "flrdt/dual.hpp"

namespace flrdt {

// Which unknowns are free.
//   NonLifted:       aux only, exponent limit c_2 -> 0 (plain RDT)
//   PartiallyLifted: c_2 and aux with p = q = [1,1,0,0] pinned
//   FullyLifted:     p[2..r], q[2..r], c[2..r] and aux (p_1 = q_1 = 1 pinned)
enum class LiftConfig { NonLifted, PartiallyLifted, FullyLifted };

const char* to_string(LiftConfig config);
LiftConfig lift_config_from_string(const std::string& name);
ExponentMode exponent_mode(LiftConfig config);

struct SolverConfig {
    double tol = 1e-6;
    int max_iter = 500;
    double damping = 0.3;
    double fd_step = 1e-5;
    int quad_nodes = 60;
    double c_cap = 1e3;
    EvalOptions eval; // used when the separable path is unavailable
};

struct Start {
    LiftingParams params;
    std::vector<double> aux;
};

struct TraceEntry {
    std::vector<double> unknowns;
    double residual_norm = 0.0;
    double value = 0.0;
};

struct SaddleSolution {
    LiftingParams params;
    std::vector<double> aux;
    LiftConfig config = LiftConfig::FullyLifted;
    double value = 0.0;         // psi_rd at the returned point
    double residual_norm = 0.0; // max-abs residual
    int iterations = 0;
    std::vector<TraceEntry> trace;
    bool converged = false;
    // Exponent exceeded c_cap with psi_rd < 0: the stationary point sits at infinity.
    bool runaway = false;
    // An interior exponent collapsed below 1e-2 (limit-mode point in disguise).
    bool degenerate = false;
    int start_index = 0;
    std::string selection = "max-value among converged, else min residual";
};

// Names of the free unknowns in residual order.
std::vector<std::string> unknown_names(const ModelSpec& model, LiftConfig config, int r);

// Central finite-difference partials of psi_rd with respect to the log of each
// free unknown (u * dpsi/du), step fd_step in log space (relative step in u).
std::vector<double> residuals(const ModelSpec& model, LiftConfig config, const LiftingParams& params,
                              std::span<const double> aux, double x, double y, const SolverConfig& cfg = {});

// psi_rd at fixed order (no adaptive node doubling).
double stationary_objective(const ModelSpec& model, LiftConfig config, const LiftingParams& params,
                            std::span<const double> aux, double x, double y, const SolverConfig& cfg);

SaddleSolution solve_stationary(const ModelSpec& model, LiftConfig config, const std::vector<Start>& starts,
                                double x, double y, const SolverConfig& cfg = {});

// Newton in log(aux) on the aux residuals with params held fixed (e.g. a pinned c_2).
struct AuxSolution {
    std::vector<double> aux;
    double residual_norm = 0.0;
    bool converged = false;
};
AuxSolution solve_aux(const ModelSpec& model, LiftConfig config, const LiftingParams& params,
                      std::vector<double> aux, double x, double y, const SolverConfig& cfg = {});

struct NormSearchResult {
    double x = 1.0;
    double y = 1.0;
    double value = 0.0;
    SaddleSolution solution;
};

// Generic nested golden-section search: min over x of max over y of value(x, y),
// log-scaled bracket. Throws BracketFailure when an optimum sits on the bracket edge.
NormSearchResult minmax_norms(const std::function<double(double, double)>& value, double lo = 1e-3,
                              double hi = 1e3);

// Norms are multipliers of the set radii; fixed-norm models return (1, 1) directly.
NormSearchResult minmax_norms(const ModelSpec& model, LiftConfig config, const std::vector<Start>& starts,
                              const SolverConfig& cfg = {});

void to_json(nlohmann::json& j, const SaddleSolution& solution);
void to_json(nlohmann::json& j, const SolverConfig& cfg);
void from_json(const nlohmann::json& j, SolverConfig& cfg);

} // namespace flrdt
