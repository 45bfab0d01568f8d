#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "flrdt/capacity.hpp"
#include "flrdt/sets.hpp"

namespace flrdt {

// Random linear feasibility instance: find x in X with A x = a and B x <= b,
// where A, B are the first m1 and last m2 rows of G. The defaults a = 0,
// b = -kappa 1 give the perceptron constraint (-B) x >= kappa.
struct InstanceSample {
    Eigen::MatrixXd G;
    int m1 = 0;
    int m2 = 0;
    std::vector<double> a;
    std::vector<double> b;
    double kappa = 0.0;
    std::uint64_t seed = 0;

    int n() const { return int(G.cols()); }
};

InstanceSample sample_instance(int n, int m1, int m2, double kappa, std::uint64_t seed);

enum class Verdict { Feasible, Infeasible, Unknown };
const char* to_string(Verdict verdict);

struct FeasibilityReport {
    Verdict verdict = Verdict::Unknown;
    // Sphere: max over the unit ball of the smallest constraint slack + kappa
    // (the distance from 0 to the hull of the constraint rows).
    double margin = 0.0;
    std::vector<double> witness; // feasible x, when found
    std::vector<double> dual;    // convex weights certifying infeasibility (sphere)
    long long patterns_checked = 0;
};

FeasibilityReport feasibility_check(const InstanceSample& instance, XFamily x_family);

// Wolfe's minimum-norm-point algorithm over the convex hull of the columns of P.
struct MinNormPoint {
    Eigen::VectorXd point;
    Eigen::VectorXd weights; // one per column, convex
    int iterations = 0;
};
MinNormPoint min_norm_point(const Eigen::MatrixXd& P);

struct TransitionPoint {
    double alpha = 0.0;
    int m = 0;
    int feasible = 0;
    int trials = 0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    double frequency() const { return trials ? double(feasible) / trials : 0.0; }
};

struct TransitionResult {
    std::vector<TransitionPoint> points;
    std::optional<double> crossing;
    bool monotone = true;
};

std::pair<double, double> wilson_interval(int successes, int trials, double z = 1.959963984540054);

// Linear interpolation of the first adjacent pair straddling 1/2; throws NoCrossing.
double transition_crossing(const std::vector<TransitionPoint>& points);

TransitionResult empirical_transition(PerceptronFamily family, int n, const std::vector<double>& alpha_grid,
                                      int trials, std::uint64_t seed, double kappa = 0.0);

// min over X of max over Y of f_x + y^T G x + y^T g.
double exhaustive_primal(const std::vector<Eigen::VectorXd>& X, const std::vector<Eigen::VectorXd>& Y,
                         const Eigen::MatrixXd& G, const Eigen::VectorXd& g, const std::vector<double>& f = {});

void to_json(nlohmann::json& j, const TransitionPoint& point);
void to_json(nlohmann::json& j, const TransitionResult& result);

} // namespace flrdt
