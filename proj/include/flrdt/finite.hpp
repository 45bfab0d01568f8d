#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "flrdt/dual.hpp"

namespace flrdt {

// Tiny explicit instance of the interpolating functional psi(f, X, Y, p, q, m, beta, s, t).
// m has length r+2 with m[0]=1, m[r+1]=0; p, q as in LiftingParams.
struct FiniteInstance {
    std::vector<std::vector<double>> X; // l vectors in R^n
    std::vector<std::vector<double>> Y; // l vectors in R^m
    std::vector<double> f;              // per-x objective, empty means 0
    double beta = 1.0;
    int s = -1;
    double t = 0.0;
    std::vector<double> m{1.0, 1.0, 0.0};
    std::vector<double> p{1.0, 0.0, 0.0};
    std::vector<double> q{1.0, 0.0, 0.0};

    int r() const { return int(m.size()) - 2; }
    int n() const { return X.empty() ? 0 : int(X.front().size()); }
    int dim_y() const { return Y.empty() ? 0 : int(Y.front().size()); }
    void validate() const;
};

// mc_samples[i] is the sample count at level k=i+1 (k=1..r); the last entry is
// the number of outer (G, U_{r+1}) replicas.
DualEvaluation finite_psi(const FiniteInstance& instance, const std::vector<int>& mc_samples, std::uint64_t seed);
// Same functional with the a_k u^(4,k) term dropped.
DualEvaluation finite_psi_S(const FiniteInstance& instance, const std::vector<int>& mc_samples, std::uint64_t seed);

// beta -> infinity path: log-sum-exp over the l^2 pairs replaced by exact max.
DualEvaluation finite_psi_ground(const FiniteInstance& instance, const std::vector<int>& mc_samples,
                                 std::uint64_t seed, bool with_a_term = false);

// The Gaussian matrix drawn for outer replica `index` (shared by all finite_psi variants).
Eigen::MatrixXd finite_instance_G(const FiniteInstance& instance, std::uint64_t seed, std::uint64_t index);

void from_json(const nlohmann::json& j, FiniteInstance& instance);
void to_json(nlohmann::json& j, const FiniteInstance& instance);

} // namespace flrdt
