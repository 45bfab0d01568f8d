#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "flrdt/lifting.hpp"
#include "flrdt/sets.hpp"

namespace flrdt {

enum class ObjectiveKind { Zero, LinearOffsetOnly };

struct ModelSpec {
    XSet x_set;
    YSet y_set;
    ObjectiveKind objective = ObjectiveKind::Zero;
    double alpha = 1.0;
    int n_scale = 400;
    // Perceptron slices live on x = y = 1; variable-norm models search over both.
    bool fixed_norms = true;

    void validate() const;

    // X = sphere or hypercube corners, Y = nonnegative-orthant sphere with
    // offset +kappa (primal constraint Gx >= kappa).
    static ModelSpec perceptron(XFamily x_family, double alpha, double kappa, int n_scale = 400);

    // Same model with x_set.n = n and y_set resized to round(alpha n), keeping
    // the free/cone split ratio and per-block offsets.
    ModelSpec at_dimension(int n) const;
};

// Offsets must be constant on each Y block for the per-coordinate reduction.
struct BlockOffsets {
    double free = 0.0;
    double cone = 0.0;
    double free_fraction = 0.0;
};
BlockOffsets block_offsets(const YSet& set);

enum class EvalMethod { SeparableQuadrature, MonteCarlo, ClosedForm };

// value is on the E xi / sqrt(n) scale (see README, "Normalization").
struct DualEvaluation {
    double value = 0.0;
    double std_error = 0.0;
    EvalMethod method = EvalMethod::ClosedForm;
    long long samples_or_nodes = 0;
    std::uint64_t seed = 0;
};

// D = -min_x max_y [ y h^T x + x y^T u + y^T g ] with h = sum_{k>=2} cc_k h^(k),
// u = sum_{k>=2} b_k u^(2,k); radii taken from the sets.
double ground_state_D(const ModelSpec& model, const NoiseCoefficients& coeffs, const RandomFields& fields);

// samples_per_level[i] is the sample count at level k=i+2; the last entry is
// the number of outer (level r+1) replicas, which also drives std_error.
DualEvaluation psi_s_inf_mc(const ModelSpec& model, const LiftingParams& params, ExponentMode mode, int n,
                            const std::vector<int>& samples_per_level, std::uint64_t seed);

// Linearization scalars: [gamma_x, gamma_y] for Sphere-X, [gamma_y] for BinaryCorners.
int aux_count(const ModelSpec& model);
bool separable_supported(const ModelSpec& model);

// Fixed-order evaluation at radii (x, y); +inf outside the integrability domain.
double psi_s_inf_separable_value(const ModelSpec& model, const LiftingParams& params, ExponentMode mode,
                                 std::span<const double> aux, double x, double y, int quad_nodes);

// Adaptive: doubles the node count until the value moves by < 1e-8.
DualEvaluation psi_s_inf_separable(const ModelSpec& model, const LiftingParams& params, ExponentMode mode,
                                   std::span<const double> aux, int quad_nodes = 60);

// (x^2 y^2 / 2) sum_{k=2}^{r+1} (p_{k-1} q_{k-1} - p_k q_k) c_k; zero in the limit mode.
double lift_term(const LiftingParams& params, ExponentMode mode, double x, double y);

DualEvaluation psi_rd(const LiftingParams& params, ExponentMode mode, double x, double y,
                      const DualEvaluation& psi_s_inf);

struct EvalOptions {
    int quad_nodes = 60;
    bool adaptive = true;
    int mc_n = 400;
    std::vector<int> mc_samples{2000, 20000};
    std::uint64_t seed = 0;
};

// Separable path when supported, Monte Carlo otherwise.
DualEvaluation psi_rd(const ModelSpec& model, const LiftingParams& params, ExponentMode mode,
                      std::span<const double> aux, double x, double y, const EvalOptions& options = {});

const char* to_string(EvalMethod method);
void to_json(nlohmann::json& j, const DualEvaluation& eval);
void to_json(nlohmann::json& j, const ModelSpec& model);
void from_json(const nlohmann::json& j, ModelSpec& model);

} // namespace flrdt
