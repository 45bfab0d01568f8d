#include <cmath>

#include <gtest/gtest.h>

#include "flrdt/dual.hpp"
#include "flrdt/error.hpp"

using namespace flrdt;

namespace {

const LiftingParams kSingleLevel{1, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}};

RandomFields example_fields() {
    RandomFields f;
    f.u4 = {0.0, 0.0, 0.0};
    f.h = {{9.0, 9.0}, {3.0, 4.0}, {0.0, 0.0}};
    f.u2 = {{9.0, 9.0}, {1.0, -1.0}, {0.0, 0.0}};
    return f;
}

double combined_z(const DualEvaluation& a, const DualEvaluation& b) {
    return (a.value - b.value) / std::hypot(a.std_error, b.std_error);
}

} // namespace

TEST(GroundStateD, ZeroCoefficientsGiveZero) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 1.0, 0.0, 5);
    const auto fields = RandomFields::sample(1, 5, 5, 1);
    EXPECT_EQ(ground_state_D(model, noise_coefficients(kSingleLevel), fields), 0.0);
}

TEST(GroundStateD, SphereExample) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 1.0, 0.0, 2);
    const auto coeffs = noise_coefficients(LiftingParams::partially_lifted(1.0));
    // -(min_x h.x + max_y u.y) = -(-5 + 1)
    EXPECT_DOUBLE_EQ(ground_state_D(model, coeffs, example_fields()), 4.0);
}

TEST(GroundStateD, BinaryExample) {
    const auto model = ModelSpec::perceptron(XFamily::BinaryCorners, 1.0, 0.0, 2);
    const auto coeffs = noise_coefficients(LiftingParams::partially_lifted(1.0));
    EXPECT_NEAR(ground_state_D(model, coeffs, example_fields()), 7.0 / std::sqrt(2.0) - 1.0, 1e-14);
}

TEST(GroundStateD, DimensionMismatch) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 1.0, 0.0, 3);
    const auto coeffs = noise_coefficients(LiftingParams::partially_lifted(1.0));
    EXPECT_THROW(ground_state_D(model, coeffs, example_fields()), Error);
}

TEST(PsiSInfMc, ZeroCoefficientsGiveZero) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 1.0, 0.0);
    const auto eval = psi_s_inf_mc(model, kSingleLevel, ExponentMode::Lifted, 50, {20}, 3);
    EXPECT_EQ(eval.value, 0.0);
    EXPECT_EQ(eval.std_error, 0.0);
}

TEST(PsiSInfMc, LimitModeMatchesGaussianMoments) {
    // E ||h|| ~ sqrt(n), E ||u_+|| ~ sqrt(m/2): value ~ 1 - sqrt(alpha/2).
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 1.0, 0.0);
    const auto eval = psi_s_inf_mc(model, LiftingParams::non_lifted(), ExponentMode::NonLiftedLimit, 400, {1, 400}, 5);
    EXPECT_NEAR(eval.value, 1.0 - std::sqrt(0.5), 0.01);
    EXPECT_GT(eval.std_error, 0.0);
    EXPECT_EQ(eval.method, EvalMethod::MonteCarlo);
}

TEST(PsiSInfMc, DeterministicAndSeedReplicable) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 2.0, 0.0);
    const auto params = LiftingParams::partially_lifted(1.0);
    const auto a = psi_s_inf_mc(model, params, ExponentMode::Lifted, 200, {40, 60}, 1);
    const auto b = psi_s_inf_mc(model, params, ExponentMode::Lifted, 200, {40, 60}, 1);
    const auto c = psi_s_inf_mc(model, params, ExponentMode::Lifted, 200, {40, 60}, 2);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_NE(a.value, c.value);
    EXPECT_LE(std::abs(combined_z(a, c)), 3.0);
}

TEST(PsiSInfMc, JensenMonotoneInExponent) {
    // Common random numbers: (1/c) log E e^{cD} is nondecreasing in c sample by sample.
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 1.0, 0.0);
    double prev = -1e300;
    for (double c : {0.01, 0.1, 0.5, 1.0}) {
        const auto eval =
            psi_s_inf_mc(model, LiftingParams::partially_lifted(c), ExponentMode::Lifted, 100, {50, 20}, 9);
        EXPECT_GE(eval.value, prev - 1e-12) << "c=" << c;
        prev = eval.value;
    }
}

TEST(PsiSInfMc, RejectsBadBudgets) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 1.0, 0.0);
    const auto params = LiftingParams::partially_lifted(1.0);
    EXPECT_THROW(psi_s_inf_mc(model, params, ExponentMode::Lifted, 100, {10}, 1), Error);
    EXPECT_THROW(psi_s_inf_mc(model, params, ExponentMode::Lifted, 100, {10, 1}, 1), Error);
    EXPECT_THROW(psi_s_inf_mc(model, params, ExponentMode::Lifted, 1, {10, 10}, 1), Error);
}

TEST(PsiSInfSeparable, NonLiftedSphereClosedForm) {
    for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
        const auto model = ModelSpec::perceptron(XFamily::Sphere, alpha, 0.0);
        const std::vector<double> aux{1.0, std::sqrt(alpha / 2.0)};
        const auto eval = psi_s_inf_separable(model, LiftingParams::non_lifted(), ExponentMode::NonLiftedLimit, aux);
        EXPECT_NEAR(eval.value, 1.0 - std::sqrt(alpha / 2.0), 1e-10) << "alpha=" << alpha;
        EXPECT_EQ(eval.std_error, 0.0);
    }
}

TEST(PsiSInfSeparable, LinearizationGapHasFixedSign) {
    // sqrt(A) <= gamma/2 + A/(2 gamma) with equality at gamma = sqrt(A): the x-side
    // term only grows away from its stationary scalar, the y-side term only shrinks.
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 1.5, 0.0);
    const auto params = LiftingParams::non_lifted();
    const double gy = std::sqrt(0.75);
    const auto value = [&](double gx, double g) {
        const std::vector<double> aux{gx, g};
        return psi_s_inf_separable_value(model, params, ExponentMode::NonLiftedLimit, aux, 1.0, 1.0, 60);
    };
    const double at = value(1.0, gy);
    for (double f : {0.5, 0.9, 1.1, 2.0}) {
        const double gap_x = value(f, gy) - at;
        const double gap_y = value(1.0, f * gy) - at;
        EXPECT_NEAR(gap_x, 0.5 * f + 0.5 / f - 1.0, 1e-12);
        EXPECT_GT(gap_x, 0.0);
        EXPECT_LT(gap_y, 0.0);
    }
}

TEST(PsiSInfSeparable, LimitOfSmallExponent) {
    const auto model = ModelSpec::perceptron(XFamily::BinaryCorners, 0.8, 0.0);
    const std::vector<double> aux{std::sqrt(0.4)};
    const double limit =
        psi_s_inf_separable(model, LiftingParams::non_lifted(), ExponentMode::NonLiftedLimit, aux).value;
    const double small =
        psi_s_inf_separable(model, LiftingParams::partially_lifted(1e-4), ExponentMode::Lifted, aux).value;
    EXPECT_NEAR(small, limit, 1e-3 * std::abs(limit));
}

TEST(PsiSInfSeparable, RejectsNonpositiveAux) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 1.0, 0.0);
    const std::vector<double> aux{1.0, 0.0};
    try {
        psi_s_inf_separable(model, LiftingParams::partially_lifted(1.0), ExponentMode::Lifted, aux);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonpositiveAux);
        EXPECT_EQ(e.index(), 1);
    }
}

TEST(PsiRd, LiftTermStub) {
    const DualEvaluation zero;
    const auto eval = psi_rd(LiftingParams::partially_lifted(1.0), ExponentMode::Lifted, 1.0, 1.0, zero);
    EXPECT_DOUBLE_EQ(eval.value, 0.5);
    EXPECT_DOUBLE_EQ(lift_term(LiftingParams::partially_lifted(0.7), ExponentMode::Lifted, 2.0, 1.0), 2.0 * 0.7);
    EXPECT_EQ(lift_term(LiftingParams::non_lifted(), ExponentMode::NonLiftedLimit, 1.0, 1.0), 0.0);
}

TEST(PsiRd, NonLiftedIsMinusExpectedD) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 2.5, 0.0);
    const std::vector<double> aux{1.0, std::sqrt(1.25)};
    const auto eval = psi_rd(model, LiftingParams::non_lifted(), ExponentMode::NonLiftedLimit, aux, 1.0, 1.0);
    EXPECT_NEAR(eval.value, std::sqrt(1.25) - 1.0, 1e-10);
}

TEST(ModelSpec, AtDimensionKeepsBlocks) {
    const YSet mixed{YFamily::MixedCone, 2, 6, 1.0, {0.0, 0.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0}};
    ModelSpec model;
    model.x_set = XSet{XFamily::Sphere, 8, 1.0};
    model.y_set = mixed;
    model.alpha = 1.0;
    const auto big = model.at_dimension(40);
    EXPECT_EQ(big.y_set.m(), 40);
    EXPECT_EQ(big.y_set.m1, 10);
    EXPECT_EQ(big.y_set.g[9], 0.0);
    EXPECT_EQ(big.y_set.g[10], -1.0);
    const auto off = block_offsets(big.y_set);
    EXPECT_EQ(off.cone, -1.0);
    EXPECT_DOUBLE_EQ(off.free_fraction, 0.25);
}

TEST(ModelSpec, NonConstantOffsetIsNotSeparable) {
    auto model = ModelSpec::perceptron(XFamily::Sphere, 1.0, 0.0, 4);
    model.y_set.g = {0.0, 0.1, 0.0, 0.0};
    EXPECT_FALSE(separable_supported(model));
    EXPECT_THROW(block_offsets(model.y_set), Error);
}

TEST(ModelSpec, JsonRoundTrip) {
    const auto model = ModelSpec::perceptron(XFamily::BinaryCorners, 0.9, -0.25, 100);
    const auto back = nlohmann::json(model).get<ModelSpec>();
    EXPECT_EQ(back.alpha, 0.9);
    EXPECT_EQ(back.x_set.family, XFamily::BinaryCorners);
    EXPECT_EQ(back.y_set.g, model.y_set.g);
    EXPECT_EQ(back.n_scale, 100);
}
