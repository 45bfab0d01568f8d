#include <cmath>

#include <gtest/gtest.h>

#include "flrdt/error.hpp"
#include "flrdt/saddle.hpp"

using namespace flrdt;

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// psi_rd with aux re-solved at a pinned c2: its derivative in c2 equals the
// partial derivative at stationary aux, so its extremum locates the c2 root.
// Every call starts from the same aux so the profile stays on one branch.
double profile(const ModelSpec& model, double c2, const std::vector<double>& aux0) {
    const auto params = LiftingParams::partially_lifted(c2);
    const auto sol = solve_aux(model, LiftConfig::PartiallyLifted, params, aux0, 1.0, 1.0);
    EXPECT_TRUE(sol.converged);
    return stationary_objective(model, LiftConfig::PartiallyLifted, params, sol.aux, 1.0, 1.0, SolverConfig{});
}

std::vector<Start> partial_starts(const std::vector<double>& aux) {
    std::vector<Start> out;
    for (double c2 : {0.3, 1.0, 3.0, 10.0}) out.push_back({LiftingParams::partially_lifted(c2), aux});
    return out;
}

} // namespace

TEST(Residuals, UnknownOrder) {
    const auto sphere = ModelSpec::perceptron(XFamily::Sphere, 1.0, 0.0);
    const auto binary = ModelSpec::perceptron(XFamily::BinaryCorners, 1.0, 0.0);
    EXPECT_EQ(unknown_names(sphere, LiftConfig::PartiallyLifted, 2),
              (std::vector<std::string>{"c2", "gamma_x", "gamma_y"}));
    EXPECT_EQ(unknown_names(binary, LiftConfig::FullyLifted, 3),
              (std::vector<std::string>{"p2", "p3", "q2", "q3", "c2", "c3", "gamma_y"}));
    EXPECT_EQ(unknown_names(binary, LiftConfig::NonLifted, 2), (std::vector<std::string>{"gamma_y"}));
}

TEST(Residuals, VanishAtClosedFormStationaryAux) {
    for (double alpha : {1.0, 2.0, 3.0}) {
        const auto model = ModelSpec::perceptron(XFamily::Sphere, alpha, 0.0);
        const std::vector<double> aux{1.0, std::sqrt(alpha / 2.0)};
        const auto res = residuals(model, LiftConfig::NonLifted, LiftingParams::non_lifted(), aux, 1.0, 1.0);
        ASSERT_EQ(res.size(), 2u);
        EXPECT_LE(max_abs(res), 1e-6) << "alpha=" << alpha;
    }
}

TEST(Residuals, BitIdenticalReruns) {
    const auto model = ModelSpec::perceptron(XFamily::BinaryCorners, 0.9, 0.0);
    const LiftingParams params{2, {1.0, 1.0, 0.5, 0.0}, {1.0, 1.0, 0.02, 0.0}, {1.0, 1.0, 10.0, 0.0}};
    const std::vector<double> aux{0.01};
    const auto a = residuals(model, LiftConfig::FullyLifted, params, aux, 1.0, 1.0);
    const auto b = residuals(model, LiftConfig::FullyLifted, params, aux, 1.0, 1.0);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 4u);
}

TEST(Residuals, RejectsNonMonotoneParams) {
    const auto model = ModelSpec::perceptron(XFamily::BinaryCorners, 0.9, 0.0);
    const LiftingParams bad{3, {1.0, 1.0, 0.2, 0.5, 0.0}, {1.0, 1.0, 0.1, 0.05, 0.0}, {1.0, 1.0, 2.0, 4.0, 0.0}};
    const std::vector<double> aux{0.01};
    try {
        residuals(model, LiftConfig::FullyLifted, bad, aux, 1.0, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MonotonicityViolation);
        EXPECT_EQ(e.index(), 3);
    }
    EXPECT_THROW(solve_stationary(model, LiftConfig::FullyLifted, {{bad, aux}}, 1.0, 1.0), Error);
}

TEST(SolveStationary, PartiallyLiftedBinaryMatchesProfileScan) {
    const auto model = ModelSpec::perceptron(XFamily::BinaryCorners, 1.5, 0.0);
    const std::vector<double> aux0{std::sqrt(0.75)};
    const auto sol = solve_stationary(model, LiftConfig::PartiallyLifted, partial_starts(aux0), 1.0, 1.0);
    ASSERT_TRUE(sol.converged);
    EXPECT_FALSE(sol.degenerate);
    EXPECT_LT(sol.iterations, 200);
    EXPECT_LE(sol.residual_norm, 1e-6);
    EXPECT_FALSE(sol.trace.empty());
    // p, q stay pinned.
    EXPECT_EQ(sol.params.p, (std::vector<double>{1.0, 1.0, 0.0, 0.0}));
    EXPECT_EQ(sol.params.q, sol.params.p);

    // Golden-section maximum of the profile over log c2.
    const std::vector<double>& aux = aux0;
    double a = std::log(0.3), b = std::log(10.0);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    while (b - a > 1e-6) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (profile(model, std::exp(c), aux) > profile(model, std::exp(d), aux)) b = d;
        else a = c;
    }
    const double c2 = std::exp(0.5 * (a + b));
    EXPECT_NEAR(sol.params.c[2], c2, 1e-2 * c2);
    EXPECT_NEAR(sol.value, profile(model, c2, aux), 1e-8);
}

TEST(SolveStationary, PartiallyLiftedSphereIsProfileExtremum) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 1.5, -0.5);
    const auto nl = solve_stationary(model, LiftConfig::NonLifted, {{LiftingParams::non_lifted(), {1.0, 1.0}}}, 1.0, 1.0);
    ASSERT_TRUE(nl.converged);
    const auto sol = solve_stationary(model, LiftConfig::PartiallyLifted, partial_starts(nl.aux), 1.0, 1.0);
    ASSERT_TRUE(sol.converged);
    const double c2 = sol.params.c[2];
    const std::vector<double>& aux = nl.aux;
    const double mid = profile(model, c2, aux);
    const double lo = profile(model, 0.9 * c2, aux), hi = profile(model, 1.1 * c2, aux);
    EXPECT_EQ((lo > mid), (hi > mid)) << lo << " " << mid << " " << hi;
}

TEST(SolveStationary, StationaryInitBarelyMoves) {
    const auto model = ModelSpec::perceptron(XFamily::BinaryCorners, 1.5, 0.0);
    const auto first = solve_stationary(model, LiftConfig::PartiallyLifted, partial_starts({std::sqrt(0.75)}), 1.0, 1.0);
    ASSERT_TRUE(first.converged);
    const auto again = solve_stationary(model, LiftConfig::PartiallyLifted, {{first.params, first.aux}}, 1.0, 1.0);
    EXPECT_TRUE(again.converged);
    EXPECT_LE(again.iterations, 1);
    EXPECT_NEAR(again.params.c[2], first.params.c[2], 1e-6 * first.params.c[2]);
}

TEST(SolveStationary, RunawayIsReportedNotConverged) {
    // Below the first-moment bound the partially lifted optimum sits at c2 -> infinity.
    const auto model = ModelSpec::perceptron(XFamily::BinaryCorners, 0.83, 0.0);
    const auto sol = solve_stationary(model, LiftConfig::PartiallyLifted, partial_starts({0.644}), 1.0, 1.0);
    EXPECT_TRUE(sol.runaway);
    EXPECT_FALSE(sol.converged);
    EXPECT_LT(std::abs(sol.value), 1e-3);
}

TEST(SolveStationary, ConvergedSolutionsMeetTolerance) {
    for (double alpha : {0.5, 1.0, 2.0}) {
        const auto model = ModelSpec::perceptron(XFamily::Sphere, alpha, -0.5);
        const auto sol =
            solve_stationary(model, LiftConfig::NonLifted, {{LiftingParams::non_lifted(), {1.0, 1.0}}}, 1.0, 1.0);
        ASSERT_TRUE(sol.converged);
        const auto res = residuals(model, LiftConfig::NonLifted, sol.params, sol.aux, 1.0, 1.0);
        EXPECT_LE(max_abs(res), 1e-6);
    }
}

TEST(SolveStationary, DeterministicTrace) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 1.5, -0.5);
    const std::vector<Start> starts{{LiftingParams::partially_lifted(0.3), {1.0, 0.6}}};
    const auto a = solve_stationary(model, LiftConfig::PartiallyLifted, starts, 1.0, 1.0);
    const auto b = solve_stationary(model, LiftConfig::PartiallyLifted, starts, 1.0, 1.0);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        EXPECT_EQ(a.trace[i].unknowns, b.trace[i].unknowns);
        EXPECT_EQ(a.trace[i].value, b.trace[i].value);
    }
    EXPECT_EQ(nlohmann::json(a).dump(), nlohmann::json(b).dump());
}

TEST(SolveStationary, AuxOnlySolve) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 2.0, 0.0);
    const auto sol = solve_aux(model, LiftConfig::NonLifted, LiftingParams::non_lifted(), {3.0, 0.2}, 1.0, 1.0);
    ASSERT_TRUE(sol.converged);
    EXPECT_NEAR(sol.aux[0], 1.0, 1e-5);
    EXPECT_NEAR(sol.aux[1], 1.0, 1e-5);
}

TEST(MinmaxNorms, FixedNormModelSkipsSearch) {
    const auto model = ModelSpec::perceptron(XFamily::Sphere, 2.5, 0.0);
    const auto res =
        minmax_norms(model, LiftConfig::NonLifted, {{LiftingParams::non_lifted(), {1.0, 1.0}}});
    EXPECT_EQ(res.x, 1.0);
    EXPECT_EQ(res.y, 1.0);
    EXPECT_NEAR(res.value, std::sqrt(1.25) - 1.0, 1e-8);
}

TEST(MinmaxNorms, LiftTermAloneHitsBracketFloor) {
    const auto stub = [](double x, double y) { return 0.5 * x * x * y * y; };
    try {
        minmax_norms(stub);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BracketFailure);
    }
}

TEST(MinmaxNorms, InteriorSaddleAndScaling) {
    const auto value = [](double x, double y) {
        const double lx = std::log(x / 2.0), ly = std::log(y / 3.0);
        return lx * lx - ly * ly + 0.1 * lx * ly;
    };
    const auto res = minmax_norms(value);
    EXPECT_NEAR(res.x, 2.0, 1e-4);
    EXPECT_NEAR(res.y, 3.0, 1e-4);
    // Doubling both radii halves the optimal multipliers.
    const auto scaled = minmax_norms([&](double x, double y) { return value(2.0 * x, 2.0 * y); });
    EXPECT_NEAR(scaled.x, 1.0, 1e-4);
    EXPECT_NEAR(scaled.y, 1.5, 1e-4);
    EXPECT_NEAR(scaled.value, res.value, 1e-10);
}

TEST(SolverConfig, JsonRoundTrip) {
    SolverConfig cfg;
    cfg.tol = 1e-7;
    cfg.quad_nodes = 80;
    const auto back = nlohmann::json(cfg).get<SolverConfig>();
    EXPECT_EQ(back.tol, 1e-7);
    EXPECT_EQ(back.quad_nodes, 80);
    EXPECT_EQ(lift_config_from_string(to_string(LiftConfig::PartiallyLifted)), LiftConfig::PartiallyLifted);
    EXPECT_THROW(lift_config_from_string("half"), Error);
}
