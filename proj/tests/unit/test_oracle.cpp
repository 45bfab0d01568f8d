#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "flrdt/error.hpp"
#include "flrdt/oracle.hpp"

using namespace flrdt;

namespace {

InstanceSample instance(const Eigen::MatrixXd& G, double kappa) {
    InstanceSample s;
    s.G = G;
    s.m2 = int(G.rows());
    s.b.assign(std::size_t(G.rows()), -kappa);
    s.kappa = kappa;
    return s;
}

// Largest min_i (-B_i x) over a fine grid of unit vectors in the plane.
double grid_margin(const Eigen::MatrixXd& G) {
    double best = -1e300;
    for (int k = 0; k < 200000; ++k) {
        const double th = 2.0 * M_PI * k / 200000.0;
        const Eigen::Vector2d x(std::cos(th), std::sin(th));
        best = std::max(best, (-G * x).minCoeff());
    }
    return best;
}

} // namespace

TEST(SampleInstance, ShapeAndDeterminism) {
    const auto a = sample_instance(2, 0, 1, 0.0, 7);
    EXPECT_EQ(a.G.rows(), 1);
    EXPECT_EQ(a.G.cols(), 2);
    EXPECT_EQ(a.b, std::vector<double>{0.0});
    const auto b = sample_instance(2, 0, 1, 0.0, 7);
    EXPECT_EQ(a.G, b.G);
    EXPECT_NE(a.G, sample_instance(2, 0, 1, 0.0, 8).G);
    EXPECT_EQ(sample_instance(3, 1, 2, 0.5, 1).b, (std::vector<double>{-0.5, -0.5}));
    EXPECT_THROW(sample_instance(0, 0, 1, 0.0, 1), Error);
}

TEST(SampleInstance, EntryMoments) {
    const auto s = sample_instance(1000, 0, 1000, 0.0, 123);
    const double mean = s.G.mean();
    const double var = (s.G.array() - mean).square().mean();
    EXPECT_NEAR(mean, 0.0, 0.005);
    EXPECT_NEAR(var, 1.0, 0.01);
}

TEST(FeasibilityCheck, SphereExamples) {
    Eigen::MatrixXd one(1, 2);
    one << 1.0, 0.0;
    const auto rep = feasibility_check(instance(one, 0.0), XFamily::Sphere);
    EXPECT_EQ(rep.verdict, Verdict::Feasible);
    ASSERT_EQ(rep.witness.size(), 2u);
    EXPECT_NEAR(std::hypot(rep.witness[0], rep.witness[1]), 1.0, 1e-12);
    EXPECT_LE(rep.witness[0], 0.0);

    Eigen::MatrixXd opposed(2, 2);
    opposed << 1.0, 0.0, -1.0, 0.0;
    const auto inf = feasibility_check(instance(opposed, 0.5), XFamily::Sphere);
    EXPECT_EQ(inf.verdict, Verdict::Infeasible);
    ASSERT_EQ(inf.dual.size(), 2u);
    EXPECT_NEAR(inf.dual[0] + inf.dual[1], 1.0, 1e-12);
}

TEST(FeasibilityCheck, SphereNegativeKappaIsUnknown) {
    const auto s = sample_instance(5, 0, 3, -0.5, 1);
    EXPECT_EQ(feasibility_check(s, XFamily::Sphere).verdict, Verdict::Unknown);
}

TEST(FeasibilityCheck, SphereAgreesWithAngleGrid) {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto s = sample_instance(2, 0, 3, 0.3, seed);
        const double margin = grid_margin(s.G);
        const auto rep = feasibility_check(s, XFamily::Sphere);
        EXPECT_NEAR(rep.margin, std::max(margin, 0.0), 1e-3) << "seed " << seed;
        if (std::abs(margin - 0.3) < 1e-3) continue;
        EXPECT_EQ(rep.verdict, margin > 0.3 ? Verdict::Feasible : Verdict::Infeasible) << "seed " << seed;
        ++checked;
    }
    EXPECT_GT(checked, 30);
}

TEST(FeasibilityCheck, SphereWitnessSatisfiesConstraints) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto s = sample_instance(30, 5, 20, 0.0, seed);
        const auto rep = feasibility_check(s, XFamily::Sphere);
        if (rep.verdict != Verdict::Feasible) continue;
        const Eigen::Map<const Eigen::VectorXd> x(rep.witness.data(), Eigen::Index(rep.witness.size()));
        EXPECT_NEAR(x.norm(), 1.0, 1e-10);
        EXPECT_LE((s.G.topRows(5) * x).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LE((s.G.bottomRows(20) * x).maxCoeff(), 1e-9);
    }
}

TEST(FeasibilityCheck, SphereRowScaleInvariant) {
    std::mt19937_64 eng(2);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto s = sample_instance(20, 0, 40, 0.0, seed);
        auto scaled = s;
        for (int i = 0; i < scaled.G.rows(); ++i) scaled.G.row(i) *= scale(eng);
        EXPECT_EQ(feasibility_check(s, XFamily::Sphere).verdict, feasibility_check(scaled, XFamily::Sphere).verdict);
    }
}

TEST(FeasibilityCheck, BinaryExampleAndBruteForce) {
    Eigen::MatrixXd row(1, 2);
    row << 1.0, -1.0;
    const auto rep = feasibility_check(instance(row, 0.0), XFamily::BinaryCorners);
    EXPECT_EQ(rep.verdict, Verdict::Feasible);

    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto s = sample_instance(8, 0, 8, 0.1, seed);
        bool any = false;
        for (int mask = 0; mask < 256 && !any; ++mask) {
            Eigen::VectorXd x(8);
            for (int j = 0; j < 8; ++j) x[j] = ((mask >> j) & 1 ? 1.0 : -1.0) / std::sqrt(8.0);
            any = (s.G * x).maxCoeff() <= -0.1;
        }
        EXPECT_EQ(feasibility_check(s, XFamily::BinaryCorners).verdict, any ? Verdict::Feasible : Verdict::Infeasible);
    }
}

TEST(FeasibilityCheck, BinarySizeLimit) {
    const auto s = sample_instance(26, 0, 1, 0.0, 1);
    try {
        feasibility_check(s, XFamily::BinaryCorners);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SizeLimitExceeded);
    }
}

TEST(MinNormPoint, OptimalityConditions) {
    std::mt19937_64 eng(4);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + trial % 6, m = 1 + trial % 15;
        Eigen::MatrixXd P(d, m);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < m; ++j) P(i, j) = normal(eng) + (trial % 2 ? 1.0 : 0.0);
        const auto mnp = min_norm_point(P);
        EXPECT_NEAR(mnp.weights.sum(), 1.0, 1e-12);
        EXPECT_GE(mnp.weights.minCoeff(), -1e-14);
        EXPECT_LE((P * mnp.weights - mnp.point).norm(), 1e-10);
        // x is the min-norm hull point iff x.p >= |x|^2 for every generator p.
        const double xx = mnp.point.squaredNorm();
        EXPECT_GE((P.transpose() * mnp.point).minCoeff(), xx - 1e-9);
    }
}

TEST(MinNormPoint, Segment) {
    Eigen::MatrixXd P(2, 2);
    P << 1.0, 1.0, -1.0, 3.0;
    const auto mnp = min_norm_point(P);
    EXPECT_NEAR(mnp.point[0], 1.0, 1e-12);
    EXPECT_NEAR(mnp.point[1], 0.0, 1e-12);
    EXPECT_NEAR(mnp.weights[0], 0.75, 1e-12);
}

TEST(Wilson, KnownValues) {
    const auto [lo, hi] = wilson_interval(5, 10);
    EXPECT_NEAR(lo, 0.236593, 1e-6);
    EXPECT_NEAR(hi, 0.763407, 1e-6);
    const auto [lo0, hi0] = wilson_interval(0, 50);
    EXPECT_EQ(lo0, 0.0);
    EXPECT_GT(hi0, 0.0);
    EXPECT_THROW(wilson_interval(0, 0), Error);
}

TEST(TransitionCrossing, InterpolatesAndThrows) {
    std::vector<TransitionPoint> pts{{1.0, 10, 90, 100}, {2.0, 20, 70, 100}, {3.0, 30, 10, 100}};
    EXPECT_NEAR(transition_crossing(pts), 2.0 + 0.2 / 0.6, 1e-12);
    pts.pop_back();
    try {
        transition_crossing(pts);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoCrossing);
    }
}

TEST(EmpiricalTransition, BinarySmallGrid) {
    const auto res = empirical_transition(PerceptronFamily::Binary, 10, {0.3, 1.0, 2.0}, 50, 5);
    ASSERT_EQ(res.points.size(), 3u);
    EXPECT_EQ(res.points[0].m, 3);
    EXPECT_EQ(res.points[2].m, 20);
    EXPECT_EQ(res.points[0].feasible, 50);
    EXPECT_TRUE(res.monotone);
    ASSERT_TRUE(res.crossing.has_value());
    for (const auto& p : res.points) {
        EXPECT_LE(p.wilson_lo, p.frequency());
        EXPECT_GE(p.wilson_hi, p.frequency());
    }
    const auto again = empirical_transition(PerceptronFamily::Binary, 10, {0.3, 1.0, 2.0}, 50, 5);
    EXPECT_EQ(nlohmann::json(res).dump(), nlohmann::json(again).dump());
}

TEST(EmpiricalTransition, Preconditions) {
    EXPECT_THROW(empirical_transition(PerceptronFamily::Binary, 10, {1.0}, 0, 1), Error);
    EXPECT_THROW(empirical_transition(PerceptronFamily::Binary, 10, {1.0}, 49, 1), Error);
    EXPECT_THROW(empirical_transition(PerceptronFamily::Binary, 10, {1.0, 0.5}, 50, 1), Error);
    EXPECT_THROW(empirical_transition(PerceptronFamily::Spherical, 10, {1.0}, 50, 1, -0.5), Error);
}

TEST(ExhaustivePrimal, Examples) {
    const Eigen::Vector2d e1(1.0, 0.0);
    const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
    const Eigen::Vector2d zero = Eigen::Vector2d::Zero();
    EXPECT_EQ(exhaustive_primal({e1}, {e1}, I, zero), 1.0);
    EXPECT_EQ(exhaustive_primal({e1, Eigen::Vector2d(-e1)}, {e1}, I, zero), -1.0);
    EXPECT_EQ(exhaustive_primal({e1}, {e1}, I, zero, {0.25}), 1.25);
}

TEST(ExhaustivePrimal, EnlargingYNeverDecreases) {
    std::mt19937_64 eng(6);
    std::normal_distribution<double> normal;
    auto vec = [&](int d) {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v[i] = normal(eng);
        return v;
    };
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Eigen::VectorXd> X, Y;
        for (int i = 0; i < 4; ++i) X.push_back(vec(3));
        for (int i = 0; i < 3; ++i) Y.push_back(vec(3));
        Eigen::MatrixXd G(3, 3);
        for (int i = 0; i < 3; ++i) G.row(i) = vec(3).transpose();
        const Eigen::VectorXd g = vec(3);
        const double small = exhaustive_primal(X, Y, G, g);
        Y.push_back(vec(3));
        EXPECT_GE(exhaustive_primal(X, Y, G, g), small);
    }
}

TEST(ExhaustivePrimal, SizeLimit) {
    std::vector<Eigen::VectorXd> X(1001, Eigen::VectorXd::Ones(1)), Y(1000, Eigen::VectorXd::Ones(1));
    try {
        exhaustive_primal(X, Y, Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SizeLimitExceeded);
    }
}
