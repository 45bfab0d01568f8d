#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "flrdt/error.hpp"
#include "flrdt/sets.hpp"

using namespace flrdt;

namespace {

std::vector<double> gaussian(int n, std::mt19937_64& eng) {
    std::normal_distribution<double> normal;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = normal(eng);
    return v;
}

double dot(const std::vector<double>& a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

TEST(MinOverX, SphereExample) {
    const XSet set{XFamily::Sphere, 2, 1.0};
    const std::vector<double> field{3.0, 4.0};
    const auto res = min_over_x(set, field);
    EXPECT_DOUBLE_EQ(res.value, -5.0);
    EXPECT_DOUBLE_EQ(res.witness[0], -0.6);
    EXPECT_DOUBLE_EQ(res.witness[1], -0.8);
}

TEST(MinOverX, BinaryExample) {
    const XSet set{XFamily::BinaryCorners, 4, 1.0};
    const std::vector<double> field{1.0, -2.0, 0.5, -0.5};
    const auto res = min_over_x(set, field);
    EXPECT_DOUBLE_EQ(res.value, -2.0);
    EXPECT_TRUE(membership(set, res.witness));
    EXPECT_DOUBLE_EQ(dot(res.witness, field), res.value);
}

TEST(MinOverX, ZeroFieldOnSphere) {
    const XSet set{XFamily::Sphere, 3, 1.0};
    const auto res = min_over_x(set, std::vector<double>(3, 0.0));
    EXPECT_EQ(res.value, 0.0);
    EXPECT_TRUE(membership(set, res.witness));
}

TEST(MinOverX, L1FamiliesAreMembershipOnly) {
    const XSet set{XFamily::WeakL1, 3, 1.0, 1};
    try {
        min_over_x(set, std::vector<double>(3, 1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedFamily);
    }
}

TEST(MinOverX, WitnessAttainsValueOnRandomFields) {
    std::mt19937_64 eng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 9;
        const auto field = gaussian(n, eng);
        for (auto fam : {XFamily::Sphere, XFamily::BinaryCorners}) {
            const XSet set{fam, n, 0.5 + trial * 0.01};
            const auto res = min_over_x(set, field);
            EXPECT_TRUE(membership(set, res.witness));
            EXPECT_NEAR(dot(res.witness, field), res.value, 1e-12 * std::max(1.0, std::abs(res.value)));
        }
    }
}

TEST(MinOverX, ScalesWithRadius) {
    std::mt19937_64 eng(4);
    const auto field = gaussian(6, eng);
    for (auto fam : {XFamily::Sphere, XFamily::BinaryCorners}) {
        const double base = min_over_x({fam, 6, 1.0}, field).value;
        EXPECT_NEAR(min_over_x({fam, 6, 2.5}, field).value, 2.5 * base, 1e-12);
    }
}

TEST(MaxOverY, OrthantExamples) {
    const std::vector<double> field{1.0, -2.0, 3.0};
    EXPECT_NEAR(max_over_y(YSet::perceptron(3, 0.0), field).value, std::sqrt(10.0), 1e-15);
    EXPECT_DOUBLE_EQ(max_over_y(YSet::perceptron(3, -1.0), field).value, 2.0);
}

TEST(MaxOverY, MixedConeKeepsFreeSign) {
    const YSet set{YFamily::MixedCone, 1, 2, 1.0, {}};
    const auto res = max_over_y(set, std::vector<double>{-2.0, 1.0, -1.0});
    EXPECT_NEAR(res.value, std::sqrt(5.0), 1e-15);
    EXPECT_EQ(res.witness[2], 0.0); // clipped coordinates are exactly zero
    EXPECT_TRUE(membership(set, res.witness));
}

TEST(MaxOverY, NoConeBlockIsFullSphere) {
    std::mt19937_64 eng(8);
    const auto field = gaussian(5, eng);
    const YSet cone{YFamily::MixedCone, 5, 0, 1.7, {}};
    double s = 0.0;
    for (double v : field) s += v * v;
    EXPECT_NEAR(max_over_y(cone, field).value, 1.7 * std::sqrt(s), 1e-12);
    const YSet sphere{YFamily::Sphere, 5, 0, 1.7, {}};
    EXPECT_NEAR(max_over_y(sphere, field).value, 1.7 * std::sqrt(s), 1e-12);
}

TEST(MaxOverY, AllNegativeConeField) {
    const auto res = max_over_y(YSet::perceptron(3, 0.0), std::vector<double>{-3.0, -0.5, -2.0});
    EXPECT_DOUBLE_EQ(res.value, -0.5);
    EXPECT_EQ(res.witness, (std::vector<double>{0.0, 1.0, 0.0}));
}

TEST(MaxOverY, WitnessAttainsValueAndScales) {
    std::mt19937_64 eng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const int m1 = trial % 3, m2 = 1 + trial % 4;
        YSet set{YFamily::MixedCone, m1, m2, 1.0, gaussian(m1 + m2, eng)};
        const auto field = gaussian(m1 + m2, eng);
        const auto res = max_over_y(set, field);
        EXPECT_TRUE(membership(set, res.witness));
        std::vector<double> v = field;
        for (int i = 0; i < m1 + m2; ++i) v[i] += set.g[i];
        EXPECT_NEAR(dot(res.witness, v), res.value, 1e-12 * std::max(1.0, std::abs(res.value)));
        const double base = res.value;
        set.radius = 3.0;
        EXPECT_NEAR(max_over_y(set, field).value, 3.0 * base, 1e-12 * std::max(1.0, std::abs(base)));
    }
}

TEST(MaxOverY, MonotoneInConeOffset) {
    // y >= 0 on the cone block, so raising a cone offset can only help; a free
    // coordinate's offset is not monotone (|v_i| may shrink).
    std::mt19937_64 eng(10);
    std::uniform_real_distribution<double> bump(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        YSet set{YFamily::MixedCone, 1, 3, 1.0, gaussian(4, eng)};
        const auto field = gaussian(4, eng);
        const double before = max_over_y(set, field).value;
        set.g[1 + trial % 3] += bump(eng);
        EXPECT_GE(max_over_y(set, field).value, before - 1e-15);
    }
}

TEST(Membership, L1Sets) {
    const double tail = std::sqrt(1.0 - 0.01 - 0.04);
    const XSet weak{XFamily::WeakL1, 3, 1.0, 1};
    EXPECT_TRUE(membership(weak, std::vector<double>{0.1, -0.2, tail}));
    EXPECT_FALSE(membership(weak, std::vector<double>{0.1, -0.2, -tail}));
    const XSet sec{XFamily::SectionalL1, 3, 1.0, 1};
    EXPECT_TRUE(membership(sec, std::vector<double>{0.1, -0.2, -tail}));
    EXPECT_FALSE(membership(sec, std::vector<double>{0.5, 0.5, -0.3}));
}

TEST(Membership, ConeAndDimensionErrors) {
    const auto set = YSet::perceptron(2, 0.0);
    EXPECT_FALSE(membership(set, std::vector<double>{0.6, -0.8}));
    EXPECT_TRUE(membership(set, std::vector<double>{0.6, 0.8}));
    try {
        membership(set, std::vector<double>{1.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Sets, RejectNonFiniteField) {
    const XSet set{XFamily::Sphere, 2, 1.0};
    try {
        min_over_x(set, std::vector<double>{1.0, std::nan("")});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonFiniteInput);
        EXPECT_EQ(e.index(), 1);
    }
}

TEST(Sets, JsonRoundTrip) {
    const auto y = YSet::perceptron(4, -0.5);
    const nlohmann::json jy = y;
    EXPECT_EQ(jy.at("kappa"), -0.5);
    const auto back = jy.get<YSet>();
    EXPECT_EQ(back.g, y.g);
    EXPECT_EQ(back.m2, 4);

    const YSet mixed{YFamily::MixedCone, 1, 2, 2.0, {0.3, 0.1, 0.2}};
    const auto mixed_back = nlohmann::json(mixed).get<YSet>();
    EXPECT_EQ(mixed_back.g, mixed.g);
    EXPECT_EQ(mixed_back.radius, 2.0);

    const XSet x{XFamily::SectionalL1, 10, 1.0, 3};
    const auto x_back = nlohmann::json(x).get<XSet>();
    EXPECT_EQ(x_back.family, XFamily::SectionalL1);
    EXPECT_EQ(x_back.k, 3);
}
