#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

namespace flrdt {

// Lifting parameters at level r. All vectors have length r+2:
//   p[0]=q[0]=1, p[r+1]=q[r+1]=0, both nonincreasing in [0,1];
//   c[0]=c[1]=1, c[r+1]=0, c[k]>0 for 2<=k<=r (rescaled exponents).
struct LiftingParams {
    int r = 1;
    std::vector<double> p;
    std::vector<double> q;
    std::vector<double> c;

    // r=2, p=q=[1,1,0,0], c=[1,1,c2,0].
    static LiftingParams partially_lifted(double c2);
    // Same layout with c2=0; valid only in the non-lifted limit mode.
    static LiftingParams non_lifted();
    // p_k=q_k=1-(k-1)/r for 1<=k<=r, c_k=c for interior k.
    static LiftingParams uniform_ladder(int r, double c);

    bool operator==(const LiftingParams&) const = default;
};

enum class ExponentMode {
    Lifted,
    // All interior c_k -> 0: the nested chain collapses to E[D].
    NonLiftedLimit,
};

// Per-level noise standard deviations, index i <-> level k=i+1 (k=1..r+1).
struct NoiseCoefficients {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> cc;

    double a_at(int k) const { return a.at(k - 1); }
    double b_at(int k) const { return b.at(k - 1); }
    double cc_at(int k) const { return cc.at(k - 1); }
};

// Throws Error with the index of the first violated invariant.
const LiftingParams& validate_params(const LiftingParams& params,
                                     ExponentMode mode = ExponentMode::Lifted);

NoiseCoefficients noise_coefficients(const LiftingParams& params);

// Independent standard normals per level k=1..r+1 (index k-1).
struct RandomFields {
    std::vector<double> u4;
    std::vector<std::vector<double>> u2; // length m each
    std::vector<std::vector<double>> h;  // length n each

    static RandomFields sample(int r, int n, int m, std::uint64_t seed, std::uint64_t index = 0);
};

void to_json(nlohmann::json& j, const LiftingParams& params);
void from_json(const nlohmann::json& j, LiftingParams& params);
void to_json(nlohmann::json& j, const NoiseCoefficients& coeffs);

} // namespace flrdt
