#include "flrdt/lifting.hpp"

#include <cmath>
#include <string>

#include "flrdt/error.hpp"
#include "flrdt/rng.hpp"

namespace flrdt {

LiftingParams LiftingParams::partially_lifted(double c2) {
    return {2, {1.0, 1.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0}, {1.0, 1.0, c2, 0.0}};
}

LiftingParams LiftingParams::non_lifted() { return partially_lifted(0.0); }

LiftingParams LiftingParams::uniform_ladder(int r, double c) {
    if (r < 1) throw Error(ErrorCode::InvalidArgument, "lifting level must be positive");
    LiftingParams out{r, std::vector<double>(r + 2), std::vector<double>(r + 2), std::vector<double>(r + 2)};
    out.p[0] = out.q[0] = 1.0;
    for (int k = 1; k <= r; ++k) out.p[k] = out.q[k] = 1.0 - double(k - 1) / r;
    out.p[r + 1] = out.q[r + 1] = 0.0;
    out.c[0] = out.c[1] = 1.0;
    for (int k = 2; k <= r; ++k) out.c[k] = c;
    out.c[r + 1] = 0.0;
    return out;
}

namespace {

void check_chain(const std::vector<double>& v, const char* name) {
    const int last = int(v.size()) - 1;
    for (int k = 0; k <= last; ++k)
        if (!std::isfinite(v[k]))
            throw Error(ErrorCode::NonFiniteInput, std::string(name) + " has a non-finite entry", k);
    if (v[0] != 1.0) throw Error(ErrorCode::BoundaryViolation, std::string(name) + "[0] must be 1", 0);
    if (v[last] != 0.0)
        throw Error(ErrorCode::BoundaryViolation, std::string(name) + "[r+1] must be 0", last);
    for (int k = 1; k <= last; ++k)
        if (v[k] > v[k - 1] || v[k] < 0.0)
            throw Error(ErrorCode::MonotonicityViolation,
                        std::string(name) + " must be nonincreasing in [0,1]", k);
}

} // namespace

const LiftingParams& validate_params(const LiftingParams& params, ExponentMode mode) {
    const int r = params.r;
    if (r < 1) throw Error(ErrorCode::InvalidArgument, "lifting level must be positive");
    const std::size_t len = std::size_t(r) + 2;
    if (params.p.size() != len || params.q.size() != len || params.c.size() != len)
        throw Error(ErrorCode::DimensionMismatch, "p, q, c must have length r+2");
    check_chain(params.p, "p");
    check_chain(params.q, "q");
    const auto& c = params.c;
    for (int k = 0; k <= r + 1; ++k)
        if (!std::isfinite(c[k])) throw Error(ErrorCode::NonFiniteInput, "c has a non-finite entry", k);
    if (c[0] != 1.0) throw Error(ErrorCode::BoundaryViolation, "c[0] must be 1", 0);
    if (c[1] != 1.0) throw Error(ErrorCode::BoundaryViolation, "c[1] must be 1", 1);
    if (c[r + 1] != 0.0) throw Error(ErrorCode::BoundaryViolation, "c[r+1] must be 0", r + 1);
    for (int k = 2; k <= r; ++k) {
        if (mode == ExponentMode::NonLiftedLimit ? c[k] < 0.0 : c[k] <= 0.0)
            throw Error(ErrorCode::NonpositiveExponent, "interior exponent must be positive", k);
    }
    return params;
}

NoiseCoefficients noise_coefficients(const LiftingParams& params) {
    const auto& p = params.p;
    const auto& q = params.q;
    NoiseCoefficients out;
    for (int k = 1; k <= params.r + 1; ++k) {
        const double a2 = p[k - 1] * q[k - 1] - p[k] * q[k];
        const double b2 = p[k - 1] - p[k];
        const double c2 = q[k - 1] - q[k];
        if (a2 < 0.0 || b2 < 0.0 || c2 < 0.0)
            throw Error(ErrorCode::NegativeRadicand, "noise variance is negative at level k", k);
        out.a.push_back(std::sqrt(a2));
        out.b.push_back(std::sqrt(b2));
        out.cc.push_back(std::sqrt(c2));
    }
    return out;
}

RandomFields RandomFields::sample(int r, int n, int m, std::uint64_t seed, std::uint64_t index) {
    RandomFields out;
    std::normal_distribution<double> normal;
    for (int k = 1; k <= r + 1; ++k) {
        auto eng = make_engine(seed, std::uint64_t(k), index);
        out.u4.push_back(normal(eng));
        std::vector<double> u(m), h(n);
        for (auto& v : u) v = normal(eng);
        for (auto& v : h) v = normal(eng);
        out.u2.push_back(std::move(u));
        out.h.push_back(std::move(h));
    }
    return out;
}

void to_json(nlohmann::json& j, const LiftingParams& params) {
    j = nlohmann::json{{"r", params.r}, {"p", params.p}, {"q", params.q}, {"c", params.c}};
}

void from_json(const nlohmann::json& j, LiftingParams& params) {
    j.at("r").get_to(params.r);
    j.at("p").get_to(params.p);
    j.at("q").get_to(params.q);
    j.at("c").get_to(params.c);
}

void to_json(nlohmann::json& j, const NoiseCoefficients& coeffs) {
    j = nlohmann::json{{"a", coeffs.a}, {"b", coeffs.b}, {"cc", coeffs.cc}};
}

} // namespace flrdt
