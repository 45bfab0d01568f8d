#include "flrdt/finite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "flrdt/error.hpp"
#include "flrdt/rng.hpp"

namespace flrdt {

namespace {

constexpr std::uint64_t kStreamG = 0;

double log_mean_exp(const std::vector<double>& v) {
    const double hi = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(hi)) throw Error(ErrorCode::OverflowGuard, "non-finite nested exponent");
    double s = 0.0;
    for (double x : v) s += std::exp(x - hi);
    return hi + std::log(s / double(v.size()));
}

double log_sum_exp(const std::vector<double>& v) {
    const double hi = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(hi)) throw Error(ErrorCode::OverflowGuard, "beta too large; use the ground-state path");
    double s = 0.0;
    for (double x : v) s += std::exp(x - hi);
    return hi + std::log(s);
}

double norm(const std::vector<double>& v) {
    return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

enum class Variant { Full, DropA };

struct Evaluator {
    const FiniteInstance& inst;
    const std::vector<int>& samples;
    Variant variant;
    bool ground;
    int l_x, l_y, n, m, r;
    std::vector<double> a, b, cc;
    std::vector<double> xnorm, ynorm;

    // Accumulated random parts through the levels already drawn.
    struct Partial {
        std::vector<double> yu; // y_i2^T sum b_k u2_k, per y
        std::vector<double> hx; // (sum cc_k h_k)^T x_i1, per x
        double u4 = 0.0;        // sum a_k u4_k
    };

    void draw(int k, std::uint64_t path, Partial& acc) const {
        std::mt19937_64 eng(path);
        std::normal_distribution<double> normal;
        const double u4 = normal(eng);
        std::vector<double> u(static_cast<std::size_t>(m)), h(static_cast<std::size_t>(n));
        for (auto& v : u) v = normal(eng);
        for (auto& v : h) v = normal(eng);
        acc.u4 += a[k - 1] * u4;
        for (int j = 0; j < l_y; ++j)
            acc.yu[j] += b[k - 1] * std::inner_product(u.begin(), u.end(), inst.Y[j].begin(), 0.0);
        for (int i = 0; i < l_x; ++i)
            acc.hx[i] += cc[k - 1] * std::inner_product(h.begin(), h.end(), inst.X[i].begin(), 0.0);
    }

    // log Z, or beta * (s-weighted max) on the ground-state path.
    double log_z(const Eigen::MatrixXd& gxy, const Partial& acc) const {
        const double st = std::sqrt(inst.t), sr = std::sqrt(1.0 - inst.t);
        const double beta = inst.beta;
        std::vector<double> outer(static_cast<std::size_t>(l_x));
        std::vector<double> inner(static_cast<std::size_t>(l_y));
        for (int i = 0; i < l_x; ++i) {
            const double f = inst.f.empty() ? 0.0 : inst.f[i];
            for (int j = 0; j < l_y; ++j) {
                double d0 = f + st * gxy(i, j) + sr * xnorm[i] * acc.yu[j];
                if (variant == Variant::Full) d0 += st * xnorm[i] * ynorm[j] * acc.u4;
                d0 += sr * ynorm[j] * acc.hx[i];
                inner[j] = ground ? d0 : beta * d0;
            }
            if (ground) {
                outer[i] = inst.s * beta * *std::max_element(inner.begin(), inner.end());
            } else {
                outer[i] = inst.s * log_sum_exp(inner);
            }
        }
        if (ground) return *std::max_element(outer.begin(), outer.end());
        return log_sum_exp(outer);
    }

    double nested(int k, const Eigen::MatrixXd& gxy, const Partial& acc, std::uint64_t path) const {
        if (k == 0) return log_z(gxy, acc);
        const auto& mv = inst.m;
        const int count = samples[k - 1];
        std::vector<double> vals(static_cast<std::size_t>(count));
        for (int j = 0; j < count; ++j) {
            const std::uint64_t child = stream_seed(path, std::uint64_t(k), std::uint64_t(j));
            Partial next = acc;
            draw(k, child, next);
            vals[j] = (mv[k] / mv[k - 1]) * nested(k - 1, gxy, next, child);
        }
        return log_mean_exp(vals);
    }
};

DualEvaluation evaluate(const FiniteInstance& inst, const std::vector<int>& samples, std::uint64_t seed,
                        Variant variant, bool ground) {
    inst.validate();
    const int r = inst.r();
    if (int(samples.size()) != r + 1)
        throw Error(ErrorCode::DimensionMismatch, "mc_samples needs one entry per level 1..r plus the outer count");
    for (int s : samples)
        if (s < 1) throw Error(ErrorCode::InvalidArgument, "sample counts must be positive");
    const int outer = samples.back();
    if (outer < 2) throw Error(ErrorCode::InvalidArgument, "need at least two outer replicas");

    Evaluator ev{inst, samples, variant, ground, int(inst.X.size()), int(inst.Y.size()), inst.n(), inst.dim_y(), r,
                 {}, {}, {}, {}, {}};
    for (int k = 1; k <= r + 1; ++k) {
        ev.a.push_back(std::sqrt(std::max(0.0, inst.p[k - 1] * inst.q[k - 1] - inst.p[k] * inst.q[k])));
        ev.b.push_back(std::sqrt(std::max(0.0, inst.p[k - 1] - inst.p[k])));
        ev.cc.push_back(std::sqrt(std::max(0.0, inst.q[k - 1] - inst.q[k])));
    }
    for (const auto& x : inst.X) ev.xnorm.push_back(norm(x));
    for (const auto& y : inst.Y) ev.ynorm.push_back(norm(y));

    Eigen::MatrixXd Xm(ev.n, ev.l_x), Ym(ev.m, ev.l_y);
    for (int i = 0; i < ev.l_x; ++i)
        for (int j = 0; j < ev.n; ++j) Xm(j, i) = inst.X[i][j];
    for (int i = 0; i < ev.l_y; ++i)
        for (int j = 0; j < ev.m; ++j) Ym(j, i) = inst.Y[i][j];

    const double scale = 1.0 / (inst.beta * std::abs(double(inst.s)) * std::sqrt(double(ev.n)) * inst.m[r]);
    std::vector<double> vals(static_cast<std::size_t>(outer));
    for (int i = 0; i < outer; ++i) {
        const Eigen::MatrixXd G = finite_instance_G(inst, seed, std::uint64_t(i));
        const Eigen::MatrixXd gxy = (Ym.transpose() * G * Xm).transpose(); // (x index, y index)
        Evaluator::Partial acc{std::vector<double>(std::size_t(ev.l_y), 0.0),
                               std::vector<double>(std::size_t(ev.l_x), 0.0), 0.0};
        const std::uint64_t path = stream_seed(seed, std::uint64_t(r + 1), std::uint64_t(i));
        ev.draw(r + 1, path, acc);
        vals[i] = scale * ev.nested(r, gxy, acc, path);
    }
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / outer;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    DualEvaluation out;
    out.value = mean;
    out.std_error = std::sqrt(ss / (outer - 1) / outer);
    out.method = EvalMethod::MonteCarlo;
    long long total = 1;
    for (int s : samples) total *= s;
    out.samples_or_nodes = total;
    out.seed = seed;
    return out;
}

} // namespace

void FiniteInstance::validate() const {
    if (X.empty() || Y.empty()) throw Error(ErrorCode::InvalidArgument, "X and Y must be nonempty");
    const auto nx = X.front().size(), ny = Y.front().size();
    if (nx == 0 || ny == 0) throw Error(ErrorCode::InvalidArgument, "vectors must be nonempty");
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (X[i].size() != nx) throw Error(ErrorCode::DimensionMismatch, "X vectors differ in length", int(i));
        for (double v : X[i])
            if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "non-finite X entry", int(i));
    }
    for (std::size_t i = 0; i < Y.size(); ++i) {
        if (Y[i].size() != ny) throw Error(ErrorCode::DimensionMismatch, "Y vectors differ in length", int(i));
        for (double v : Y[i])
            if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "non-finite Y entry", int(i));
    }
    if (!f.empty() && f.size() != X.size()) throw Error(ErrorCode::DimensionMismatch, "f needs one value per x");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
    if (s != 1 && s != -1) throw Error(ErrorCode::InvalidArgument, "s must be +1 or -1");
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0,1]");
    const int rr = r();
    if (rr < 1) throw Error(ErrorCode::InvalidArgument, "m must have length r+2 with r >= 1");
    if (m.front() != 1.0 || m.back() != 0.0) throw Error(ErrorCode::BoundaryViolation, "need m[0]=1 and m[r+1]=0");
    for (int k = 1; k <= rr; ++k)
        if (!(m[k] > 0.0)) throw Error(ErrorCode::NonpositiveExponent, "interior m must be positive", k);
    LiftingParams lp{rr, p, q, std::vector<double>(std::size_t(rr + 2), 1.0)};
    lp.c[rr + 1] = 0.0;
    validate_params(lp);
}

Eigen::MatrixXd finite_instance_G(const FiniteInstance& instance, std::uint64_t seed, std::uint64_t index) {
    auto eng = make_engine(seed, kStreamG, index);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd G(instance.dim_y(), instance.n());
    for (int i = 0; i < G.rows(); ++i)
        for (int j = 0; j < G.cols(); ++j) G(i, j) = normal(eng);
    return G;
}

DualEvaluation finite_psi(const FiniteInstance& instance, const std::vector<int>& mc_samples, std::uint64_t seed) {
    return evaluate(instance, mc_samples, seed, Variant::Full, false);
}

DualEvaluation finite_psi_S(const FiniteInstance& instance, const std::vector<int>& mc_samples, std::uint64_t seed) {
    return evaluate(instance, mc_samples, seed, Variant::DropA, false);
}

DualEvaluation finite_psi_ground(const FiniteInstance& instance, const std::vector<int>& mc_samples,
                                 std::uint64_t seed, bool with_a_term) {
    return evaluate(instance, mc_samples, seed, with_a_term ? Variant::Full : Variant::DropA, true);
}

void from_json(const nlohmann::json& j, FiniteInstance& instance) {
    j.at("X").get_to(instance.X);
    j.at("Y").get_to(instance.Y);
    instance.f = j.value("f", std::vector<double>{});
    instance.beta = j.at("beta").get<double>();
    instance.s = j.at("s").get<int>();
    instance.t = j.at("t").get<double>();
    j.at("m").get_to(instance.m);
    const int r = int(instance.m.size()) - 2;
    std::vector<double> ladder(std::size_t(std::max(r + 2, 2)), 0.0);
    ladder[0] = 1.0;
    instance.p = j.value("p", ladder);
    instance.q = j.value("q", ladder);
    instance.validate();
}

void to_json(nlohmann::json& j, const FiniteInstance& instance) {
    j = nlohmann::json{{"X", instance.X}, {"Y", instance.Y}, {"f", instance.f}, {"beta", instance.beta},
                       {"s", instance.s},  {"t", instance.t}, {"m", instance.m}, {"p", instance.p},
                       {"q", instance.q}};
}

} // namespace flrdt
