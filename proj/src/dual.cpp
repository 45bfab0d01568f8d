#include "flrdt/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "flrdt/error.hpp"
#include "flrdt/parallel.hpp"
#include "flrdt/quadrature.hpp"
#include "flrdt/rng.hpp"

namespace flrdt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_mean_exp(const std::vector<double>& v) {
    const double hi = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(hi))
        throw Error(ErrorCode::ExponentUnderflow, "all samples non-finite after max-shift");
    double s = 0.0;
    for (double x : v) s += std::exp(x - hi);
    return hi + std::log(s / double(v.size()));
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// ---- per-coordinate channels -------------------------------------------------
//
// Each coordinate contributes phi(z) with z = g0 + sum_{k>=2} s_k zeta_k:
//   Quadratic:        w z^2          (w may be negative)
//   Absolute:         w |z|
//   ClippedQuadratic: -w max(z,0)^2
enum class Channel { Quadratic, Absolute, ClippedQuadratic };

struct ChannelSpec {
    Channel kind;
    double w;
    double g0;
    std::vector<double> s; // s[i] at level k=i+2
};

double phi(Channel kind, double w, double z) {
    switch (kind) {
    case Channel::Quadratic: return w * z * z;
    case Channel::Absolute: return w * std::abs(z);
    case Channel::ClippedQuadratic: return z > 0.0 ? -w * z * z : 0.0;
    }
    return 0.0;
}

// log E exp(c phi(s zeta + t)).
double level2(Channel kind, double c, double w, double s, double t) {
    if (s == 0.0) return c * phi(kind, w, t);
    const double a = c * w;
    switch (kind) {
    case Channel::Quadratic: {
        const double d = 1.0 - 2.0 * a * s * s;
        if (d <= 0.0) return kInf;
        return -0.5 * std::log(d) + a * t * t / d;
    }
    case Channel::Absolute:
        return 0.5 * a * a * s * s +
               log_add_exp(a * t + log_ndtr(t / s + a * s), -a * t + log_ndtr(a * s - t / s));
    case Channel::ClippedQuadratic: {
        const double B = 1.0 + 2.0 * a * s * s;
        return log_add_exp(log_ndtr(-t / s),
                           -0.5 * std::log(B) - a * t * t / B + log_ndtr(t / (s * std::sqrt(B))));
    }
    }
    return 0.0;
}

// E phi(z), z ~ N(g0, sigma^2).
double limit_mean(Channel kind, double w, double g0, double sigma) {
    if (sigma == 0.0) return phi(kind, w, g0);
    const double u = g0 / sigma;
    switch (kind) {
    case Channel::Quadratic: return w * (g0 * g0 + sigma * sigma);
    case Channel::Absolute:
        return w * (sigma * std::sqrt(2.0 / M_PI) * std::exp(-0.5 * u * u) + g0 * (1.0 - 2.0 * normal_cdf(-u)));
    case Channel::ClippedQuadratic:
        return -w * ((sigma * sigma + g0 * g0) * normal_cdf(u) + g0 * sigma * normal_pdf(u));
    }
    return 0.0;
}

// L_k(t) for k = 2..r by nested Gauss-Hermite.
double nested_level(const ChannelSpec& ch, const std::vector<double>& c, int k, double t,
                    const GaussHermiteRule& rule) {
    if (k == 2) return level2(ch.kind, c[2], ch.w, ch.s[0], t);
    const double rho = c[k] / c[k - 1];
    const double sk = ch.s[k - 2];
    if (sk == 0.0) return rho * nested_level(ch, c, k - 1, t, rule);
    double hi = -kInf;
    std::vector<double> terms(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        terms[i] = rho * nested_level(ch, c, k - 1, t + sk * rule.nodes[i], rule) + std::log(rule.weights[i]);
        hi = std::max(hi, terms[i]);
    }
    if (hi == kInf || std::isnan(hi)) return kInf;
    double acc = 0.0;
    for (double v : terms) acc += std::exp(v - hi);
    return hi + std::log(acc);
}

// (1/c_r) E L_r(g0 + s_{r+1} zeta), or E phi in the limit mode.
double channel_value(const ChannelSpec& ch, const LiftingParams& params, ExponentMode mode, int nodes) {
    const int r = params.r;
    if (mode == ExponentMode::NonLiftedLimit || r == 1) {
        double var = 0.0;
        for (double s : ch.s) var += s * s;
        return limit_mean(ch.kind, ch.w, ch.g0, std::sqrt(var));
    }
    const auto& c = params.c;
    if (ch.kind == Channel::Quadratic) {
        // Gaussian all the way: L_k(t) = A + B t^2 in closed form at every level.
        double A = 0.0, B = c[2] * ch.w;
        for (int k = 2; k <= r; ++k) {
            const double rho = k == 2 ? 1.0 : c[k] / c[k - 1];
            const double s = ch.s[k - 2];
            const double d = 1.0 - 2.0 * rho * B * s * s;
            if (d <= 0.0) return kInf;
            A = rho * A - 0.5 * std::log(d);
            B = rho * B / d;
        }
        const double so = ch.s[r - 1];
        return (A + B * (ch.g0 * ch.g0 + so * so)) / c[r];
    }
    const auto& rule = gauss_hermite(nodes);
    const double so = ch.s[r - 1];
    if (so == 0.0) return nested_level(ch, c, r, ch.g0, rule) / c[r];
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * nested_level(ch, c, r, ch.g0 + so * rule.nodes[i], rule);
    return acc / c[r];
}

} // namespace

// ---- model ------------------------------------------------------------------

void ModelSpec::validate() const {
    x_set.validate();
    y_set.validate();
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
    if (n_scale < 2) throw Error(ErrorCode::InvalidArgument, "n_scale must be at least 2");
}

ModelSpec ModelSpec::perceptron(XFamily x_family, double alpha, double kappa, int n_scale) {
    ModelSpec model;
    model.x_set = XSet{x_family, n_scale, 1.0, 0};
    const int m = std::max(1, int(std::lround(alpha * n_scale)));
    model.y_set = YSet::perceptron(m, kappa);
    model.objective = kappa == 0.0 ? ObjectiveKind::Zero : ObjectiveKind::LinearOffsetOnly;
    model.alpha = alpha;
    model.n_scale = n_scale;
    model.fixed_norms = true;
    return model;
}

BlockOffsets block_offsets(const YSet& set) {
    BlockOffsets out;
    out.free_fraction = double(set.m1) / double(set.m());
    if (set.g.empty()) return out;
    auto uniform = [&](int lo, int hi, double& dst) {
        if (lo >= hi) return;
        dst = set.g[lo];
        for (int i = lo + 1; i < hi; ++i)
            if (set.g[i] != dst)
                throw Error(ErrorCode::UnsupportedFamily, "offset must be constant on each Y block", i);
    };
    uniform(0, set.m1, out.free);
    uniform(set.m1, set.m(), out.cone);
    return out;
}

ModelSpec ModelSpec::at_dimension(int n) const {
    const BlockOffsets off = block_offsets(y_set);
    ModelSpec out = *this;
    out.x_set.n = n;
    const int m = std::max(1, int(std::lround(alpha * n)));
    int m1 = int(std::lround(off.free_fraction * m));
    if (y_set.family == YFamily::Sphere) m1 = m;
    if (y_set.family == YFamily::PosOrthantSphere) m1 = 0;
    out.y_set.m1 = m1;
    out.y_set.m2 = m - m1;
    out.y_set.g.assign(std::size_t(m), 0.0);
    for (int i = 0; i < m; ++i) out.y_set.g[i] = i < m1 ? off.free : off.cone;
    out.n_scale = n;
    return out;
}

// ---- ground state -------------------------------------------------------------

double ground_state_D(const ModelSpec& model, const NoiseCoefficients& coeffs, const RandomFields& fields) {
    const int n = model.x_set.n;
    const int m = model.y_set.m();
    const int levels = int(coeffs.b.size());
    if (int(fields.h.size()) != levels || int(fields.u2.size()) != levels)
        throw Error(ErrorCode::DimensionMismatch, "fields and coefficients disagree on the level count");
    std::vector<double> h(std::size_t(n), 0.0), u(std::size_t(m), 0.0);
    for (int k = 2; k <= levels; ++k) {
        const auto& hk = fields.h[k - 1];
        const auto& uk = fields.u2[k - 1];
        if (int(hk.size()) != n || int(uk.size()) != m)
            throw Error(ErrorCode::DimensionMismatch, "field dimensions must match the sets", k);
        for (int i = 0; i < n; ++i) h[i] += coeffs.cc_at(k) * hk[i];
        for (int i = 0; i < m; ++i) u[i] += coeffs.b_at(k) * uk[i];
    }
    const double x = model.x_set.radius, y = model.y_set.radius;
    for (auto& v : h) v *= y;
    for (auto& v : u) v *= x;
    return -(min_over_x(model.x_set, h).value + max_over_y(model.y_set, u).value);
}

// ---- Monte Carlo ------------------------------------------------------------

namespace {

struct McContext {
    const ModelSpec& model;
    const LiftingParams& params;
    const NoiseCoefficients& coeffs;
    const std::vector<int>& samples;
    int n;
    int m;

    double D(const std::vector<double>& h, const std::vector<double>& u) const {
        const double x = model.x_set.radius, y = model.y_set.radius;
        std::vector<double> hy(h.size()), ux(u.size());
        for (std::size_t i = 0; i < h.size(); ++i) hy[i] = y * h[i];
        for (std::size_t i = 0; i < u.size(); ++i) ux[i] = x * u[i];
        return -(min_over_x(model.x_set, hy).value + max_over_y(model.y_set, ux).value);
    }

    void draw(int k, std::uint64_t path, std::vector<double>& h, std::vector<double>& u) const {
        std::mt19937_64 eng(path);
        std::normal_distribution<double> normal;
        const double ck = coeffs.cc_at(k), bk = coeffs.b_at(k);
        for (auto& v : h) v += ck * normal(eng);
        for (auto& v : u) v += bk * normal(eng);
    }

    bool silent(int k) const { return coeffs.cc_at(k) == 0.0 && coeffs.b_at(k) == 0.0; }

    // log of the level-k nested expectation given the partial sums of levels > k.
    double nested(int k, const std::vector<double>& h_acc, const std::vector<double>& u_acc,
                  std::uint64_t path) const {
        const int count = silent(k) ? 1 : samples[k - 2];
        const auto& c = params.c;
        std::vector<double> vals(static_cast<std::size_t>(count));
        for (int j = 0; j < count; ++j) {
            const std::uint64_t child = stream_seed(path, std::uint64_t(k), std::uint64_t(j));
            std::vector<double> h = h_acc, u = u_acc;
            if (!silent(k)) draw(k, child, h, u);
            if (k == 2)
                vals[j] = c[2] * std::sqrt(double(n)) * D(h, u);
            else
                vals[j] = (c[k] / c[k - 1]) * nested(k - 1, h, u, child);
        }
        return log_mean_exp(vals);
    }
};

} // namespace

DualEvaluation psi_s_inf_mc(const ModelSpec& model, const LiftingParams& params, ExponentMode mode, int n,
                            const std::vector<int>& samples_per_level, std::uint64_t seed) {
    model.validate();
    validate_params(params, mode);
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be at least 2");
    const int r = params.r;
    if (int(samples_per_level.size()) != r)
        throw Error(ErrorCode::DimensionMismatch, "samples_per_level needs one entry per level 2..r+1");
    for (int s : samples_per_level)
        if (s < 1) throw Error(ErrorCode::InvalidArgument, "sample counts must be positive");
    const int outer = samples_per_level.back();
    if (outer < 2) throw Error(ErrorCode::InvalidArgument, "need at least two outer replicas");

    const ModelSpec dm = model.at_dimension(n);
    const NoiseCoefficients coeffs = noise_coefficients(params);
    const int m = dm.y_set.m();
    McContext ctx{dm, params, coeffs, samples_per_level, n, m};
    const bool limit = mode == ExponentMode::NonLiftedLimit || r == 1;

    std::vector<double> vals(static_cast<std::size_t>(outer));
    parallel_for(std::size_t(outer), [&](std::size_t i) {
        const std::uint64_t path = stream_seed(seed, std::uint64_t(r + 1), std::uint64_t(i));
        std::vector<double> h(std::size_t(n), 0.0), u(std::size_t(m), 0.0);
        ctx.draw(r + 1, path, h, u);
        if (limit) {
            for (int k = 2; k <= r; ++k) ctx.draw(k, stream_seed(path, std::uint64_t(k), 0), h, u);
            vals[i] = ctx.D(h, u) / std::sqrt(double(n));
        } else {
            vals[i] = ctx.nested(r, h, u, path) / (double(n) * params.c[r]);
        }
    });
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / outer;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    DualEvaluation out;
    out.value = mean;
    out.std_error = std::sqrt(ss / (outer - 1) / outer);
    out.method = EvalMethod::MonteCarlo;
    long long total = 1;
    for (int s : samples_per_level) total *= s;
    out.samples_or_nodes = total;
    out.seed = seed;
    return out;
}

// ---- separable quadrature ----------------------------------------------------

int aux_count(const ModelSpec& model) { return model.x_set.family == XFamily::Sphere ? 2 : 1; }

bool separable_supported(const ModelSpec& model) {
    if (model.x_set.family != XFamily::Sphere && model.x_set.family != XFamily::BinaryCorners) return false;
    try {
        block_offsets(model.y_set);
    } catch (const Error&) {
        return false;
    }
    return true;
}

double psi_s_inf_separable_value(const ModelSpec& model, const LiftingParams& params, ExponentMode mode,
                                 std::span<const double> aux, double x, double y, int quad_nodes) {
    if (int(aux.size()) != aux_count(model))
        throw Error(ErrorCode::DimensionMismatch, "wrong number of linearization scalars");
    for (std::size_t i = 0; i < aux.size(); ++i)
        if (!(aux[i] > 0.0) || !std::isfinite(aux[i]))
            throw Error(ErrorCode::NonpositiveAux, "linearization scalars must be positive", int(i));
    if (!separable_supported(model))
        throw Error(ErrorCode::UnsupportedFamily, "model has no per-coordinate reduction");

    const NoiseCoefficients coeffs = noise_coefficients(params);
    const int r = params.r;
    std::vector<double> s_cc(static_cast<std::size_t>(r)), s_b(static_cast<std::size_t>(r));
    for (int k = 2; k <= r + 1; ++k) {
        s_cc[k - 2] = coeffs.cc_at(k);
        s_b[k - 2] = x * coeffs.b_at(k);
    }

    double xside;
    if (model.x_set.family == XFamily::Sphere) {
        const double gx = aux[0];
        xside = 0.5 * gx +
                channel_value({Channel::Quadratic, x * x * y * y / (2.0 * gx), 0.0, s_cc}, params, mode, quad_nodes);
    } else {
        xside = channel_value({Channel::Absolute, x * y, 0.0, s_cc}, params, mode, quad_nodes);
    }

    const BlockOffsets off = block_offsets(model.y_set);
    const double gy = aux.back();
    const double w = y * y / (2.0 * gy);
    double yside = -0.5 * gy;
    if (off.free_fraction < 1.0)
        yside += model.alpha * (1.0 - off.free_fraction) *
                 channel_value({Channel::ClippedQuadratic, w, off.cone, s_b}, params, mode, quad_nodes);
    if (off.free_fraction > 0.0)
        yside += model.alpha * off.free_fraction *
                 channel_value({Channel::Quadratic, -w, off.free, s_b}, params, mode, quad_nodes);
    return xside + yside;
}

DualEvaluation psi_s_inf_separable(const ModelSpec& model, const LiftingParams& params, ExponentMode mode,
                                   std::span<const double> aux, int quad_nodes) {
    model.validate();
    validate_params(params, mode);
    if (quad_nodes < 2) throw Error(ErrorCode::InvalidArgument, "need at least two quadrature nodes");
    const double x = model.x_set.radius, y = model.y_set.radius;
    int nodes = quad_nodes;
    double prev = psi_s_inf_separable_value(model, params, mode, aux, x, y, nodes);
    for (;;) {
        const int next = nodes * 2;
        if (next > 1024)
            throw Error(ErrorCode::QuadratureOrderTooLow, "value still moving at 1024 nodes per level");
        const double cur = psi_s_inf_separable_value(model, params, mode, aux, x, y, next);
        if (std::isinf(prev) && std::isinf(cur)) {
            prev = cur;
            break;
        }
        const bool settled = std::abs(cur - prev) <= 1e-8;
        prev = cur;
        nodes = next;
        if (settled) break;
    }
    DualEvaluation out;
    out.value = prev;
    out.std_error = 0.0;
    out.method = EvalMethod::SeparableQuadrature;
    out.samples_or_nodes = nodes;
    return out;
}

// ---- assembly ---------------------------------------------------------------------

double lift_term(const LiftingParams& params, ExponentMode mode, double x, double y) {
    if (mode == ExponentMode::NonLiftedLimit) return 0.0;
    const auto& p = params.p;
    const auto& q = params.q;
    double s = 0.0;
    for (int k = 2; k <= params.r + 1; ++k) s += (p[k - 1] * q[k - 1] - p[k] * q[k]) * params.c[k];
    return 0.5 * x * x * y * y * s;
}

DualEvaluation psi_rd(const LiftingParams& params, ExponentMode mode, double x, double y,
                      const DualEvaluation& psi_s_inf) {
    if (!(x > 0.0) || !(y > 0.0)) throw Error(ErrorCode::InvalidArgument, "norms x, y must be positive");
    DualEvaluation out = psi_s_inf;
    out.value = lift_term(params, mode, x, y) - psi_s_inf.value;
    return out;
}

DualEvaluation psi_rd(const ModelSpec& model, const LiftingParams& params, ExponentMode mode,
                      std::span<const double> aux, double x, double y, const EvalOptions& options) {
    // x, y scale the set radii; fixed-norm slices pass x = y = 1.
    const double xe = x * model.x_set.radius, ye = y * model.y_set.radius;
    ModelSpec scaled = model;
    scaled.x_set.radius = xe;
    scaled.y_set.radius = ye;
    DualEvaluation psi_s;
    if (separable_supported(model)) {
        if (options.adaptive) {
            psi_s = psi_s_inf_separable(scaled, params, mode, aux, options.quad_nodes);
        } else {
            validate_params(params, mode);
            psi_s.value = psi_s_inf_separable_value(scaled, params, mode, aux, xe, ye, options.quad_nodes);
            psi_s.method = EvalMethod::SeparableQuadrature;
            psi_s.samples_or_nodes = options.quad_nodes;
        }
    } else {
        psi_s = psi_s_inf_mc(scaled, params, mode, options.mc_n, options.mc_samples, options.seed);
    }
    return psi_rd(params, mode, xe, ye, psi_s);
}

// ---- serialization ---------------------------------------------------------------

const char* to_string(EvalMethod method) {
    switch (method) {
    case EvalMethod::SeparableQuadrature: return "SeparableQuadrature";
    case EvalMethod::MonteCarlo: return "MonteCarlo";
    case EvalMethod::ClosedForm: return "ClosedForm";
    }
    return "";
}

void to_json(nlohmann::json& j, const DualEvaluation& eval) {
    j = nlohmann::json{{"value", eval.value},
                       {"std_error", eval.std_error},
                       {"method", to_string(eval.method)},
                       {"samples_or_nodes", eval.samples_or_nodes},
                       {"seed", eval.seed}};
}

void to_json(nlohmann::json& j, const ModelSpec& model) {
    j = nlohmann::json{{"x_set", model.x_set},
                       {"y_set", model.y_set},
                       {"objective", model.objective == ObjectiveKind::Zero ? "Zero" : "LinearOffsetOnly"},
                       {"alpha", model.alpha},
                       {"n_scale", model.n_scale},
                       {"fixed_norms", model.fixed_norms}};
}

void from_json(const nlohmann::json& j, ModelSpec& model) {
    j.at("x_set").get_to(model.x_set);
    j.at("y_set").get_to(model.y_set);
    const auto obj = j.value("objective", std::string("Zero"));
    if (obj == "Zero") model.objective = ObjectiveKind::Zero;
    else if (obj == "LinearOffsetOnly") model.objective = ObjectiveKind::LinearOffsetOnly;
    else throw Error(ErrorCode::ConfigError, "unknown objective '" + obj + "'");
    model.alpha = j.at("alpha").get<double>();
    model.n_scale = j.value("n_scale", model.x_set.n);
    model.fixed_norms = j.value("fixed_norms", true);
    model.validate();
}

} // namespace flrdt
