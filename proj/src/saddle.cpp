#include "flrdt/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "flrdt/error.hpp"

namespace flrdt {

namespace {

constexpr double kPFloor = 1e-12;
constexpr double kCFloor = 1e-10;
constexpr double kDegenerateC = 1e-2;

struct Layout {
    LiftConfig config;
    int r;
    int naux;

    int lifted() const {
        switch (config) {
        case LiftConfig::NonLifted: return 0;
        case LiftConfig::PartiallyLifted: return 1;
        case LiftConfig::FullyLifted: return 3 * (r - 1);
        }
        return 0;
    }
    int dim() const { return lifted() + naux; }
};

Layout layout_for(const ModelSpec& model, LiftConfig config, int r) {
    if (config != LiftConfig::FullyLifted) r = 2;
    if (r < 1) throw Error(ErrorCode::InvalidArgument, "lifting level must be positive");
    return Layout{config, r, aux_count(model)};
}

std::vector<double> pack(const Layout& lay, const LiftingParams& params, std::span<const double> aux) {
    std::vector<double> u;
    const int r = lay.r;
    if (lay.config == LiftConfig::PartiallyLifted) {
        u.push_back(params.c.at(2));
    } else if (lay.config == LiftConfig::FullyLifted) {
        for (int k = 2; k <= r; ++k) u.push_back(std::max(params.p.at(k), 1e-6));
        for (int k = 2; k <= r; ++k) u.push_back(std::max(params.q.at(k), 1e-6));
        for (int k = 2; k <= r; ++k) u.push_back(params.c.at(k));
    }
    for (double a : aux) u.push_back(a);
    return u;
}

void unpack(const Layout& lay, std::span<const double> u, LiftingParams& params, std::vector<double>& aux) {
    const int r = lay.r;
    switch (lay.config) {
    case LiftConfig::NonLifted:
        params = LiftingParams::non_lifted();
        break;
    case LiftConfig::PartiallyLifted:
        params = LiftingParams::partially_lifted(u[0]);
        break;
    case LiftConfig::FullyLifted:
        params = LiftingParams::uniform_ladder(r, 1.0);
        for (int k = 2; k <= r; ++k) {
            params.p[k] = u[k - 2];
            params.q[k] = u[r - 1 + k - 2];
            params.c[k] = u[2 * (r - 1) + k - 2];
        }
        break;
    }
    aux.assign(u.begin() + lay.lifted(), u.end());
}

bool admissible(const Layout& lay, std::span<const double> u) {
    for (double v : u)
        if (!(v > 0.0) || !std::isfinite(v)) return false;
    if (lay.config != LiftConfig::FullyLifted) return true;
    const int r = lay.r;
    for (int blk = 0; blk < 2; ++blk) {
        double prev = 1.0;
        for (int k = 2; k <= r; ++k) {
            const double v = u[blk * (r - 1) + k - 2];
            if (v > prev) return false;
            prev = v;
        }
    }
    return true;
}

// Clamp p, q into (0, 1], re-sort descending, keep exponents positive.
void project(const Layout& lay, std::vector<double>& u) {
    if (lay.config == LiftConfig::PartiallyLifted) u[0] = std::max(u[0], kCFloor);
    if (lay.config == LiftConfig::FullyLifted) {
        const int r = lay.r;
        for (int blk = 0; blk < 2; ++blk) {
            auto first = u.begin() + blk * (r - 1);
            for (auto it = first; it != first + (r - 1); ++it) *it = std::clamp(*it, kPFloor, 1.0);
            std::sort(first, first + (r - 1), std::greater<double>());
        }
        for (int k = 0; k < r - 1; ++k) u[2 * (r - 1) + k] = std::max(u[2 * (r - 1) + k], kCFloor);
    }
    for (std::size_t i = std::size_t(lay.lifted()); i < u.size(); ++i) u[i] = std::max(u[i], 1e-300);
}

struct Objective {
    const ModelSpec& model;
    Layout lay;
    double x, y;
    const SolverConfig& cfg;

    double operator()(std::span<const double> u) const {
        if (!admissible(lay, u)) return std::numeric_limits<double>::quiet_NaN();
        LiftingParams params;
        std::vector<double> aux;
        unpack(lay, u, params, aux);
        return stationary_objective(model, lay.config, params, aux, x, y, cfg);
    }

    double at_log(const std::vector<double>& theta) const {
        std::vector<double> u(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) u[i] = std::exp(theta[i]);
        return (*this)(u);
    }
};

// Central differences in log space with automatic step shrinking near the domain edge.
std::vector<double> log_gradient(const Objective& obj, const std::vector<double>& theta, double step) {
    std::vector<double> grad(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        double h = step;
        for (;;) {
            auto tp = theta, tm = theta;
            tp[j] += h;
            tm[j] -= h;
            const double fp = obj.at_log(tp), fm = obj.at_log(tm);
            if (std::isfinite(fp) && std::isfinite(fm)) {
                grad[j] = (fp - fm) / (2.0 * h);
                break;
            }
            h *= 0.5;
            if (h < 1e-8)
                throw Error(ErrorCode::StepOutOfDomain, "finite-difference stencil leaves the domain", int(j));
        }
    }
    return grad;
}

Eigen::MatrixXd log_hessian(const Objective& obj, const std::vector<double>& theta, double f0) {
    const int d = int(theta.size());
    Eigen::MatrixXd H(d, d);
    std::vector<double> hs(std::size_t(d), 1e-3);
    for (int i = 0; i < d; ++i) {
        for (;;) {
            auto tp = theta, tm = theta;
            tp[i] += hs[i];
            tm[i] -= hs[i];
            const double fp = obj.at_log(tp), fm = obj.at_log(tm);
            if (std::isfinite(fp) && std::isfinite(fm)) {
                H(i, i) = (fp - 2.0 * f0 + fm) / (hs[i] * hs[i]);
                break;
            }
            hs[i] *= 0.5;
            if (hs[i] < 1e-8) throw Error(ErrorCode::StepOutOfDomain, "Hessian stencil leaves the domain", i);
        }
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const double hi = hs[i], hj = hs[j];
            auto at = [&](double si, double sj) {
                auto t = theta;
                t[i] += si * hi;
                t[j] += sj * hj;
                return obj.at_log(t);
            };
            const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hi * hj);
            H(i, j) = H(j, i) = std::isfinite(v) ? v : 0.0;
        }
    return H;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

bool any_c_above(const Layout& lay, const std::vector<double>& u, double cap) {
    if (lay.config == LiftConfig::PartiallyLifted) return u[0] > cap;
    if (lay.config == LiftConfig::FullyLifted)
        for (int k = 0; k < lay.r - 1; ++k)
            if (u[2 * (lay.r - 1) + k] > cap) return true;
    return false;
}

bool any_c_below(const Layout& lay, const std::vector<double>& u, double floor) {
    if (lay.config == LiftConfig::PartiallyLifted) return u[0] < floor;
    if (lay.config == LiftConfig::FullyLifted)
        for (int k = 0; k < lay.r - 1; ++k)
            if (u[2 * (lay.r - 1) + k] < floor) return true;
    return false;
}

// Coordinates the projection holds at a floor (a boundary limit, not an interior point).
std::vector<bool> at_floor(const Layout& lay, const std::vector<double>& u) {
    std::vector<bool> out(u.size(), false);
    if (lay.config == LiftConfig::FullyLifted)
        for (int i = 0; i < 2 * (lay.r - 1); ++i) out[std::size_t(i)] = u[std::size_t(i)] <= 1e3 * kPFloor;
    for (std::size_t i = std::size_t(lay.lifted()); i < u.size(); ++i) out[i] = u[i] <= 1e-250;
    return out;
}

SaddleSolution solve_one(const ModelSpec& model, const Layout& lay, const Start& start, double x, double y,
                         const SolverConfig& cfg) {
    validate_params(start.params, lay.config == LiftConfig::FullyLifted ? ExponentMode::Lifted
                                                                          : ExponentMode::NonLiftedLimit);
    std::vector<double> aux0 = start.aux;
    if (aux0.empty()) aux0.assign(std::size_t(lay.naux), 1.0);
    if (int(aux0.size()) != lay.naux) throw Error(ErrorCode::DimensionMismatch, "wrong number of aux scalars");
    if (lay.config == LiftConfig::FullyLifted && start.params.r != lay.r)
        throw Error(ErrorCode::DimensionMismatch, "start has a different lifting level");

    std::vector<double> u = pack(lay, start.params, aux0);
    project(lay, u);
    for (double v : u)
        if (!(v > 0.0)) throw Error(ErrorCode::NonpositiveAux, "start has a nonpositive unknown");
    Objective obj{model, lay, x, y, cfg};
    std::vector<double> theta(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) theta[i] = std::log(u[i]);

    SaddleSolution sol;
    sol.config = lay.config;
    double f = obj.at_log(theta);
    if (!std::isfinite(f)) throw Error(ErrorCode::StepOutOfDomain, "start lies outside the integrability domain");
    std::vector<double> F = log_gradient(obj, theta, cfg.fd_step);
    auto record = [&]() {
        std::vector<double> cur(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) cur[i] = std::exp(theta[i]);
        sol.trace.push_back({cur, max_abs(F), f});
    };
    record();

    double lambda = cfg.damping;
    double mu = -1.0;
    int it = 0;
    for (; it < cfg.max_iter && max_abs(F) > cfg.tol; ++it) {
        const int d = int(theta.size());
        const Eigen::MatrixXd H = log_hessian(obj, theta, f);
        const Eigen::VectorXd Fv = Eigen::Map<const Eigen::VectorXd>(F.data(), d);
        const Eigen::MatrixXd HtH = H.transpose() * H;
        if (mu < 0.0) mu = 1e-6 * std::max(HtH.diagonal().maxCoeff(), 1e-12);
        bool accepted = false;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
            const Eigen::MatrixXd M = HtH + mu * Eigen::MatrixXd::Identity(d, d);
            const Eigen::VectorXd delta = -M.ldlt().solve(H.transpose() * Fv);
            std::vector<double> trial(theta.size());
            for (int i = 0; i < d; ++i) trial[i] = std::exp(theta[i] + lambda * delta[i]);
            project(lay, trial);
            std::vector<double> ttheta(theta.size());
            for (int i = 0; i < d; ++i) ttheta[i] = std::log(trial[i]);
            const double ft = obj.at_log(ttheta);
            if (std::isfinite(ft)) {
                std::vector<double> Ft;
                try {
                    Ft = log_gradient(obj, ttheta, cfg.fd_step);
                } catch (const Error&) {
                    Ft.clear();
                }
                if (!Ft.empty() && norm2(Ft) < norm2(F)) {
                    theta = ttheta;
                    F = Ft;
                    f = ft;
                    accepted = true;
                    lambda = std::min(1.0, 2.0 * lambda);
                    mu = std::max(mu / 3.0, 1e-300);
                    break;
                }
            }
            if (attempt % 2 == 0) lambda *= 0.5;
            else mu *= 8.0;
        }
        if (!accepted) break;
        record();
        std::vector<double> cur(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) cur[i] = std::exp(theta[i]);
        if (any_c_above(lay, cur, cfg.c_cap)) {
            sol.runaway = true;
            ++it;
            break;
        }
    }

    std::vector<double> cur(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) cur[i] = std::exp(theta[i]);
    unpack(lay, cur, sol.params, sol.aux);
    sol.value = f;
    sol.residual_norm = max_abs(F);
    sol.iterations = it;
    const auto pinned = at_floor(lay, cur);
    const bool c_collapse = any_c_below(lay, cur, kDegenerateC);
    sol.degenerate = c_collapse || std::find(pinned.begin(), pinned.end(), true) != pinned.end();
    sol.converged = sol.residual_norm <= cfg.tol && !sol.runaway;
    if (sol.degenerate && !sol.runaway) {
        // Elasticities vanish only linearly as c -> 0, and coordinates pinned at a
        // floor are boundary limits; judge the collapse on the free aux alone.
        double aux_res = 0.0;
        for (std::size_t i = 0; i < F.size(); ++i) {
            const bool lifted = i < std::size_t(lay.lifted());
            if (pinned[i] || (lifted && c_collapse)) continue;
            aux_res = std::max(aux_res, std::abs(F[i]));
        }
        sol.converged = aux_res <= cfg.tol;
        if (!sol.converged) {
            // LM stalls once c drifts along the collapse; finish aux at the frozen params.
            const auto polished = solve_aux(model, lay.config, sol.params, sol.aux, x, y, cfg);
            const double v = obj.at_log([&] {
                auto t = pack(lay, sol.params, polished.aux);
                for (auto& e : t) e = std::log(e);
                return t;
            }());
            if (polished.residual_norm < aux_res && std::isfinite(v)) {
                sol.aux = polished.aux;
                sol.value = v;
                sol.converged = polished.converged;
            }
        }
    }
    return sol;
}

bool better(const SaddleSolution& a, const SaddleSolution& b) {
    // usable > runaway > collapsed onto the lower configuration > unconverged
    auto tier = [](const SaddleSolution& s) {
        if (s.converged && !s.degenerate) return 3;
        if (s.runaway) return 2;
        return s.converged ? 1 : 0;
    };
    if (tier(a) != tier(b)) return tier(a) > tier(b);
    const bool ua = tier(a) == 3;
    if (ua) {
        if (std::abs(a.value - b.value) > 1e-12) return a.value > b.value;
        if (a.residual_norm != b.residual_norm) return a.residual_norm < b.residual_norm;
    } else {
        if (a.residual_norm != b.residual_norm) return a.residual_norm < b.residual_norm;
        if (a.value != b.value) return a.value > b.value;
    }
    if (a.params.p != b.params.p) return a.params.p < b.params.p;
    if (a.params.q != b.params.q) return a.params.q < b.params.q;
    return a.params.c < b.params.c;
}

} // namespace

const char* to_string(LiftConfig config) {
    switch (config) {
    case LiftConfig::NonLifted: return "non_lifted";
    case LiftConfig::PartiallyLifted: return "partially_lifted";
    case LiftConfig::FullyLifted: return "fully_lifted";
    }
    return "";
}

LiftConfig lift_config_from_string(const std::string& name) {
    if (name == "non_lifted") return LiftConfig::NonLifted;
    if (name == "partially_lifted") return LiftConfig::PartiallyLifted;
    if (name == "fully_lifted") return LiftConfig::FullyLifted;
    throw Error(ErrorCode::ConfigError, "unknown lifting configuration '" + name + "'");
}

ExponentMode exponent_mode(LiftConfig config) {
    return config == LiftConfig::NonLifted ? ExponentMode::NonLiftedLimit : ExponentMode::Lifted;
}

std::vector<std::string> unknown_names(const ModelSpec& model, LiftConfig config, int r) {
    const Layout lay = layout_for(model, config, r);
    std::vector<std::string> names;
    if (config == LiftConfig::PartiallyLifted) names.push_back("c2");
    if (config == LiftConfig::FullyLifted) {
        for (const char* v : {"p", "q", "c"})
            for (int k = 2; k <= lay.r; ++k) names.push_back(std::string(v) + std::to_string(k));
    }
    if (lay.naux == 2) names.push_back("gamma_x");
    names.push_back("gamma_y");
    return names;
}

double stationary_objective(const ModelSpec& model, LiftConfig config, const LiftingParams& params,
                            std::span<const double> aux, double x, double y, const SolverConfig& cfg) {
    EvalOptions opts = cfg.eval;
    opts.quad_nodes = cfg.quad_nodes;
    opts.adaptive = false;
    try {
        const double v = psi_rd(model, params, exponent_mode(config), aux, x, y, opts).value;
        return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NonpositiveAux) return std::numeric_limits<double>::quiet_NaN();
        throw;
    }
}

std::vector<double> residuals(const ModelSpec& model, LiftConfig config, const LiftingParams& params,
                              std::span<const double> aux, double x, double y, const SolverConfig& cfg) {
    validate_params(params, exponent_mode(config));
    const Layout lay = layout_for(model, config, params.r);
    if (int(aux.size()) != lay.naux) throw Error(ErrorCode::DimensionMismatch, "wrong number of aux scalars");
    const std::vector<double> u = pack(lay, params, aux);
    std::vector<double> theta(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) theta[i] = std::log(u[i]);
    const Objective obj{model, lay, x, y, cfg};
    return log_gradient(obj, theta, cfg.fd_step);
}

AuxSolution solve_aux(const ModelSpec& model, LiftConfig config, const LiftingParams& params,
                      std::vector<double> aux, double x, double y, const SolverConfig& cfg) {
    const int na = int(aux.size());
    auto aux_res = [&](const std::vector<double>& a) {
        const auto F = residuals(model, config, params, a, x, y, cfg);
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(F.data() + F.size() - na, na));
    };
    AuxSolution out;
    Eigen::VectorXd F = aux_res(aux);
    constexpr double h = 1e-4;
    for (int it = 0; it < cfg.max_iter && F.cwiseAbs().maxCoeff() > cfg.tol; ++it) {
        Eigen::MatrixXd J(na, na);
        for (int j = 0; j < na; ++j) {
            auto up = aux, dn = aux;
            up[j] *= std::exp(h);
            dn[j] *= std::exp(-h);
            J.col(j) = (aux_res(up) - aux_res(dn)) / (2 * h);
        }
        const Eigen::VectorXd d = J.fullPivLu().solve(-F);
        double step = 1.0;
        bool moved = false;
        for (int attempt = 0; attempt < 30 && !moved; ++attempt, step *= 0.5) {
            auto trial = aux;
            for (int j = 0; j < na; ++j) trial[j] *= std::exp(std::clamp(step * d[j], -1.0, 1.0));
            Eigen::VectorXd Ft;
            try {
                Ft = aux_res(trial);
            } catch (const Error&) {
                continue;
            }
            if (Ft.allFinite() && Ft.norm() < F.norm()) {
                aux = trial;
                F = Ft;
                moved = true;
            }
        }
        if (!moved) break;
    }
    out.aux = aux;
    out.residual_norm = F.cwiseAbs().maxCoeff();
    out.converged = out.residual_norm <= cfg.tol;
    return out;
}

SaddleSolution solve_stationary(const ModelSpec& model, LiftConfig config, const std::vector<Start>& starts,
                                double x, double y, const SolverConfig& cfg) {
    model.validate();
    if (starts.empty()) throw Error(ErrorCode::InvalidArgument, "at least one start is required");
    const int r = config == LiftConfig::FullyLifted ? starts.front().params.r : 2;
    const Layout lay = layout_for(model, config, r);
    std::optional<SaddleSolution> best;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        SaddleSolution s;
        try {
            s = solve_one(model, lay, starts[i], x, y, cfg);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::StepOutOfDomain && starts.size() > 1) continue;
            throw;
        }
        s.start_index = int(i);
        if (!best || better(s, *best)) best = std::move(s);
    }
    if (!best) throw Error(ErrorCode::StepOutOfDomain, "every start left the domain");
    return *best;
}

NormSearchResult minmax_norms(const std::function<double(double, double)>& value, double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo)) throw Error(ErrorCode::BadBracket, "norm bracket must satisfy 0 < lo < hi");
    const double a0 = std::log(lo), b0 = std::log(hi);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    const double edge = 1e-4 * (b0 - a0);

    // Golden-section extremum of g over [a0, b0] (sign = +1 max, -1 min); returns (arg, value).
    auto golden = [&](const std::function<double(double)>& g, double sign) {
        double a = a0, b = b0;
        double c = b - ratio * (b - a), d = a + ratio * (b - a);
        double gc = sign * g(c), gd = sign * g(d);
        while (b - a > 1e-7) {
            if (gc > gd) {
                b = d;
                d = c;
                gd = gc;
                c = b - ratio * (b - a);
                gc = sign * g(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + ratio * (b - a);
                gd = sign * g(d);
            }
        }
        const double arg = 0.5 * (a + b);
        if (arg - a0 < edge || b0 - arg < edge)
            throw Error(ErrorCode::BracketFailure, "optimum sits on the edge of the norm bracket");
        return std::pair<double, double>(arg, sign * g(arg));
    };

    double y_at_best = 1.0;
    auto inner = [&](double lx) {
        const auto [ly, v] = golden([&](double lyy) { return value(std::exp(lx), std::exp(lyy)); }, 1.0);
        y_at_best = ly;
        return v;
    };
    const auto [lx, v] = golden(inner, -1.0);
    inner(lx);
    NormSearchResult out;
    out.x = std::exp(lx);
    out.y = std::exp(y_at_best);
    out.value = v;
    return out;
}

NormSearchResult minmax_norms(const ModelSpec& model, LiftConfig config, const std::vector<Start>& starts,
                              const SolverConfig& cfg) {
    NormSearchResult out;
    if (model.fixed_norms) {
        out.solution = solve_stationary(model, config, starts, 1.0, 1.0, cfg);
        out.value = out.solution.value;
        return out;
    }
    std::vector<Start> warm = starts;
    auto value = [&](double x, double y) {
        const SaddleSolution s = solve_stationary(model, config, warm, x, y, cfg);
        if (s.converged) warm.insert(warm.begin(), Start{s.params, s.aux});
        if (warm.size() > starts.size() + 1) warm.resize(starts.size() + 1);
        return s.value;
    };
    out = minmax_norms(value);
    out.solution = solve_stationary(model, config, warm, out.x, out.y, cfg);
    out.value = out.solution.value;
    return out;
}

void to_json(nlohmann::json& j, const SaddleSolution& solution) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : solution.trace)
        trace.push_back({{"unknowns", t.unknowns}, {"residual_norm", t.residual_norm}, {"value", t.value}});
    j = nlohmann::json{{"params", solution.params},
                       {"aux", solution.aux},
                       {"config", to_string(solution.config)},
                       {"value", solution.value},
                       {"residual_norm", solution.residual_norm},
                       {"iterations", solution.iterations},
                       {"converged", solution.converged},
                       {"runaway", solution.runaway},
                       {"degenerate", solution.degenerate},
                       {"start_index", solution.start_index},
                       {"selection", solution.selection},
                       {"trace", trace}};
}

void to_json(nlohmann::json& j, const SolverConfig& cfg) {
    j = nlohmann::json{{"tol", cfg.tol},          {"max_iter", cfg.max_iter},     {"damping", cfg.damping},
                       {"fd_step", cfg.fd_step},  {"quad_nodes", cfg.quad_nodes}, {"c_cap", cfg.c_cap}};
}

void from_json(const nlohmann::json& j, SolverConfig& cfg) {
    cfg.tol = j.value("tol", cfg.tol);
    cfg.max_iter = j.value("max_iter", cfg.max_iter);
    cfg.damping = j.value("damping", cfg.damping);
    cfg.fd_step = j.value("fd_step", cfg.fd_step);
    cfg.quad_nodes = j.value("quad_nodes", cfg.quad_nodes);
    cfg.c_cap = j.value("c_cap", cfg.c_cap);
    if (!(cfg.tol > 0.0) || cfg.max_iter < 0 || !(cfg.damping > 0.0 && cfg.damping <= 1.0) ||
        !(cfg.fd_step > 0.0) || cfg.quad_nodes < 2 || !(cfg.c_cap > 0.0))
        throw Error(ErrorCode::ConfigError, "solver settings out of range");
}

} // namespace flrdt
