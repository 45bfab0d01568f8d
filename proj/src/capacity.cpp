#include "flrdt/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "flrdt/error.hpp"

namespace flrdt {

const char* to_string(PerceptronFamily family) {
    return family == PerceptronFamily::Spherical ? "spherical" : "binary";
}

PerceptronFamily perceptron_family_from_string(const std::string& name) {
    if (name == "spherical") return PerceptronFamily::Spherical;
    if (name == "binary") return PerceptronFamily::Binary;
    throw Error(ErrorCode::ConfigError, "unknown perceptron family '" + name + "'");
}

ModelSpec perceptron_model(PerceptronFamily family, double alpha, double kappa) {
    return ModelSpec::perceptron(family == PerceptronFamily::Spherical ? XFamily::Sphere : XFamily::BinaryCorners,
                                 alpha, kappa);
}

namespace {

bool usable(const SaddleSolution& s) { return s.converged && !s.degenerate; }

// Embeds a level-(r-1) fully lifted point at level r by splitting its last interior level.
LiftingParams embed(const LiftingParams& lower, double split) {
    const int r = lower.r + 1;
    LiftingParams out = LiftingParams::uniform_ladder(r, 1.0);
    for (int k = 2; k <= lower.r; ++k) {
        out.p[k] = lower.p[k];
        out.q[k] = lower.q[k];
        out.c[k] = lower.c[k];
    }
    const int last = lower.r;
    out.p[r] = lower.p[last] * split;
    out.q[r] = lower.q[last] * split;
    out.c[r] = lower.c[last] * 2.0;
    return out;
}

LiftingParams embedded_partial(int r, double c2) {
    LiftingParams out = LiftingParams::uniform_ladder(r, c2);
    for (int k = 2; k <= r; ++k) out.p[k] = out.q[k] = 1e-3 / k;
    return out;
}

std::vector<Start> heuristic_starts(PerceptronFamily family, int r, std::size_t naux) {
    std::vector<Start> out;
    auto make = [&](double p2, double q2, double c2, std::vector<double> aux) {
        LiftingParams lp = LiftingParams::uniform_ladder(r, c2);
        for (int k = 2; k <= r; ++k) {
            lp.p[k] = p2 / (k - 1);
            lp.q[k] = q2 / (k - 1);
            lp.c[k] = c2 * (k - 1);
        }
        if (aux.size() == naux) out.push_back({lp, aux});
    };
    if (family == PerceptronFamily::Binary) {
        make(0.55, 0.02, 12.0, {1e-3});
        make(0.5, 0.05, 6.0, {5e-3});
        make(0.6, 0.005, 25.0, {2e-4});
    } else {
        make(0.85, 0.6, 6.0, {3.0, 0.3});
        make(0.6, 0.3, 3.0, {2.0, 0.5});
    }
    return out;
}

struct Candidate {
    double value;
    LiftConfig source;
};

AlphaEvaluation evaluate(PerceptronFamily family, double kappa, double alpha, const CapacityConfig& cfg,
                         const std::vector<Start>& warm, int escalation) {
    const ModelSpec model = perceptron_model(family, alpha, kappa);
    SolverConfig scfg = cfg.solver;
    for (int e = 0; e < escalation; ++e) {
        scfg.max_iter *= 2;
        scfg.quad_nodes *= 2;
    }
    const std::size_t naux = std::size_t(aux_count(model));
    AlphaEvaluation out;
    out.alpha = alpha;
    std::vector<Candidate> cands;

    std::vector<Start> nl_starts;
    if (naux == 2) {
        nl_starts.push_back({LiftingParams::non_lifted(), {1.0, 1.0}});
        nl_starts.push_back({LiftingParams::non_lifted(), {1.0, std::sqrt(alpha)}});
    } else {
        nl_starts.push_back({LiftingParams::non_lifted(), {1.0}});
        nl_starts.push_back({LiftingParams::non_lifted(), {std::sqrt(alpha)}});
    }
    const SaddleSolution nl = solve_stationary(model, LiftConfig::NonLifted, nl_starts, 1.0, 1.0, scfg);
    if (usable(nl)) {
        cands.push_back({nl.value, LiftConfig::NonLifted});
        out.candidates.push_back(nl);
    }
    std::optional<SaddleSolution> winner;
    if (cfg.lift == LiftConfig::NonLifted) winner = nl;

    std::optional<SaddleSolution> part;
    if (cfg.lift != LiftConfig::NonLifted) {
        std::vector<Start> starts;
        for (const auto& w : warm)
            if (cfg.lift == LiftConfig::PartiallyLifted) starts.push_back(w);
        for (double c2 : {0.3, 1.0, 3.0, 10.0}) starts.push_back({LiftingParams::partially_lifted(c2), nl.aux});
        part = solve_stationary(model, LiftConfig::PartiallyLifted, starts, 1.0, 1.0, scfg);
        if (usable(*part)) {
            cands.push_back({part->value, LiftConfig::PartiallyLifted});
            out.candidates.push_back(*part);
        } else if (part->runaway) {
            out.note += "partially lifted stationary point at c2 -> infinity; ";
        }
        if (cfg.lift == LiftConfig::PartiallyLifted) winner = part;
    }

    bool requested_resolved = true;
    if (cfg.lift == LiftConfig::FullyLifted) {
        const int r = cfg.r;
        std::vector<Start> starts;
        for (const auto& w : warm)
            if (w.params.r == r) starts.push_back(w);
        std::optional<SaddleSolution> lower_fl;
        if (r >= 3) {
            CapacityConfig lower = cfg;
            lower.r = r - 1;
            std::vector<Start> lower_warm;
            for (const auto& w : warm)
                if (w.params.r == r - 1) lower_warm.push_back(w);
            const AlphaEvaluation le = evaluate(family, kappa, alpha, lower, lower_warm, escalation);
            for (const auto& c : le.candidates)
                if (c.config == LiftConfig::FullyLifted) {
                    cands.push_back({c.value, LiftConfig::FullyLifted});
                    out.candidates.push_back(c);
                    lower_fl = c;
                }
            if (lower_fl) {
                starts.push_back({embed(lower_fl->params, 0.5), lower_fl->aux});
                starts.push_back({embed(lower_fl->params, 0.05), lower_fl->aux});
            }
        }
        const double c2 = part && usable(*part) ? part->params.c[2] : 1.0;
        const auto aux_p = part && usable(*part) ? part->aux : nl.aux;
        starts.push_back({embedded_partial(r, c2), aux_p});
        starts.push_back({LiftingParams::uniform_ladder(r, 1.0), nl.aux});
        starts.push_back({LiftingParams::uniform_ladder(r, 5.0), nl.aux});
        for (auto& s : heuristic_starts(family, r, naux)) starts.push_back(std::move(s));

        const SaddleSolution fl = solve_stationary(model, LiftConfig::FullyLifted, starts, 1.0, 1.0, scfg);
        winner = fl;
        if (usable(fl)) {
            cands.push_back({fl.value, LiftConfig::FullyLifted});
            out.candidates.push_back(fl);
        } else if (fl.runaway) {
            out.note += "fully lifted stationary point at c -> infinity; ";
        } else if (!fl.converged && !lower_fl) {
            requested_resolved = false;
        }
    } else if (cfg.lift == LiftConfig::PartiallyLifted) {
        requested_resolved = part->converged || part->runaway;
    } else {
        requested_resolved = usable(nl);
    }

    if (cands.empty()) {
        out.flagged = true;
        out.note += "no stationary point converged";
        out.value.value = nl.value;
        out.solution = winner;
        return out;
    }
    const auto best = std::max_element(cands.begin(), cands.end(),
                                       [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
    out.value.value = best->value;
    out.value.method = EvalMethod::SeparableQuadrature;
    out.value.samples_or_nodes = scfg.quad_nodes;
    out.source = best->source;
    out.solution = winner;
    if (!requested_resolved) {
        out.flagged = true;
        out.note += "requested configuration did not converge";
    }
    return out;
}

double interpolate_root(double lo, double vlo, double hi, double vhi) {
    if (vhi > vlo) {
        const double a = lo - vlo * (hi - lo) / (vhi - vlo);
        if (a > lo && a < hi) return a;
    }
    return 0.5 * (lo + hi);
}

} // namespace

AlphaEvaluation dual_value_at_alpha(PerceptronFamily family, double kappa, double alpha, const CapacityConfig& cfg,
                                    const std::vector<Start>& warm) {
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
    return evaluate(family, kappa, alpha, cfg, warm, 0);
}

CapacityResult capacity_bisect(const AlphaEvaluator& eval, double lo, double hi, double tol_alpha,
                               int max_bisections) {
    if (!(lo < hi) || !(lo > 0.0)) throw Error(ErrorCode::BadBracket, "bracket must satisfy 0 < lo < hi");
    if (!(tol_alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol_alpha must be positive");
    CapacityResult res;

    // Returns +1 / -1, or 0 when the sign stays ambiguous or the point is flagged.
    auto test = [&](double alpha, AlphaEvaluation& kept) {
        for (int esc = 0; esc <= 1; ++esc) {
            AlphaEvaluation e = eval(alpha, esc);
            const bool noisy = e.value.std_error > 0.0 && std::abs(e.value.value) <= 3.0 * e.value.std_error;
            kept = e;
            if (!noisy && !e.flagged) break;
        }
        res.trace.push_back(kept);
        if (kept.flagged) return 0;
        if (kept.value.std_error > 0.0 && std::abs(kept.value.value) <= 3.0 * kept.value.std_error) return 0;
        return kept.value.value > 0.0 ? 1 : -1;
    };

    AlphaEvaluation elo, ehi;
    const int slo = test(lo, elo);
    const int shi = test(hi, ehi);
    if (slo == 0 || shi == 0) {
        if ((slo == 0 && !elo.flagged) || (shi == 0 && !ehi.flagged))
            throw Error(ErrorCode::NoisyBoundary, "sign ambiguous at a bracket end after escalation");
        res.flagged = true;
        res.note = "NonConvergence at a bracket end";
        res.lo = lo;
        res.hi = hi;
        return res;
    }
    if (!(slo < 0 && shi > 0))
        throw Error(ErrorCode::BadBracket, "dual value must be <= 0 at lo and > 0 at hi");

    double vlo = elo.value.value, vhi = ehi.value.value;
    for (int it = 0; it < max_bisections && hi - lo > tol_alpha; ++it) {
        const double mid = 0.5 * (lo + hi);
        AlphaEvaluation em;
        const int s = test(mid, em);
        if (s == 0) {
            res.flagged = true;
            res.note = em.flagged ? "NonConvergence at alpha=" + std::to_string(mid)
                                  : "NoisyBoundary at alpha=" + std::to_string(mid);
            break;
        }
        if (s > 0) {
            hi = mid;
            vhi = em.value.value;
        } else {
            lo = mid;
            vlo = em.value.value;
        }
    }
    res.lo = lo;
    res.hi = hi;
    res.alpha_star = interpolate_root(lo, vlo, hi, vhi);

    auto sorted = res.trace;
    std::sort(sorted.begin(), sorted.end(),
              [](const AlphaEvaluation& a, const AlphaEvaluation& b) { return a.alpha < b.alpha; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const double slack = 3.0 * (sorted[i].value.std_error + sorted[i - 1].value.std_error) + 1e-9;
        if (sorted[i].value.value + slack < sorted[i - 1].value.value) res.monotone = false;
    }
    if (!res.monotone) {
        res.flagged = true;
        res.note += (res.note.empty() ? "" : "; ") + std::string("dual value not monotone in alpha");
    }
    return res;
}

namespace {

// Warm starts from the nearest evaluated alpha above, which shares the infeasible-side branch.
class WarmEvaluator {
public:
    WarmEvaluator(PerceptronFamily family, double kappa, const CapacityConfig& cfg, std::vector<Start> seed)
        : family_(family), kappa_(kappa), cfg_(cfg), seed_(std::move(seed)) {}

    AlphaEvaluation operator()(double alpha, int escalation) {
        std::vector<Start> warm;
        auto it = solved_.lower_bound(alpha);
        if (it != solved_.end()) warm.push_back(it->second);
        if (it != solved_.begin()) warm.push_back(std::prev(it)->second);
        for (const auto& s : seed_) warm.push_back(s);
        AlphaEvaluation e = evaluate(family_, kappa_, alpha, cfg_, warm, escalation);
        if (e.solution && e.solution->converged && !e.solution->degenerate && e.solution->config == cfg_.lift)
            solved_[alpha] = Start{e.solution->params, e.solution->aux};
        return e;
    }

    std::optional<Start> last() const {
        if (solved_.empty()) return std::nullopt;
        return solved_.begin()->second;
    }

private:
    PerceptronFamily family_;
    double kappa_;
    CapacityConfig cfg_;
    std::vector<Start> seed_;
    std::map<double, Start> solved_;
};

std::string model_name(PerceptronFamily family, double kappa) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s perceptron, kappa=%.6g", to_string(family), kappa);
    return buf;
}

CapacityResult bisect_with(WarmEvaluator& ev, PerceptronFamily family, double kappa, double lo, double hi,
                           const CapacityConfig& cfg) {
    CapacityResult res = capacity_bisect(std::ref(ev), lo, hi, cfg.tol_alpha, cfg.max_bisections);
    res.r = cfg.lift == LiftConfig::FullyLifted ? cfg.r : 2;
    res.lift = cfg.lift;
    res.model = model_name(family, kappa);
    res.kappa = kappa;
    return res;
}

} // namespace

CapacityResult capacity_bisect(PerceptronFamily family, double kappa, double lo, double hi, const CapacityConfig& cfg) {
    WarmEvaluator ev(family, kappa, cfg, {});
    return bisect_with(ev, family, kappa, lo, hi, cfg);
}

std::pair<double, double> find_bracket(const AlphaEvaluator& eval, double start, double factor, int max_steps) {
    if (!(start > 0.0) || !(factor > 1.0)) throw Error(ErrorCode::InvalidArgument, "bad bracket search settings");
    double a = start;
    const bool up = !(eval(a, 0).value.value > 0.0);
    for (int i = 0; i < max_steps; ++i) {
        const double b = up ? a * factor : a / factor;
        const bool pos = eval(b, 0).value.value > 0.0;
        if (up && pos) return {a, b};
        if (!up && !pos) return {b, a};
        a = b;
    }
    throw Error(ErrorCode::BadBracket, "no sign change found while expanding the bracket");
}

std::vector<CapacityResult> capacity_curve(PerceptronFamily family, const std::vector<double>& kappa_grid,
                                           const CapacityConfig& cfg) {
    for (std::size_t i = 1; i < kappa_grid.size(); ++i)
        if (!(kappa_grid[i] > kappa_grid[i - 1]) && !(kappa_grid[i] < kappa_grid[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "kappa grid must be strictly monotone");
    std::vector<CapacityResult> out;
    std::vector<Start> carry;
    double guess = 2.0;
    for (double kappa : kappa_grid) {
        WarmEvaluator ev(family, kappa, cfg, carry);
        try {
            const auto [lo, hi] = find_bracket(std::ref(ev), guess);
            CapacityResult res = bisect_with(ev, family, kappa, lo, hi, cfg);
            if (std::isfinite(res.alpha_star)) guess = res.alpha_star;
            if (auto s = ev.last()) carry = {*s};
            out.push_back(std::move(res));
        } catch (const Error& e) {
            CapacityResult hole;
            hole.r = cfg.r;
            hole.lift = cfg.lift;
            hole.model = model_name(family, kappa);
            hole.kappa = kappa;
            hole.flagged = true;
            hole.note = e.what();
            out.push_back(std::move(hole));
        }
    }
    return out;
}

void to_json(nlohmann::json& j, const AlphaEvaluation& eval) {
    j = nlohmann::json{{"alpha", eval.alpha},     {"value", eval.value}, {"source", to_string(eval.source)},
                       {"flagged", eval.flagged}, {"note", eval.note}};
    if (eval.solution) {
        const auto& s = *eval.solution;
        j["solution"] = {{"params", s.params},       {"aux", s.aux},
                         {"config", to_string(s.config)}, {"value", s.value},
                         {"residual_norm", s.residual_norm}, {"iterations", s.iterations},
                         {"converged", s.converged}, {"runaway", s.runaway}};
    }
}

void to_json(nlohmann::json& j, const CapacityResult& result) {
    j = nlohmann::json{{"alpha_star", std::isfinite(result.alpha_star) ? nlohmann::json(result.alpha_star)
                                                                        : nlohmann::json(nullptr)},
                       {"lo", result.lo},
                       {"hi", result.hi},
                       {"r", result.r},
                       {"lift", to_string(result.lift)},
                       {"model", result.model},
                       {"kappa", result.kappa},
                       {"method", result.method},
                       {"monotone", result.monotone},
                       {"flagged", result.flagged},
                       {"note", result.note},
                       {"oracle_alpha", result.oracle_alpha ? nlohmann::json(*result.oracle_alpha)
                                                            : nlohmann::json(nullptr)},
                       {"sign_convention", "value > 0 <=> infeasible"},
                       {"trace", result.trace}};
}

} // namespace flrdt
