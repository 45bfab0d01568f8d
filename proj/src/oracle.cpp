#include "flrdt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>
#include <random>

#include "flrdt/error.hpp"
#include "flrdt/parallel.hpp"
#include "flrdt/rng.hpp"

namespace flrdt {

InstanceSample sample_instance(int n, int m1, int m2, double kappa, std::uint64_t seed) {
    if (n < 1 || m1 < 0 || m2 < 0 || m1 + m2 < 1)
        throw Error(ErrorCode::InvalidArgument, "need n >= 1 and m1 + m2 >= 1");
    InstanceSample out;
    out.G.resize(m1 + m2, n);
    auto eng = make_engine(seed, 0, 0);
    std::normal_distribution<double> normal;
    for (int i = 0; i < m1 + m2; ++i)
        for (int j = 0; j < n; ++j) out.G(i, j) = normal(eng);
    out.m1 = m1;
    out.m2 = m2;
    out.a.assign(std::size_t(m1), 0.0);
    out.b.assign(std::size_t(m2), -kappa);
    out.kappa = kappa;
    out.seed = seed;
    return out;
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::Feasible: return "feasible";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Unknown: return "unknown";
    }
    return "";
}

// ---- Wolfe's min-norm point -------------------------------------------------

namespace {

// Upper-triangular R with R^T R = K + 1 1^T over the active set, updated in place.
class ActiveFactor {
public:
    explicit ActiveFactor(int cap) : R_(Eigen::MatrixXd::Zero(cap, cap)) {}

    int size() const { return s_; }

    // col = P_S^T p + 1, diag = |p|^2 + 1. False if p is affinely dependent on S.
    bool append(const Eigen::VectorXd& col, double diag) {
        Eigen::VectorXd r(s_);
        if (s_ > 0)
            r = R_.topLeftCorner(s_, s_).transpose().triangularView<Eigen::Lower>().solve(col.head(s_));
        const double d2 = diag - (s_ > 0 ? r.squaredNorm() : 0.0);
        if (!(d2 > 1e-12 * diag)) return false;
        if (s_ > 0) R_.col(s_).head(s_) = r;
        R_(s_, s_) = std::sqrt(d2);
        ++s_;
        return true;
    }

    void remove(int i) {
        for (int c = i; c < s_ - 1; ++c) R_.col(c).head(s_) = R_.col(c + 1).head(s_);
        R_.col(s_ - 1).setZero();
        for (int k = i; k < s_ - 1; ++k) {
            const double a = R_(k, k), b = R_(k + 1, k);
            const double h = std::hypot(a, b);
            if (h == 0.0) continue;
            const double c = a / h, s = b / h;
            for (int col = k; col < s_ - 1; ++col) {
                const double u = R_(k, col), v = R_(k + 1, col);
                R_(k, col) = c * u + s * v;
                R_(k + 1, col) = -s * u + c * v;
            }
        }
        R_.row(s_ - 1).setZero();
        --s_;
    }

    // Affine minimizer weights: (K + 1 1^T)^{-1} 1, normalized to sum 1.
    Eigen::VectorXd affine_weights() const {
        const auto R = R_.topLeftCorner(s_, s_);
        Eigen::VectorXd z = R.transpose().triangularView<Eigen::Lower>().solve(Eigen::VectorXd::Ones(s_));
        Eigen::VectorXd w = R.triangularView<Eigen::Upper>().solve(z);
        return w / w.sum();
    }

private:
    Eigen::MatrixXd R_;
    int s_ = 0;
};

} // namespace

MinNormPoint min_norm_point(const Eigen::MatrixXd& P) {
    const int d = int(P.rows()), m = int(P.cols());
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "need at least one point");
    const Eigen::VectorXd sq = P.colwise().squaredNorm().transpose();
    const double scale = std::max(sq.maxCoeff(), 1e-300);

    ActiveFactor fac(std::min(d, m) + 2);
    std::vector<int> S;
    std::vector<double> lambda;
    int j0 = 0;
    sq.minCoeff(&j0);
    fac.append(Eigen::VectorXd::Zero(0), sq[j0] + 1.0);
    S.push_back(j0);
    lambda.push_back(1.0);
    Eigen::VectorXd x = P.col(j0);

    int iter = 0;
    const int max_iter = 50 * (m + d) + 100;
    while (iter++ < max_iter) {
        const Eigen::VectorXd proj = P.transpose() * x;
        int j = 0;
        proj.minCoeff(&j);
        const double xx = x.squaredNorm();
        if (proj[j] > xx - 1e-13 * scale) break;
        if (std::find(S.begin(), S.end(), j) != S.end()) break;
        Eigen::VectorXd col(S.size());
        for (std::size_t i = 0; i < S.size(); ++i) col[i] = P.col(S[i]).dot(P.col(j)) + 1.0;
        if (!fac.append(col, sq[j] + 1.0)) break;
        S.push_back(j);
        lambda.push_back(0.0);

        for (;;) {
            const Eigen::VectorXd alpha = fac.affine_weights();
            if (alpha.minCoeff() > 1e-14) {
                for (std::size_t i = 0; i < S.size(); ++i) lambda[i] = alpha[i];
                break;
            }
            double theta = 1.0;
            for (std::size_t i = 0; i < S.size(); ++i)
                if (alpha[i] <= 1e-14) theta = std::min(theta, lambda[i] / (lambda[i] - alpha[i]));
            for (std::size_t i = 0; i < S.size(); ++i) lambda[i] = theta * alpha[i] + (1.0 - theta) * lambda[i];
            bool removed = false;
            for (int i = int(S.size()) - 1; i >= 0; --i) {
                if (lambda[i] <= 1e-14) {
                    fac.remove(i);
                    S.erase(S.begin() + i);
                    lambda.erase(lambda.begin() + i);
                    removed = true;
                }
            }
            if (!removed) {
                // Numerical safety: drop the smallest weight.
                const auto it = std::min_element(lambda.begin(), lambda.end());
                const int i = int(it - lambda.begin());
                fac.remove(i);
                S.erase(S.begin() + i);
                lambda.erase(lambda.begin() + i);
            }
            const double tot = std::accumulate(lambda.begin(), lambda.end(), 0.0);
            for (auto& l : lambda) l /= tot;
        }
        x.setZero();
        for (std::size_t i = 0; i < S.size(); ++i) x += lambda[i] * P.col(S[i]);
    }

    MinNormPoint out;
    out.point = x;
    out.weights = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < S.size(); ++i) out.weights[S[i]] = lambda[i];
    out.iterations = iter;
    return out;
}

// ---- feasibility ------------------------------------------------------------------

namespace {

FeasibilityReport sphere_check(const InstanceSample& inst) {
    FeasibilityReport rep;
    const int n = inst.n();
    const double kappa = inst.kappa;
    for (double v : inst.a)
        if (v != 0.0) return rep; // Unknown: inhomogeneous equalities
    for (double v : inst.b)
        if (v != -kappa) return rep;
    if (kappa < 0.0) return rep; // nonconvex: refuse
    if (inst.m2 == 0) {
        rep.verdict = inst.m1 < n ? Verdict::Feasible : Verdict::Infeasible;
        return rep;
    }

    // Restrict to the null space of the equality rows.
    Eigen::MatrixXd N = Eigen::MatrixXd::Identity(n, n);
    if (inst.m1 > 0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(inst.G.topRows(inst.m1));
        if (lu.rank() >= n) {
            rep.verdict = Verdict::Infeasible;
            return rep;
        }
        N = lu.kernel();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(N);
        N = qr.householderQ() * Eigen::MatrixXd::Identity(n, N.cols());
    }
    // Constraint rows c_i = -B_i; feasible iff max_{|z|<=1} min_i c_i^T N z >= kappa.
    const Eigen::MatrixXd C = -inst.G.bottomRows(inst.m2) * N; // m2 x d
    const MinNormPoint mnp = min_norm_point(C.transpose());
    const double t = mnp.point.norm();
    rep.margin = t;
    const double row_scale = std::sqrt(C.rowwise().squaredNorm().maxCoeff());
    const double tol = 1e-8 * std::max(1.0, row_scale);
    const bool feasible = kappa > 0.0 ? t >= kappa - 1e-8 : t > tol;
    if (feasible) {
        const Eigen::VectorXd z = mnp.point / t;
        const Eigen::VectorXd x = N * z;
        rep.witness.assign(x.data(), x.data() + x.size());
        rep.verdict = Verdict::Feasible;
    } else {
        rep.dual.assign(mnp.weights.data(), mnp.weights.data() + mnp.weights.size());
        rep.verdict = Verdict::Infeasible;
    }
    return rep;
}

FeasibilityReport binary_check(const InstanceSample& inst) {
    const int n = inst.n();
    if (n > 25) throw Error(ErrorCode::SizeLimitExceeded, "binary exhaustive search is capped at n = 25");
    FeasibilityReport rep;
    const int m = inst.m1 + inst.m2;
    const double rt = std::sqrt(double(n));
    // Work with s in {+-1}^n; x = s / sqrt(n).
    Eigen::VectorXd s = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd v = inst.G * s;
    std::vector<double> target(static_cast<std::size_t>(m));
    for (int i = 0; i < inst.m1; ++i) target[i] = inst.a[i] * rt;
    for (int i = 0; i < inst.m2; ++i) target[inst.m1 + i] = inst.b[i] * rt;

    auto ok = [&]() {
        for (int i = 0; i < inst.m1; ++i)
            if (std::abs(v[i] - target[i]) > 1e-12 * rt) return false;
        for (int i = inst.m1; i < m; ++i)
            if (v[i] > target[i]) return false;
        return true;
    };
    const unsigned long long total = 1ULL << n;
    for (unsigned long long k = 0; k < total; ++k) {
        if (k > 0) {
            const int j = __builtin_ctzll(k);
            v -= (2.0 * s[j]) * inst.G.col(j);
            s[j] = -s[j];
            if ((k & 0xFFFF) == 0) v = inst.G * s;
        }
        ++rep.patterns_checked;
        if (ok()) {
            rep.verdict = Verdict::Feasible;
            for (int i = 0; i < n; ++i) rep.witness.push_back(s[i] / rt);
            return rep;
        }
    }
    rep.verdict = Verdict::Infeasible;
    return rep;
}

} // namespace

FeasibilityReport feasibility_check(const InstanceSample& instance, XFamily x_family) {
    if (int(instance.a.size()) != instance.m1 || int(instance.b.size()) != instance.m2 ||
        instance.G.rows() != instance.m1 + instance.m2)
        throw Error(ErrorCode::DimensionMismatch, "instance offsets do not match the row split");
    switch (x_family) {
    case XFamily::Sphere: return sphere_check(instance);
    case XFamily::BinaryCorners: return binary_check(instance);
    default: throw Error(ErrorCode::UnsupportedFamily, "feasibility oracle supports Sphere and BinaryCorners");
    }
}

// ---- empirical transition ----------------------------------------------------

std::pair<double, double> wilson_interval(int successes, int trials, double z) {
    if (trials <= 0) throw Error(ErrorCode::InvalidArgument, "trials must be positive");
    const double nn = trials, p = successes / nn, z2 = z * z;
    const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
    const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
    // The bounds touch 0 and 1 exactly at the extreme counts.
    return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

double transition_crossing(const std::vector<TransitionPoint>& points) {
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double f0 = points[i].frequency(), f1 = points[i + 1].frequency();
        if (f0 >= 0.5 && f1 < 0.5)
            return points[i].alpha + (f0 - 0.5) * (points[i + 1].alpha - points[i].alpha) / (f0 - f1);
    }
    throw Error(ErrorCode::NoCrossing, "feasibility frequencies do not straddle 1/2");
}

TransitionResult empirical_transition(PerceptronFamily family, int n, const std::vector<double>& alpha_grid,
                                      int trials, std::uint64_t seed, double kappa) {
    if (trials < 50) throw Error(ErrorCode::InvalidArgument, "need at least 50 trials per grid point");
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be positive");
    if (family == PerceptronFamily::Spherical && kappa < 0.0)
        throw Error(ErrorCode::InvalidArgument, "spherical kappa < 0 is nonconvex; the oracle refuses");
    for (std::size_t i = 1; i < alpha_grid.size(); ++i)
        if (!(alpha_grid[i] > alpha_grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "alpha grid must increase");
    const XFamily xf = family == PerceptronFamily::Spherical ? XFamily::Sphere : XFamily::BinaryCorners;
    TransitionResult out;
    for (std::size_t g = 0; g < alpha_grid.size(); ++g) {
        TransitionPoint pt;
        pt.alpha = alpha_grid[g];
        pt.m = std::max(1, int(std::lround(pt.alpha * n)));
        std::vector<Verdict> verdicts(static_cast<std::size_t>(trials));
        parallel_for(verdicts.size(), [&](std::size_t t) {
            const auto inst = sample_instance(n, 0, pt.m, kappa, stream_seed(seed, g, t));
            verdicts[t] = feasibility_check(inst, xf).verdict;
        });
        for (Verdict v : verdicts) {
            if (v == Verdict::Unknown)
                throw Error(ErrorCode::InvalidArgument, "oracle returned Unknown inside a transition run");
            pt.feasible += v == Verdict::Feasible;
            ++pt.trials;
        }
        std::tie(pt.wilson_lo, pt.wilson_hi) = wilson_interval(pt.feasible, pt.trials);
        out.points.push_back(pt);
    }
    for (std::size_t i = 1; i < out.points.size(); ++i)
        if (out.points[i].wilson_lo > out.points[i - 1].wilson_hi) out.monotone = false;
    try {
        out.crossing = transition_crossing(out.points);
    } catch (const Error&) {
        out.crossing.reset();
    }
    return out;
}

double exhaustive_primal(const std::vector<Eigen::VectorXd>& X, const std::vector<Eigen::VectorXd>& Y,
                         const Eigen::MatrixXd& G, const Eigen::VectorXd& g, const std::vector<double>& f) {
    if (X.empty() || Y.empty()) throw Error(ErrorCode::InvalidArgument, "X and Y must be nonempty");
    if (double(X.size()) * double(Y.size()) > 1e6)
        throw Error(ErrorCode::SizeLimitExceeded, "|X| * |Y| exceeds 1e6");
    if (!f.empty() && f.size() != X.size()) throw Error(ErrorCode::DimensionMismatch, "f needs one value per x");
    if (g.size() != G.rows()) throw Error(ErrorCode::DimensionMismatch, "offset length must equal rows of G");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (X[i].size() != G.cols()) throw Error(ErrorCode::DimensionMismatch, "x has the wrong length", int(i));
        const Eigen::VectorXd field = G * X[i] + g;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < Y.size(); ++j) {
            if (Y[j].size() != G.rows()) throw Error(ErrorCode::DimensionMismatch, "y has the wrong length", int(j));
            worst = std::max(worst, Y[j].dot(field));
        }
        best = std::min(best, (f.empty() ? 0.0 : f[i]) + worst);
    }
    return best;
}

void to_json(nlohmann::json& j, const TransitionPoint& point) {
    j = nlohmann::json{{"alpha", point.alpha},         {"m", point.m},
                       {"feasible_count", point.feasible}, {"trials", point.trials},
                       {"wilson_lo", point.wilson_lo}, {"wilson_hi", point.wilson_hi}};
}

void to_json(nlohmann::json& j, const TransitionResult& result) {
    j = nlohmann::json{{"points", result.points},
                       {"crossing", result.crossing ? nlohmann::json(*result.crossing) : nlohmann::json(nullptr)},
                       {"monotone", result.monotone}};
}

} // namespace flrdt
