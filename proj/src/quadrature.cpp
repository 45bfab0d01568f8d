#include "flrdt/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "flrdt/error.hpp"

namespace flrdt {

namespace {

GaussHermiteRule golub_welsch(int order) {
    // Jacobi matrix of the probabilists' Hermite recurrence He_{k+1} = x He_k - k He_{k-1}.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order > 1 ? order - 1 : 0);
    for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(double(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    GaussHermiteRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    double total = 0.0;
    for (int i = 0; i < order; ++i) {
        rule.nodes[i] = eig.eigenvalues()[i];
        const double v = eig.eigenvectors()(0, i);
        rule.weights[i] = v * v;
        total += rule.weights[i];
    }
    for (auto& w : rule.weights) w /= total;
    // Enforce exact symmetry of the rule.
    for (int i = 0; i < order / 2; ++i) {
        const int j = order - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = rule.weights[j] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

} // namespace

const GaussHermiteRule& gauss_hermite(int order) {
    if (order < 1 || order > 1024)
        throw Error(ErrorCode::InvalidArgument, "Gauss-Hermite order must lie in [1, 1024]");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussHermiteRule>(golub_welsch(order));
    return *slot;
}

double log_ndtr(double x) {
    if (x > 6.0) return std::log1p(-0.5 * std::erfc(x / std::sqrt(2.0)));
    if (x > -20.0) return std::log(0.5 * std::erfc(-x / std::sqrt(2.0)));
    // Asymptotic series of the Mills ratio.
    const double x2 = x * x;
    const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * M_PI) + std::log(series);
}

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-std::abs(a - b)));
}

} // namespace flrdt
