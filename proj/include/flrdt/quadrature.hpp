#pragma once

#include <vector>

namespace flrdt {

// Gauss-Hermite rule for the standard normal weight: sum_i w_i f(x_i) ~ E f(Z),
// with sum_i w_i = 1. Rules are cached; safe to call concurrently.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussHermiteRule& gauss_hermite(int order);

// log Phi(x) for the standard normal CDF, accurate deep into the lower tail.
double log_ndtr(double x);

// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

} // namespace flrdt
