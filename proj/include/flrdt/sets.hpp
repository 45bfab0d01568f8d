#pragma once

#include <span>
#include <vector>

#include "json.hpp"

namespace flrdt {

enum class XFamily { Sphere, BinaryCorners, WeakL1, SectionalL1 };
enum class YFamily { Sphere, PosOrthantSphere, MixedCone };

struct XSet {
    XFamily family = XFamily::Sphere;
    int n = 1;
    double radius = 1.0;
    int k = 0; // sparsity, l1 families only

    void validate() const;
};

// Coordinates [0, m1) are sign-free, [m1, m1+m2) are nonnegative.
// The offset enters the objective as + y^T g.
struct YSet {
    YFamily family = YFamily::PosOrthantSphere;
    int m1 = 0;
    int m2 = 1;
    double radius = 1.0;
    std::vector<double> g;

    int m() const { return m1 + m2; }
    void validate() const;

    // Perceptron slice: all m coordinates in the cone, offset +kappa so that
    // the primal constraint reads Gx >= kappa.
    static YSet perceptron(int m, double kappa);
};

struct InnerOptResult {
    double value = 0.0;
    std::vector<double> witness;
};

InnerOptResult min_over_x(const XSet& set, std::span<const double> field);
InnerOptResult max_over_y(const YSet& set, std::span<const double> field);

bool membership(const XSet& set, std::span<const double> point);
bool membership(const YSet& set, std::span<const double> point);

void to_json(nlohmann::json& j, const XSet& set);
void from_json(const nlohmann::json& j, XSet& set);
void to_json(nlohmann::json& j, const YSet& set);
void from_json(const nlohmann::json& j, YSet& set);

} // namespace flrdt
