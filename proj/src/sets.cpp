#include "flrdt/sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flrdt/error.hpp"

namespace flrdt {

namespace {

constexpr double kNormTol = 1e-10;

void require_finite(std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i])) throw Error(ErrorCode::NonFiniteInput, "non-finite field entry", int(i));
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace

void XSet::validate() const {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "XSet dimension must be positive");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw Error(ErrorCode::InvalidArgument, "XSet radius must be positive");
    if ((family == XFamily::WeakL1 || family == XFamily::SectionalL1) && (k < 0 || k > n))
        throw Error(ErrorCode::InvalidArgument, "sparsity k must lie in [0, n]");
}

void YSet::validate() const {
    if (m1 < 0 || m2 < 0 || m() < 1) throw Error(ErrorCode::InvalidArgument, "YSet needs m1+m2 >= 1");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw Error(ErrorCode::InvalidArgument, "YSet radius must be positive");
    if (family == YFamily::Sphere && m2 != 0)
        throw Error(ErrorCode::InvalidArgument, "Sphere Y family has no cone block (m2 = 0)");
    if (family == YFamily::PosOrthantSphere && m1 != 0)
        throw Error(ErrorCode::InvalidArgument, "PosOrthantSphere has no free block (m1 = 0)");
    if (!g.empty() && int(g.size()) != m())
        throw Error(ErrorCode::DimensionMismatch, "offset length must equal m1+m2");
    require_finite(g);
}

YSet YSet::perceptron(int m, double kappa) {
    return YSet{YFamily::PosOrthantSphere, 0, m, 1.0, std::vector<double>(std::size_t(m), kappa)};
}

InnerOptResult min_over_x(const XSet& set, std::span<const double> field) {
    set.validate();
    if (int(field.size()) != set.n) throw Error(ErrorCode::DimensionMismatch, "field length must equal n");
    require_finite(field);
    InnerOptResult out;
    out.witness.assign(field.size(), 0.0);
    switch (set.family) {
    case XFamily::Sphere: {
        const double nrm = norm2(field);
        out.value = -set.radius * nrm;
        if (nrm > 0.0) {
            for (std::size_t i = 0; i < field.size(); ++i) out.witness[i] = -set.radius * field[i] / nrm;
        } else {
            out.witness[0] = set.radius;
        }
        break;
    }
    case XFamily::BinaryCorners: {
        const double mag = set.radius / std::sqrt(double(set.n));
        double s = 0.0;
        for (std::size_t i = 0; i < field.size(); ++i) {
            s += std::abs(field[i]);
            out.witness[i] = field[i] > 0.0 ? -mag : mag;
        }
        out.value = -mag * s;
        break;
    }
    default:
        throw Error(ErrorCode::UnsupportedFamily, "l1 families support membership only");
    }
    return out;
}

InnerOptResult max_over_y(const YSet& set, std::span<const double> field) {
    set.validate();
    const int m = set.m();
    if (int(field.size()) != m) throw Error(ErrorCode::DimensionMismatch, "field length must equal m1+m2");
    require_finite(field);
    std::vector<double> v(field.begin(), field.end());
    if (!set.g.empty())
        for (int i = 0; i < m; ++i) v[i] += set.g[i];

    InnerOptResult out;
    out.witness.assign(std::size_t(m), 0.0);
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i >= set.m1 && v[i] < 0.0) v[i] = 0.0;
        s += v[i] * v[i];
    }
    const double nrm = std::sqrt(s);
    if (nrm > 0.0) {
        out.value = set.radius * nrm;
        for (int i = 0; i < m; ++i) out.witness[i] = set.radius * v[i] / nrm;
    } else if (set.m1 > 0) {
        out.value = 0.0;
        out.witness[0] = set.radius;
    } else {
        // Every cone coordinate is nonpositive: the best unit y is the
        // coordinate direction of the largest (least negative) entry.
        int best = 0;
        for (int i = 1; i < m; ++i)
            if (field[i] + (set.g.empty() ? 0.0 : set.g[i]) >
                field[best] + (set.g.empty() ? 0.0 : set.g[best]))
                best = i;
        out.value = set.radius * (field[best] + (set.g.empty() ? 0.0 : set.g[best]));
        out.witness[best] = set.radius;
    }
    return out;
}

bool membership(const XSet& set, std::span<const double> point) {
    set.validate();
    if (int(point.size()) != set.n) throw Error(ErrorCode::DimensionMismatch, "point length must equal n");
    require_finite(point);
    switch (set.family) {
    case XFamily::Sphere:
        return std::abs(norm2(point) - set.radius) <= kNormTol;
    case XFamily::BinaryCorners: {
        const double mag = set.radius / std::sqrt(double(set.n));
        return std::all_of(point.begin(), point.end(),
                           [&](double v) { return std::abs(std::abs(v) - mag) <= kNormTol; });
    }
    case XFamily::WeakL1:
    case XFamily::SectionalL1: {
        if (std::abs(norm2(point) - set.radius) > kNormTol) return false;
        const int head = set.n - set.k;
        double lhs = 0.0, rhs = 0.0;
        for (int i = 0; i < head; ++i) lhs += std::abs(point[i]);
        for (int i = head; i < set.n; ++i)
            rhs += set.family == XFamily::WeakL1 ? point[i] : std::abs(point[i]);
        return lhs <= rhs;
    }
    }
    return false;
}

bool membership(const YSet& set, std::span<const double> point) {
    set.validate();
    if (int(point.size()) != set.m()) throw Error(ErrorCode::DimensionMismatch, "point length must equal m1+m2");
    require_finite(point);
    if (std::abs(norm2(point) - set.radius) > kNormTol) return false;
    for (int i = set.m1; i < set.m(); ++i)
        if (point[i] < 0.0) return false;
    return true;
}

namespace {

const char* name(XFamily f) {
    switch (f) {
    case XFamily::Sphere: return "Sphere";
    case XFamily::BinaryCorners: return "BinaryCorners";
    case XFamily::WeakL1: return "WeakL1";
    case XFamily::SectionalL1: return "SectionalL1";
    }
    return "";
}

const char* name(YFamily f) {
    switch (f) {
    case YFamily::Sphere: return "Sphere";
    case YFamily::PosOrthantSphere: return "PosOrthantSphere";
    case YFamily::MixedCone: return "MixedCone";
    }
    return "";
}

} // namespace

void to_json(nlohmann::json& j, const XSet& set) {
    j = nlohmann::json{{"family", name(set.family)}, {"n", set.n}, {"radius", set.radius}};
    if (set.family == XFamily::WeakL1 || set.family == XFamily::SectionalL1) j["k"] = set.k;
}

void from_json(const nlohmann::json& j, XSet& set) {
    const auto fam = j.at("family").get<std::string>();
    if (fam == "Sphere") set.family = XFamily::Sphere;
    else if (fam == "BinaryCorners") set.family = XFamily::BinaryCorners;
    else if (fam == "WeakL1") set.family = XFamily::WeakL1;
    else if (fam == "SectionalL1") set.family = XFamily::SectionalL1;
    else throw Error(ErrorCode::ConfigError, "unknown X family '" + fam + "'");
    set.n = j.value("n", 1);
    set.radius = j.value("radius", 1.0);
    set.k = j.value("k", 0);
    set.validate();
}

void to_json(nlohmann::json& j, const YSet& set) {
    j = nlohmann::json{{"family", name(set.family)}, {"m1", set.m1}, {"m2", set.m2}, {"radius", set.radius}};
    // Zero free block and a constant cone block round-trip through "kappa".
    bool compact = set.m2 > 0 && int(set.g.size()) == set.m();
    for (int i = 0; compact && i < set.m(); ++i)
        compact = set.g[i] == (i < set.m1 ? 0.0 : set.g[set.m1]);
    if (compact) j["kappa"] = set.g[set.m1];
    else j["g"] = set.g;
}

void from_json(const nlohmann::json& j, YSet& set) {
    const auto fam = j.at("family").get<std::string>();
    if (fam == "Sphere") set.family = YFamily::Sphere;
    else if (fam == "PosOrthantSphere") set.family = YFamily::PosOrthantSphere;
    else if (fam == "MixedCone") set.family = YFamily::MixedCone;
    else throw Error(ErrorCode::ConfigError, "unknown Y family '" + fam + "'");
    set.m1 = j.value("m1", 0);
    set.m2 = j.value("m2", 0);
    if (j.contains("n")) {
        if (set.family == YFamily::Sphere) set.m1 = j.at("n").get<int>();
        else set.m2 = j.at("n").get<int>();
    }
    set.radius = j.value("radius", 1.0);
    set.g.clear();
    if (j.contains("g")) {
        j.at("g").get_to(set.g);
    } else if (j.contains("kappa")) {
        set.g.assign(std::size_t(set.m()), 0.0);
        const double kappa = j.at("kappa").get<double>();
        for (int i = set.m1; i < set.m(); ++i) set.g[i] = kappa;
    }
    set.validate();
}

} // namespace flrdt
