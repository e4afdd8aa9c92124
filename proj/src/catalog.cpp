#include "kahler/catalog.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kahler {

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
}

Quaternion operator*(double s, const Quaternion& a) { return {s * a.w, s * a.x, s * a.y, s * a.z}; }

const char* locus_kind_name(LocusKind k) {
    switch (k) {
        case LocusKind::Complex: return "complex";
        case LocusKind::Lagrangian: return "lagrangian";
        case LocusKind::Singular: return "singular";
    }
    return "unknown";
}

namespace {

using T4 = std::array<Taylor4, 4>;
using Components = std::function<T4(const ChartPoint&)>;

class FunctionModel : public TaylorModel {
public:
    FunctionModel(Components fn, bool singular_at_origin)
        : fn_(std::move(fn)), singular_origin_(singular_at_origin) {}

    T4 components(const ChartPoint& p) const override { return fn_(p); }

    bool near_singular(const ChartPoint& p, double radius) const override {
        if (!singular_origin_) return false;
        return p.vec().norm() <= radius;
    }

private:
    Components fn_;
    bool singular_origin_;
};

std::shared_ptr<const MapModel> model(Components fn, bool singular_at_origin = false) {
    return std::make_shared<FunctionModel>(std::move(fn), singular_at_origin);
}

T4 vars(const ChartPoint& p) {
    return {Taylor4::variable(p, 0), Taylor4::variable(p, 1), Taylor4::variable(p, 2), Taylor4::variable(p, 3)};
}

Taylor4 c0(double v) { return Taylor4::constant(v); }

// Hamilton product on Taylor4-valued quaternions.
T4 qmul(const T4& a, const T4& b) {
    return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

// xbar * eps * x for a unit imaginary eps.
T4 conjugation_map(const ChartPoint& p, const Quaternion& eps) {
    const T4 x = vars(p);
    const T4 xb{x[0], -x[1], -x[2], -x[3]};
    const T4 e{c0(eps.w), c0(eps.x), c0(eps.y), c0(eps.z)};
    return qmul(qmul(xb, e), x);
}

Taylor4 radius_squared(const ChartPoint& p) {
    const T4 x = vars(p);
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
}

T4 sin_sinh_pair(const ChartPoint& p) {
    const T4 x = vars(p);
    const Taylor4 a = x[0] + x[2];
    const Taylor4 b = x[1] + x[3];
    const Taylor4 u = sin(a) * cosh(b);
    const Taylor4 v = -(cos(a) * sinh(b));
    return {u, v, Taylor4{}, Taylor4{}};
}

// (u0, v0)(x,y,z,w) = (x+y+z+w, x-y+z-w)
T4 alpha_beta_part(const ChartPoint& p, double alpha, double beta) {
    const T4 x = vars(p);
    const Taylor4 u0 = x[0] + x[1] + x[2] + x[3];
    const Taylor4 v0 = x[0] - x[1] + x[2] - x[3];
    return {alpha * u0, alpha * v0, beta * u0, beta * v0};
}

T4 j_linear(const ChartPoint& p) {
    const T4 x = vars(p);
    return {-x[2], x[3], x[0], -x[1]};
}

T4 add(const T4& a, const T4& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

Quaternion unit_imaginary(const ParamMap& pm) {
    Quaternion e{0.0, pm.at("eps_i"), pm.at("eps_j"), pm.at("eps_k")};
    const double n = e.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw GeometryError(ErrorCode::InvalidArgument, "eps must be a nonzero imaginary quaternion");
    return (1.0 / n) * e;
}

double norm4(const ChartPoint& p) { return p.vec().norm(); }

DeclaredLocus everywhere(LocusKind k, std::string d) {
    return {k, std::move(d), [](const ChartPoint&) { return 0.0; }};
}

DeclaredLocus origin(LocusKind k) { return {k, "the origin", norm4}; }

std::optional<double> no_closed_form(const ChartPoint&, const ParamMap&) { return std::nullopt; }
std::optional<double> no_bound(const ParamMap&) { return std::nullopt; }

double cayley_cos(const ChartPoint& p) {
    const double c = std::cos(p[0] + p[2]);
    const double s = std::sinh(p[1] + p[3]);
    const double q = c * c + s * s;
    return 2.0 * std::sqrt(q / (1.0 + 4.0 * q));
}

double positive_branch_rho(double s, double c) {
    // G(rho) = (4 rho^2 - 5 s)^2 rho - c is increasing and convex above rho_min.
    const double lo = 0.5 * std::sqrt(5.0 * s);
    auto G = [&](double r) { const double q = 4 * r * r - 5 * s; return q * q * r - c; };
    double hi = lo + 1.0;
    while (G(hi) <= 0.0) hi = lo + 2.0 * (hi - lo);
    double r = hi;
    for (int it = 0; it < 200; ++it) {
        const double q = 4 * r * r - 5 * s;
        const double dG = q * q + 16.0 * r * r * q;
        const double step = G(r) / dG;
        double next = r - step;
        if (!(next > lo)) next = 0.5 * (r + lo);
        if (std::abs(next - r) <= 1e-16 * std::abs(r)) { r = next; break; }
        r = next;
    }
    return r;
}

std::vector<CatalogEntry> build_entries() {
    std::vector<CatalogEntry> v;

    v.push_back({"zero", "f = 0; the coordinate 4-plane", {}, 4,
                 [](const ParamMap&) {
                     return std::vector<DeclaredLocus>{everywhere(LocusKind::Lagrangian, "whole domain")};
                 },
                 [](const ChartPoint&, const ParamMap&) { return std::optional<double>(0.0); }, no_bound,
                 [](const ParamMap&) { return model([](const ChartPoint&) { return T4{}; }); }});

    v.push_back({"linear-a-Jw", "f = a i(x), i(x,y,z,w) = (-y, x, -w, z)", {{"a", 0.5}}, 4,
                 [](const ParamMap& pm) {
                     const double a = pm.at("a");
                     std::vector<DeclaredLocus> l;
                     if (a == 0.0) l.push_back(everywhere(LocusKind::Lagrangian, "whole domain (a = 0)"));
                     if (std::abs(a) == 1.0) l.push_back(everywhere(LocusKind::Complex, "whole domain (|a| = 1)"));
                     return l;
                 },
                 [](const ChartPoint&, const ParamMap& pm) {
                     const double a = pm.at("a");
                     return std::optional<double>(2.0 * std::abs(a) / (1.0 + a * a));
                 },
                 no_bound,
                 [](const ParamMap& pm) {
                     const double a = pm.at("a");
                     return model([a](const ChartPoint& p) {
                         const T4 x = vars(p);
                         return T4{-a * x[1], a * x[0], -a * x[3], a * x[2]};
                     });
                 }});

    v.push_back({"lagrangian-sin-sinh", "f = (u, v, u, v), u = sin(x+z) cosh(y+w), v = -cos(x+z) sinh(y+w)", {}, 4,
                 [](const ParamMap&) {
                     return std::vector<DeclaredLocus>{everywhere(LocusKind::Lagrangian, "whole domain")};
                 },
                 [](const ChartPoint&, const ParamMap&) { return std::optional<double>(0.0); }, no_bound,
                 [](const ParamMap&) {
                     return model([](const ChartPoint& p) {
                         const T4 uv = sin_sinh_pair(p);
                         return T4{uv[0], uv[1], uv[0], uv[1]};
                     });
                 }});

    v.push_back({"cayley-sin-sinh", "f = (u, v, -u, -v), u = sin(x+z) cosh(y+w), v = -cos(x+z) sinh(y+w)", {}, 4,
                 [](const ParamMap&) {
                     return std::vector<DeclaredLocus>{
                         {LocusKind::Lagrangian, "x + z = pi/2 + k pi, y + w = 0",
                          [](const ChartPoint& p) {
                              const double c = std::cos(p[0] + p[2]);
                              const double s = std::sinh(p[1] + p[3]);
                              return std::sqrt(c * c + s * s);
                          }}};
                 },
                 [](const ChartPoint& p, const ParamMap&) { return std::optional<double>(cayley_cos(p)); },
                 [](const ParamMap&) { return std::optional<double>(1.0); },
                 [](const ParamMap&) {
                     return model([](const ChartPoint& p) {
                         const T4 uv = sin_sinh_pair(p);
                         return T4{uv[0], uv[1], -uv[0], -uv[1]};
                     });
                 }});

    v.push_back({"j-plus-quadratic-1", "f = j(x) + (x^2 - y^2, -2xy, z^2 - w^2, -2zw), j(x,y,z,w) = (-z, w, x, -y)",
                 {}, 4,
                 [](const ParamMap&) { return std::vector<DeclaredLocus>{origin(LocusKind::Complex)}; },
                 no_closed_form, no_bound,
                 [](const ParamMap&) {
                     return model([](const ChartPoint& p) {
                         const T4 x = vars(p);
                         const T4 q{x[0] * x[0] - x[1] * x[1], -2.0 * (x[0] * x[1]), x[2] * x[2] - x[3] * x[3],
                                    -2.0 * (x[2] * x[3])};
                         return add(j_linear(p), q);
                     });
                 }});

    v.push_back({"j-plus-quadratic-2", "f = j(x) + (x^2 - y^2, -2xy, 0, 0)", {}, 4,
                 [](const ParamMap&) {
                     return std::vector<DeclaredLocus>{
                         {LocusKind::Complex, "x = y = 0",
                          [](const ChartPoint& p) { return std::hypot(p[0], p[1]); }}};
                 },
                 no_closed_form, no_bound,
                 [](const ParamMap&) {
                     return model([](const ChartPoint& p) {
                         const T4 x = vars(p);
                         const T4 q{x[0] * x[0] - x[1] * x[1], -2.0 * (x[0] * x[1]), Taylor4{}, Taylor4{}};
                         return add(j_linear(p), q);
                     });
                 }});

    auto ab_loci = [](const ParamMap& pm) {
        std::vector<DeclaredLocus> l;
        if (pm.at("alpha") == pm.at("beta")) l.push_back(everywhere(LocusKind::Lagrangian, "whole domain (alpha = beta)"));
        return l;
    };
    auto ab_bound = [](const ParamMap& pm) {
        const double d = pm.at("beta") - pm.at("alpha");
        return std::optional<double>(std::sqrt(2.0 * d * d / (1.0 + 2.0 * d * d)));
    };

    v.push_back({"alpha-beta-u0v0", "f = (alpha u0, alpha v0, beta u0, beta v0), (u0, v0) = (x+y+z+w, x-y+z-w)",
                 {{"alpha", 0.5}, {"beta", 0.25}}, 4, ab_loci,
                 [](const ChartPoint&, const ParamMap& pm) {
                     const double a = pm.at("alpha"), b = pm.at("beta");
                     const double d = b - a;
                     return std::optional<double>(std::sqrt(2.0 * d * d / (1.0 + 4.0 * (a * a + b * b))));
                 },
                 ab_bound,
                 [](const ParamMap& pm) {
                     const double a = pm.at("alpha"), b = pm.at("beta");
                     return model([a, b](const ChartPoint& p) { return alpha_beta_part(p, a, b); });
                 }});

    v.push_back({"prop84-sum", "f = (u, v, u, v) + (alpha u0, alpha v0, beta u0, beta v0)",
                 {{"alpha", 0.5}, {"beta", 0.25}}, 4, ab_loci, no_closed_form, ab_bound,
                 [](const ParamMap& pm) {
                     const double a = pm.at("alpha"), b = pm.at("beta");
                     return model([a, b](const ChartPoint& p) {
                         const T4 uv = sin_sinh_pair(p);
                         return add(T4{uv[0], uv[1], uv[0], uv[1]}, alpha_beta_part(p, a, b));
                     });
                 }});

    v.push_back({"hopf-cone", "f = (0, Im((sqrt5 / (2|x|)) xbar eps x)), cone over the Hopf map",
                 {{"eps_i", 1.0}, {"eps_j", 0.0}, {"eps_k", 0.0}}, 3,
                 [](const ParamMap&) { return std::vector<DeclaredLocus>{origin(LocusKind::Singular)}; },
                 no_closed_form, no_bound,
                 [](const ParamMap& pm) {
                     const Quaternion eps = unit_imaginary(pm);
                     return model(
                         [eps](const ChartPoint& p) {
                             const T4 q = conjugation_map(p, eps);
                             const Taylor4 scale = 0.5 * std::sqrt(5.0) * pow(radius_squared(p), -0.5);
                             return T4{Taylor4{}, scale * q[1], scale * q[2], scale * q[3]};
                         },
                         true);
                 }});

    v.push_back({"coassociative-hl",
                 "f = (0, Im((rho(r) / r^2) xbar i x)), (4 rho^2 - 5 r^2)^2 rho = c on the branch rho > (sqrt5/2) r",
                 {{"c", 0.3}}, 3,
                 [](const ParamMap&) { return std::vector<DeclaredLocus>{origin(LocusKind::Singular)}; },
                 no_closed_form, no_bound,
                 [](const ParamMap& pm) {
                     const double c = pm.at("c");
                     if (!(c > 0.0) || !std::isfinite(c))
                         throw GeometryError(ErrorCode::InvalidArgument, "coassociative-hl needs c > 0");
                     return model(
                         [c](const ChartPoint& p) {
                             const Taylor4 r2 = radius_squared(p);
                             const Series3 rho = coassociative_profile(r2.v, c);
                             Series3 s;
                             s.c = {r2.v, 1.0, 0.0, 0.0};
                             const Series3 g = rho * reciprocal(s);
                             const Taylor4 scale =
                                 compose(r2, g.derivative(0), g.derivative(1), g.derivative(2), g.derivative(3));
                             const T4 q = conjugation_map(p, Quaternion{0.0, 1.0, 0.0, 0.0});
                             return T4{Taylor4{}, scale * q[1], scale * q[2], scale * q[3]};
                         },
                         true);
                 }});
    return v;
}

}  // namespace

Series3 coassociative_profile(double s, double c) {
    Series3 S;
    S.c = {s, 1.0, 0.0, 0.0};
    Series3 R;
    R.c = {positive_branch_rho(s, c), 0.0, 0.0, 0.0};
    Series3 C;
    C.c = {c, 0.0, 0.0, 0.0};
    // Newton on truncated series; each pass doubles the number of correct coefficients.
    for (int it = 0; it < 3; ++it) {
        const Series3 q = 4.0 * (R * R) - 5.0 * S;
        const Series3 G = q * q * R - C;
        const Series3 dG = q * q + 16.0 * (R * R) * q;
        R = R - G * reciprocal(dG);
    }
    return R;
}

double alpha_beta_naive_bound(double alpha, double beta) {
    const double s = alpha * alpha + beta * beta;
    return 2.0 * s / (1.0 + 2.0 * s);
}

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = build_entries();
    return entries;
}

const CatalogEntry& find_catalog_entry(const std::string& id) {
    for (const auto& e : catalog_entries())
        if (e.id == id) return e;
    throw GeometryError(ErrorCode::InvalidArgument, "unknown catalog id '" + id + "'");
}

ParamMap resolve_params(const CatalogEntry& e, const ParamMap& given) {
    ParamMap out = e.defaults;
    for (const auto& [k, val] : given) {
        if (!e.defaults.count(k))
            throw GeometryError(ErrorCode::InvalidArgument, "catalog entry '" + e.id + "' has no parameter '" + k + "'");
        if (!std::isfinite(val))
            throw GeometryError(ErrorCode::InvalidArgument, "parameter '" + k + "' is not finite");
        out[k] = val;
    }
    return out;
}

ImmersionSpec ImmersionSpec::catalog(const std::string& id, const std::map<std::string, double>& params) {
    const CatalogEntry& e = find_catalog_entry(id);
    ImmersionSpec s;
    s.kind_ = SpecKind::Catalog;
    s.id_ = id;
    s.params_ = resolve_params(e, params);
    s.model_ = e.make(s.params_);
    s.codomain_dim_ = e.codomain_dim;
    return s;
}

std::vector<DeclaredLocus> declared_loci(const ImmersionSpec& spec) {
    if (spec.kind() != SpecKind::Catalog) return {};
    for (const auto& e : catalog_entries())
        if (e.id == spec.id()) return e.loci(spec.params());
    return {};
}

std::optional<double> expected_cos(const ImmersionSpec& spec, const ChartPoint& p) {
    if (spec.kind() != SpecKind::Catalog) return std::nullopt;
    for (const auto& e : catalog_entries())
        if (e.id == spec.id()) return e.expected_cos(p, spec.params());
    return std::nullopt;
}

}  // namespace kahler
