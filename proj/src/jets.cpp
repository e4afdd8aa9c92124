#include "kahler/jets.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace kahler {

bool ChartPoint::finite() const {
    for (double c : coords)
        if (!std::isfinite(c)) return false;
    return true;
}

ChartPoint operator+(const ChartPoint& p, const Vec4& v) {
    return ChartPoint(p[0] + v[0], p[1] + v[1], p[2] + v[2], p[3] + v[3]);
}

ChartPoint operator-(const ChartPoint& p, const Vec4& v) {
    return ChartPoint(p[0] - v[0], p[1] - v[1], p[2] - v[2], p[3] - v[3]);
}

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::SingularPoint: return "singular-point";
        case ErrorCode::DegreeCapExceeded: return "degree-cap-exceeded";
        case ErrorCode::EigensolveFailure: return "eigensolve-failure";
        case ErrorCode::FrameDegenerate: return "frame-degenerate";
        case ErrorCode::ComplexPoint: return "complex-point";
        case ErrorCode::NearLagrangian: return "near-lagrangian";
        case ErrorCode::NearComplex: return "near-complex";
        case ErrorCode::StencilOutOfDomain: return "stencil-out-of-domain";
        case ErrorCode::QuadratureNonConvergent: return "quadrature-non-convergent";
        case ErrorCode::InvalidArgument: return "invalid-argument";
    }
    return "unknown";
}

Tensor3 zero_tensor3() { return Tensor3{}; }
Tensor4 zero_tensor4() { return Tensor4{}; }

bool MapModel::near_singular(const ChartPoint&, double) const { return false; }

ImmersionSpec ImmersionSpec::polynomial(std::vector<Monomial> terms, int degree_cap) {
    if (degree_cap < 0) throw GeometryError(ErrorCode::InvalidArgument, "negative degree cap");
    for (const auto& m : terms) {
        if (m.target < 0 || m.target > 3)
            throw GeometryError(ErrorCode::InvalidArgument, "monomial target must be in 0..3");
        for (int e : m.exponents)
            if (e < 0) throw GeometryError(ErrorCode::InvalidArgument, "negative exponent");
        if (!std::isfinite(m.coefficient))
            throw GeometryError(ErrorCode::InvalidArgument, "non-finite coefficient");
        if (m.degree() > degree_cap) {
            std::ostringstream os;
            os << "monomial of degree " << m.degree() << " exceeds cap " << degree_cap;
            throw GeometryError(ErrorCode::DegreeCapExceeded, os.str());
        }
    }
    ImmersionSpec s;
    s.kind_ = SpecKind::Polynomial;
    s.id_ = "polynomial";
    s.degree_cap_ = degree_cap;
    s.terms_ = terms;
    s.model_ = std::make_shared<PolynomialModel>(std::move(terms));
    return s;
}

ImmersionSpec ImmersionSpec::custom(std::shared_ptr<const MapModel> model, std::string label) {
    ImmersionSpec s;
    s.kind_ = SpecKind::Catalog;
    s.id_ = std::move(label);
    s.model_ = std::move(model);
    return s;
}

namespace {

// d^n/dx^n x^e evaluated at x.
double falling_power(double x, int e, int n) {
    if (n > e) return 0.0;
    double c = 1.0;
    for (int k = 0; k < n; ++k) c *= static_cast<double>(e - k);
    const int r = e - n;
    double xr = 1.0;
    for (int k = 0; k < r; ++k) xr *= x;
    return c * xr;
}

double monomial_derivative(const Monomial& m, const ChartPoint& p, const std::array<int, 4>& alpha) {
    double v = m.coefficient;
    for (int i = 0; i < 4; ++i) {
        v *= falling_power(p[i], m.exponents[static_cast<std::size_t>(i)], alpha[static_cast<std::size_t>(i)]);
        if (v == 0.0) return 0.0;
    }
    return v;
}

}  // namespace

Jet3 PolynomialModel::jet(const ChartPoint& p) const {
    Jet3 J;
    J.order = 3;
    for (const auto& m : terms_) {
        const int a = m.target;
        J.value[a] += monomial_derivative(m, p, {0, 0, 0, 0});
        for (int i = 0; i < 4; ++i) {
            std::array<int, 4> al{0, 0, 0, 0};
            al[i] += 1;
            J.jacobian(a, i) += monomial_derivative(m, p, al);
            for (int j = i; j < 4; ++j) {
                auto bl = al;
                bl[j] += 1;
                const double hij = monomial_derivative(m, p, bl);
                J.hessian[a][i][j] += hij;
                if (j != i) J.hessian[a][j][i] += hij;
                for (int k = j; k < 4; ++k) {
                    auto cl = bl;
                    cl[k] += 1;
                    const double tijk = monomial_derivative(m, p, cl);
                    const int idx[3] = {i, j, k};
                    // scatter to all distinct permutations of (i, j, k)
                    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
                    bool seen[4][4][4] = {};
                    for (const auto& pm : perms) {
                        const int x = idx[pm[0]], y = idx[pm[1]], z = idx[pm[2]];
                        if (seen[x][y][z]) continue;
                        seen[x][y][z] = true;
                        J.third[a][x][y][z] += tijk;
                    }
                }
            }
        }
    }
    return J;
}

Jet3 jet_from_taylor(const std::array<Taylor4, 4>& f) {
    Jet3 J;
    J.order = 3;
    for (int a = 0; a < 4; ++a) {
        J.value[a] = f[a].v;
        for (int i = 0; i < 4; ++i) {
            J.jacobian(a, i) = f[a].g[i];
            for (int j = 0; j < 4; ++j) {
                J.hessian[a][i][j] = f[a].h[i][j];
                for (int k = 0; k < 4; ++k) J.third[a][i][j][k] = f[a].t[i][j][k];
            }
        }
    }
    return J;
}

Jet3 TaylorModel::jet(const ChartPoint& p) const { return jet_from_taylor(components(p)); }

namespace {

// Copies the sorted-index entry into every permutation, so the symmetry is exact.
void symmetrize(Jet3& J) {
    for (auto& H : J.hessian)
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) H[j][i] = H[i][j];
    for (auto& T : J.third)
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                for (int k = j; k < 4; ++k) {
                    const double v = T[i][j][k];
                    T[i][k][j] = T[j][i][k] = T[j][k][i] = T[k][i][j] = T[k][j][i] = v;
                }
}

}  // namespace

Jet3 evaluate_jet(const ImmersionSpec& spec, const ChartPoint& p, int order) {
    if (order < 0 || order > 3) throw GeometryError(ErrorCode::InvalidArgument, "jet order must be in 0..3");
    if (!p.finite()) throw GeometryError(ErrorCode::InvalidArgument, "non-finite chart point");
    if (spec.model().near_singular(p, 0.0))
        throw GeometryError(ErrorCode::SingularPoint, "evaluation at a declared singularity");
    Jet3 J = spec.model().jet(p);
    symmetrize(J);
    J.order = order;
    if (order < 3) J.third = Tensor4{};
    if (order < 2) J.hessian = Tensor3{};
    if (order < 1) J.jacobian.setZero();
    return J;
}

Jet3 finite_difference_jet(const ImmersionSpec& spec, const ChartPoint& p, double step) {
    if (!(step > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "step must be positive");
    if (spec.model().near_singular(p, 4.0 * step))
        throw GeometryError(ErrorCode::SingularPoint, "stencil reaches a declared singularity");
    const double h = step;
    auto val = [&](const Vec4& d) { return evaluate_jet(spec, p + d, 0).value; };
    auto e = [](int i) { Vec4 v = Vec4::Zero(); v[i] = 1.0; return v; };

    // Second derivatives of the values at a shifted base point.
    auto hess_at = [&](const Vec4& base, int a, int i, int j) {
        if (i == j)
            return (val(base + h * e(i))[a] - 2.0 * val(base)[a] + val(base - h * e(i))[a]) / (h * h);
        return (val(base + h * e(i) + h * e(j))[a] - val(base + h * e(i) - h * e(j))[a]
                - val(base - h * e(i) + h * e(j))[a] + val(base - h * e(i) - h * e(j))[a]) / (4.0 * h * h);
    };

    Jet3 J;
    J.order = 3;
    J.value = val(Vec4::Zero());
    for (int i = 0; i < 4; ++i) {
        const Vec4 d = (val(h * e(i)) - val(-h * e(i))) / (2.0 * h);
        J.jacobian.col(i) = d;
    }
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                const double v = hess_at(Vec4::Zero(), a, i, j);
                J.hessian[a][i][j] = v;
                J.hessian[a][j][i] = v;
            }
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k) {
                    // symmetrized: average the three ways of peeling off one index
                    const double t1 = (hess_at(h * e(i), a, j, k) - hess_at(-h * e(i), a, j, k)) / (2 * h);
                    const double t2 = (hess_at(h * e(j), a, i, k) - hess_at(-h * e(j), a, i, k)) / (2 * h);
                    const double t3 = (hess_at(h * e(k), a, i, j) - hess_at(-h * e(k), a, i, j)) / (2 * h);
                    J.third[a][i][j][k] = (t1 + t2 + t3) / 3.0;
                }
    return J;
}

std::vector<Monomial> parse_monomials(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& ex) {
        throw GeometryError(ErrorCode::InvalidArgument, std::string("monomial block: ") + ex.what());
    }
    if (!j.is_array()) throw GeometryError(ErrorCode::InvalidArgument, "monomial block must be an array");
    std::vector<Monomial> out;
    for (std::size_t n = 0; n < j.size(); ++n) {
        const auto& r = j[n];
        auto fail = [n](const std::string& what) {
            throw GeometryError(ErrorCode::InvalidArgument,
                                "monomial[" + std::to_string(n) + "]: " + what);
        };
        if (!r.is_object()) fail("not an object");
        if (!r.contains("target") || !r["target"].is_number_integer()) fail("missing integer 'target'");
        if (!r.contains("exponents") || !r["exponents"].is_array() || r["exponents"].size() != 4)
            fail("'exponents' must be an array of 4 integers");
        if (!r.contains("coefficient") || !r["coefficient"].is_number()) fail("missing numeric 'coefficient'");
        Monomial m;
        m.target = r["target"].get<int>();
        if (m.target < 0 || m.target > 3) fail("'target' must be in 0..3");
        for (int i = 0; i < 4; ++i) {
            if (!r["exponents"][static_cast<std::size_t>(i)].is_number_integer()) fail("exponent not an integer");
            m.exponents[static_cast<std::size_t>(i)] = r["exponents"][static_cast<std::size_t>(i)].get<int>();
        }
        m.coefficient = r["coefficient"].get<double>();
        out.push_back(m);
    }
    return out;
}

}  // namespace kahler
