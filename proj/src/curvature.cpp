#include "kahler/curvature.hpp"

#include <cmath>
#include <numbers>

namespace kahler {

SecondFundamentalForm second_fundamental_form(const PointGeometry& g) {
    // Chart-index II: normal part of (0, d_i d_j f), then change to the orthonormal frame.
    Tensor3 chart{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int a = 0; a < 4; ++a) {
                double s = 0.0;
                for (int b = 0; b < 4; ++b) s += g.normal(4 + b, a) * g.jet.hessian[b][i][j];
                chart[i][j][a] = s;
            }
    const Mat4& Ri = g.frame_change_inv;
    SecondFundamentalForm out;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
            for (int a = 0; a < 4; ++a) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l) s += Ri(k, i) * Ri(l, j) * chart[k][l][a];
                out.II[i][j][a] = s;
                out.II[j][i][a] = s;
            }
    return out;
}

SecondFundamentalForm second_fundamental_form(const ImmersionSpec& spec, const ChartPoint& p) {
    return second_fundamental_form(point_geometry(spec, p));
}

namespace {
double dot4(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
}  // namespace

Tensor4 gauss_curvature(const SecondFundamentalForm& ii) {
    const auto& II = ii.II;
    Tensor4 R{};
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            for (int z = 0; z < 4; ++z)
                for (int w = 0; w < 4; ++w)
                    R[x][y][z][w] = dot4(II[z][x], II[w][y]) - dot4(II[z][y], II[w][x]);
    return R;
}

Tensor4 normal_curvature(const SecondFundamentalForm& ii) {
    const auto& II = ii.II;
    // A^U X has tangent components (A^U X)_k = II[X][k][U].
    Tensor4 R{};
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            for (int u = 0; u < 4; ++u)
                for (int v = 0; v < 4; ++v) {
                    double s = 0.0;
                    for (int k = 0; k < 4; ++k) s += II[x][k][u] * II[y][k][v] - II[y][k][u] * II[x][k][v];
                    R[x][y][u][v] = s;
                }
    return R;
}

double scalar_curvature(const Tensor4& RM) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += RM[i][j][i][j];
    return s;
}

Mat4 curvature_endomorphism(const Tensor4& R, int x, int y) {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = R[x][y][j][i];
    return m;
}

double wedge_2forms(const Mat4& a, const Mat4& b) {
    return a(0, 1) * b(2, 3) - a(0, 2) * b(1, 3) + a(0, 3) * b(1, 2) + a(1, 2) * b(0, 3) - a(1, 3) * b(0, 2)
           + a(2, 3) * b(0, 1);
}

namespace {

// The 2-form (X, Y) -> R(X, Y, i, j).
Mat4 two_form(const Tensor4& R, int i, int j) {
    Mat4 m;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) m(x, y) = R[x][y][i][j];
    return m;
}

constexpr double kChernWeil = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);

std::array<Mat4, 3> lambda2_basis(int sign) {
    auto e = [](int i, int j) {
        Mat4 m = Mat4::Zero();
        m(i, j) = 1.0;
        m(j, i) = -1.0;
        return m;
    };
    const double s = sign;
    return {e(0, 1) + s * e(2, 3), e(0, 2) - s * e(1, 3), e(0, 3) + s * e(1, 2)};
}

}  // namespace

double pontryagin_density(const Tensor4& R) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const Mat4 r = two_form(R, i, j);
            s += wedge_2forms(r, r);
        }
    return kChernWeil * s;
}

double euler_density(const Tensor4& R) {
    return kChernWeil * (wedge_2forms(two_form(R, 0, 1), two_form(R, 2, 3))
                         - wedge_2forms(two_form(R, 0, 2), two_form(R, 1, 3))
                         + wedge_2forms(two_form(R, 0, 3), two_form(R, 1, 2)));
}

double pontryagin_lambda2_density(const Tensor4& R, int sign) {
    const auto J = lambda2_basis(sign);
    // Omega[a][b](x, y) = <[K(x,y), J_a], J_b> / |J_b|^2 with |J_b|^2 = 4.
    std::array<std::array<Mat4, 3>, 3> omega{};
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
            const Mat4 K = curvature_endomorphism(R, x, y);
            for (int a = 0; a < 3; ++a) {
                const Mat4 c = K * J[a] - J[a] * K;
                for (int b = 0; b < 3; ++b) omega[a][b](x, y) = 0.25 * (c.cwiseProduct(J[b])).sum();
            }
        }
    double s = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) s += wedge_2forms(omega[a][b], omega[a][b]);
    return kChernWeil * s;
}

CharacteristicDensities characteristic_densities(const Tensor4& RM, const Tensor4& Rperp) {
    CharacteristicDensities d;
    d.p1_tm = pontryagin_density(RM);
    d.p1_nm = pontryagin_density(Rperp);
    d.chi_tm = euler_density(RM);
    d.chi_nm = euler_density(Rperp);
    d.p1_plus_tm = pontryagin_lambda2_density(RM, 1);
    d.p1_minus_tm = pontryagin_lambda2_density(RM, -1);
    d.p1_plus_nm = pontryagin_lambda2_density(Rperp, 1);
    d.p1_minus_nm = pontryagin_lambda2_density(Rperp, -1);
    return d;
}

Tensor3 nabla_phi(const PointGeometry& g, const SecondFundamentalForm& ii) {
    const Mat8& J0 = AmbientStructure::standard().J0;
    const Mat4 wperp = g.normal.transpose() * J0 * g.normal;  // (J0 U)^perp
    const Mat4 T = g.tangent.transpose() * J0 * g.tangent;    // column y: (F*omega)^# e_y
    const auto& II = ii.II;
    Tensor3 nP{};
    for (int x = 0; x < 4; ++x)
        for (int a = 0; a < 4; ++a)
            for (int y = 0; y < 4; ++y) {
                double s = 0.0;
                for (int b = 0; b < 4; ++b) s += wperp(a, b) * II[x][y][b];
                for (int k = 0; k < 4; ++k) s -= II[x][k][a] * T(k, y);
                nP[x][a][y] = s;
            }
    return nP;
}

Tensor3 nabla_phi(const ImmersionSpec& spec, const ChartPoint& p) {
    const PointGeometry g = point_geometry(spec, p);
    return nabla_phi(g, second_fundamental_form(g));
}

Vec4 codifferential_phi(const Tensor3& nP) {
    Vec4 d = Vec4::Zero();
    for (int i = 0; i < 4; ++i)
        for (int a = 0; a < 4; ++a) d[a] -= nP[i][a][i];
    return d;
}

EtaForm eta_form(const PointGeometry& g, const SecondFundamentalForm& ii, const Tensor4& RM, const Tensor4& Rperp,
                 const Tolerances& tol) {
    EtaForm out;
    if (!(g.sin2() > 10.0 * tol.complex)) return out;
    const Mat4 Phi = phi_map(g);
    const Mat4 Phinv = Phi.inverse();
    const Tensor3 nP = nabla_phi(g, ii);

    std::array<Mat4, 4> B;  // Phi^{-1} nabla_{e_x} Phi
    for (int x = 0; x < 4; ++x) {
        Mat4 m;
        for (int a = 0; a < 4; ++a)
            for (int y = 0; y < 4; ++y) m(a, y) = nP[x][a][y];
        B[x] = Phinv * m;
    }
    // Phi^{-1} R^perp(Y,Z) Phi + R^M(Y,Z) as endomorphisms of TM.
    std::array<std::array<Mat4, 4>, 4> curv;
    for (int y = 0; y < 4; ++y)
        for (int z = 0; z < 4; ++z)
            curv[y][z] = Phinv * curvature_endomorphism(Rperp, y, z) * Phi + curvature_endomorphism(RM, y, z);

    auto ip = [](const Mat4& a, const Mat4& b) { return a.cwiseProduct(b).sum(); };
    for (int X = 0; X < 4; ++X)
        for (int Y = 0; Y < 4; ++Y)
            for (int Z = 0; Z < 4; ++Z) {
                if (X == Y || Y == Z || X == Z) continue;
                const int cyc[3][3] = {{X, Y, Z}, {Y, Z, X}, {Z, X, Y}};
                double tot = 0.0;
                for (const auto& c : cyc) {
                    const int x = c[0], y = c[1], z = c[2];
                    tot += 0.25 * ip(curv[y][z], B[x]) + ip(B[x], B[y] * B[z] - B[z] * B[y]) / 12.0;
                }
                out.frame[X][Y][Z] = -tot;
            }
    // Chart components eta(d_i, d_j, d_k) = R_ai R_bj R_ck eta_abc with d_i = sum_a R_ai e_a.
    const Mat4& R = g.frame_change;
    auto chart = [&](int i, int j, int k) {
        double s = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c) s += R(a, i) * R(b, j) * R(c, k) * out.frame[a][b][c];
        return s;
    };
    out.chart = {chart(1, 2, 3), chart(0, 2, 3), chart(0, 1, 3), chart(0, 1, 2)};
    out.present = true;
    return out;
}

CurvaturePackage curvature_package_from_geometry(const PointGeometry& g, const Tolerances& tol) {
    CurvaturePackage c;
    c.geom = g;
    c.II = second_fundamental_form(g);
    for (int i = 0; i < 4; ++i)
        for (int a = 0; a < 4; ++a) c.H[a] += 0.25 * c.II.II[i][i][a];
    c.RM = gauss_curvature(c.II);
    c.Rperp = normal_curvature(c.II);
    c.scalar = scalar_curvature(c.RM);
    c.densities = characteristic_densities(c.RM, c.Rperp);
    c.eta = eta_form(g, c.II, c.RM, c.Rperp, tol);
    return c;
}

CurvaturePackage curvature_package(const ImmersionSpec& spec, const ChartPoint& p, const Tolerances& tol) {
    return curvature_package_from_geometry(point_geometry(spec, p, tol), tol);
}

EtaForm eta_form(const ImmersionSpec& spec, const ChartPoint& p, const Tolerances& tol) {
    const PointGeometry g = point_geometry(spec, p, tol);
    if (!(g.sin2() > 10.0 * tol.complex))
        throw GeometryError(ErrorCode::ComplexPoint, "Phi is not invertible near a complex point");
    const auto ii = second_fundamental_form(g);
    return eta_form(g, ii, gauss_curvature(ii), normal_curvature(ii), tol);
}

}  // namespace kahler
