#include "kahler/tangent_geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace kahler {

Mat4 complex_structure_i() {
    Mat4 m = Mat4::Zero();
    // columns are images of e_x, e_y, e_z, e_w
    m(1, 0) = 1.0;
    m(0, 1) = -1.0;
    m(3, 2) = 1.0;
    m(2, 3) = -1.0;
    return m;
}

Mat4 complex_structure_j() {
    Mat4 m = Mat4::Zero();
    // j(x,y,z,w) = (-z, w, x, -y)
    m(0, 2) = -1.0;
    m(1, 3) = 1.0;
    m(2, 0) = 1.0;
    m(3, 1) = -1.0;
    return m;
}

const AmbientStructure& AmbientStructure::standard() {
    static const AmbientStructure s = [] {
        AmbientStructure a;
        a.J0 = Mat8::Zero();
        a.J0.block<4, 4>(4, 0) = Mat4::Identity();
        a.J0.block<4, 4>(0, 4) = -Mat4::Identity();
        a.omega0 = a.J0.transpose();
        Mat8 I = Mat8::Zero();
        I.block<4, 4>(0, 0) = complex_structure_i();
        I.block<4, 4>(4, 4) = -complex_structure_i();
        a.hk = {a.J0, I, a.J0 * I};
        return a;
    }();
    return s;
}

const char* point_class_name(PointClass c) {
    switch (c) {
        case PointClass::Complex: return "complex";
        case PointClass::Lagrangian: return "lagrangian";
        case PointClass::EqualAngles: return "equal-angles";
        case PointClass::Generic: return "generic";
    }
    return "unknown";
}

Mat84 gram_schmidt(const Mat84& raw) {
    Mat84 q = Mat84::Zero();
    for (int k = 0; k < 4; ++k) {
        Vec8 v = raw.col(k);
        const double scale = v.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < k; ++j) v -= q.col(j).dot(v) * q.col(j);
        const double nv = v.norm();
        if (!(nv > 1e-12 * std::max(scale, 1.0)))
            throw GeometryError(ErrorCode::FrameDegenerate, "frame vectors are linearly dependent");
        q.col(k) = v / nv;
    }
    return q;
}

std::array<double, 2> kahler_angles(const Mat4& metric, const Mat4& pullback_form) {
    Eigen::LLT<Mat4> llt(metric);
    if (llt.info() != Eigen::Success)
        throw GeometryError(ErrorCode::EigensolveFailure, "metric is not positive definite");
    const Mat4 L = llt.matrixL();
    const Mat4 Linv = L.inverse();
    const Mat4 S = Linv * pullback_form * Linv.transpose();
    Eigen::JacobiSVD<Mat4> svd(S);
    const Vec4 sv = svd.singularValues();
    if (!sv.allFinite()) throw GeometryError(ErrorCode::EigensolveFailure, "non-finite singular values");
    auto clamp = [](double c) { return std::clamp(c, 0.0, 1.0); };
    return {clamp(0.5 * (sv[0] + sv[1])), clamp(0.5 * (sv[2] + sv[3]))};
}

Classification classify_point(const std::array<double, 2>& angles, const Tolerances& tol) {
    const double c1 = angles[0], c2 = angles[1];
    if (1.0 - c1 * c1 < tol.complex) return {PointClass::Complex, c1};
    if (c1 * c1 < tol.lagrangian) return {PointClass::Lagrangian, c1};
    if (std::abs(c1 - c2) < tol.equal) return {PointClass::EqualAngles, 0.5 * (c1 + c2)};
    return {PointClass::Generic, c1};
}

namespace {

double pfaffian(const Mat4& a) { return a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2); }

void swap_last_two(Mat84& m) { m.col(2).swap(m.col(3)); }

}  // namespace

PointGeometry point_geometry_from_jet(const Jet3& jet, const ChartPoint& p, const Tolerances& tol) {
    const auto& amb = AmbientStructure::standard();
    PointGeometry g;
    g.p = p;
    g.jet = jet;
    const Mat4& df = jet.jacobian;
    g.metric = Mat4::Identity() + df.transpose() * df;
    g.pullback_form = df - df.transpose();
    g.tangent_raw.topRows<4>() = Mat4::Identity();
    g.tangent_raw.bottomRows<4>() = df;
    g.normal_raw.topRows<4>() = -df.transpose();
    g.normal_raw.bottomRows<4>() = Mat4::Identity();

    g.tangent = gram_schmidt(g.tangent_raw);
    g.normal = gram_schmidt(g.normal_raw);
    Mat4 pe = g.tangent.transpose() * amb.omega0 * g.tangent;
    if (pfaffian(pe) < 0.0) {
        swap_last_two(g.tangent);
        g.tangent_flipped = true;
        pe = g.tangent.transpose() * amb.omega0 * g.tangent;
    }
    Mat8 full;
    full << g.tangent, g.normal;
    if (full.determinant() < 0.0) {
        swap_last_two(g.normal);
        g.normal_flipped = true;
    }
    g.pullback_on = pe;
    g.frame_change = g.tangent.transpose() * g.tangent_raw;
    g.frame_change_inv = g.frame_change.inverse();

    g.angles = kahler_angles(g.metric, g.pullback_form);
    g.classification = classify_point(g.angles, tol);

    // (F*omega)^# in the orthonormal frame is pe^T; keep the polar part on its support.
    const Mat4 sharp = pe.transpose();
    Eigen::JacobiSVD<Mat4> svd(sharp, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec4 sv = svd.singularValues();
    const double cut = std::sqrt(tol.lagrangian);
    g.J_omega = Mat4::Zero();
    for (int k = 0; k < 4; ++k)
        if (sv[k] > cut) g.J_omega += svd.matrixU().col(k) * svd.matrixV().col(k).transpose();
    return g;
}

PointGeometry point_geometry(const ImmersionSpec& spec, const ChartPoint& p, const Tolerances& tol) {
    return point_geometry_from_jet(evaluate_jet(spec, p, 3), p, tol);
}

AngleCoefficients angle_coefficients(const Jet3& jet) {
    const Mat4& J = jet.jacobian;
    // rows u, v, s, t; columns x, y, z, w
    auto d = [&J](int a, int i) { return J(a, i); };
    enum { U = 0, V = 1, S = 2, T = 3, X = 0, Y = 1, Z = 2, W = 3 };
    AngleCoefficients c;
    c.A = -d(U, Y) + d(V, X);
    c.B = d(S, X) - d(U, Z);
    c.C = d(T, X) - d(U, W);
    c.D = d(S, Y) - d(V, Z);
    c.E = d(T, Y) - d(V, W);
    c.F = d(T, Z) - d(S, W);
    auto ip = [&J](int i, int j) { return J.col(i).dot(J.col(j)); };
    c.l = ip(Y, W);
    c.m = ip(Z, W);
    c.p = ip(X, Y);
    c.q = ip(X, Z);
    c.r = ip(X, W);
    c.k = ip(Y, Z);
    c.h = 1.0 + ip(X, X);
    c.o = 1.0 + ip(Y, Y);
    c.d = 1.0 + ip(Z, Z);
    c.n = 1.0 + ip(W, W);

    const double A = c.A, B = c.B, C = c.C, D = c.D, E = c.E, F = c.F;
    const double l = c.l, m = c.m, p = c.p, q = c.q, r = c.r, k = c.k;
    const double h = c.h, o = c.o, dd = c.d, n = c.n;

    c.calA = 2 * h * l * k * m + h * o * dd * n - h * (dd * l * l + o * m * m + n * k * k)
             + p * p * (-dd * n + m * m) + q * q * (l * l - n * o) + r * r * (-o * dd + k * k)
             + 2 * q * m * (-l * p + o * r) + 2 * p * r * (-m * k + dd * l) + 2 * q * k * (p * n - r * l);

    auto middle = [&](double ce_tail) {
        return 2 * D * E * (q * r - h * m) + 2 * B * E * (-r * k + p * m) + 2 * B * D * (l * r - n * p)
               + 2 * C * E * (-dd * p + ce_tail)
               + 2 * A * E * (dd * r - q * m) + 2 * C * F * (-o * q + p * k) + 2 * C * B * (-o * m + k * l)
               + 2 * D * F * (-r * p + h * l)
               + 2 * A * F * (-r * k + q * l) + 2 * A * D * (-r * m + n * q) + 2 * A * C * (-dd * l + m * k)
               + 2 * A * B * (m * l - n * k)
               + 2 * C * D * (-q * l + m * p) + 2 * F * E * (q * p - k * h) + 2 * F * B * (o * r - p * l)
               + E * E * (dd * h - q * q)
               + B * B * (n * o - l * l) + o * (h * F * F + dd * C * C) + n * (h * D * D + dd * A * A)
               - C * C * k * k - r * r * D * D - m * m * A * A - p * p * F * F;
    };
    c.calB = middle(k * q);
    c.calB_qr_variant = middle(q * r);
    const double pf = A * F - B * E + C * D;
    c.calD = pf * pf;
    return c;
}

std::array<double, 2> quadratic_cos2(const AngleCoefficients& c) {
    if (c.calA == 0.0) {
        const double mu = c.calB != 0.0 ? c.calD / c.calB : 0.0;
        return {mu, mu};
    }
    const double disc = std::max(c.calB * c.calB - 4.0 * c.calA * c.calD, 0.0);
    const double mu1 = (c.calB + std::sqrt(disc)) / (2.0 * c.calA);
    const double mu2 = mu1 != 0.0 ? c.calD / (c.calA * mu1) : 0.0;
    return {std::max(mu1, mu2), std::min(mu1, mu2)};
}

double pencil_middle_coefficient(const Mat4& P, const Mat4& G) {
    // det is multilinear in columns: pick two columns from G, the rest from P.
    double total = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            Mat4 M = P;
            M.col(a) = G.col(a);
            M.col(b) = G.col(b);
            total += M.determinant();
        }
    return total;
}

Mat4 phi_map(const PointGeometry& g) {
    return g.normal.transpose() * AmbientStructure::standard().J0 * g.tangent;
}

Mat4 xi_map(const PointGeometry& g) {
    return g.tangent.transpose() * AmbientStructure::standard().J0 * g.normal;
}

double anti_i_holomorphic_defect(const Jet3& jet) {
    const Mat4& J = jet.jacobian;
    double worst = 0.0;
    for (int pr = 0; pr < 2; ++pr) {
        const int u = 2 * pr, v = 2 * pr + 1;
        worst = std::max({worst, std::abs(J(u, 0) + J(v, 1)), std::abs(J(u, 1) - J(v, 0)),
                          std::abs(J(u, 2) + J(v, 3)), std::abs(J(u, 3) - J(v, 2))});
    }
    return worst;
}

double condition_84_defect(const Jet3& jet) {
    const Mat4& J = jet.jacobian;
    double worst = 0.0;
    for (int pr = 0; pr < 2; ++pr) {
        const int u = 2 * pr, v = 2 * pr + 1;
        const double a = J(u, 0);
        const double b = J(v, 0);
        worst = std::max({worst, std::abs(a + J(v, 1)), std::abs(a - J(u, 2)), std::abs(a + J(v, 3)),
                          std::abs(b - J(u, 1)), std::abs(b - J(v, 2)), std::abs(b - J(u, 3))});
    }
    return worst;
}

double phi_volume(const PointGeometry& g) {
    Mat8 m;
    m << g.tangent, g.normal * phi_map(g);
    return m.determinant();
}

Mat4 hodge_star(const Mat4& a) {
    Mat4 s = Mat4::Zero();
    s(0, 1) = a(2, 3);
    s(0, 2) = -a(1, 3);
    s(0, 3) = a(1, 2);
    s(1, 2) = a(0, 3);
    s(1, 3) = -a(0, 2);
    s(2, 3) = a(0, 1);
    return s - s.transpose();
}

}  // namespace kahler
