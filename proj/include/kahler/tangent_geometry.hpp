#pragma once

#include "kahler/jets.hpp"

#include <array>

namespace kahler {

// R^8 = R^4 x R^4 with coordinates (x, y, z, w, u, v, s, t).
struct AmbientStructure {
    Mat8 J0;       // J0(X, Y) = (-Y, X)
    Mat8 omega0;   // omega0(A, B) = <J0 A, B>, stored as A^T omega0 B
    std::array<Mat8, 3> hk;  // J0, (i, -i), J0 (i, -i)

    static const AmbientStructure& standard();
};

// i(x, y, z, w) = (-y, x, -w, z) on R^4.
Mat4 complex_structure_i();
// j(x, y, z, w) = (-z, w, x, -y) on R^4.
Mat4 complex_structure_j();

enum class PointClass { Complex, Lagrangian, EqualAngles, Generic };

const char* point_class_name(PointClass c);

struct Classification {
    PointClass kind = PointClass::Generic;
    double cos = 0.0;  // meaningful for EqualAngles
};

struct PointGeometry {
    ChartPoint p;
    Jet3 jet;
    Mat4 metric;          // I + df^T df
    Mat4 pullback_form;   // chart components of F*omega0
    Mat84 tangent_raw;    // columns d/dx_i of the graph map
    Mat84 tangent;        // oriented orthonormal frame
    Mat84 normal_raw;     // columns (-df^T e_a, e_a)
    Mat84 normal;         // oriented orthonormal frame
    Mat4 frame_change;    // tangent_raw = tangent * frame_change
    Mat4 frame_change_inv;
    Mat4 pullback_on;     // omega0(E_i, E_j) in the oriented frame
    Mat4 J_omega;         // polar part of (F*omega)^#, in the oriented frame
    std::array<double, 2> angles{0.0, 0.0};  // cos(theta_1) >= cos(theta_2)
    Classification classification;
    bool tangent_flipped = false;
    bool normal_flipped = false;

    // +1 when the oriented frame agrees with the chart orientation dx dy dz dw.
    int orientation_sign() const { return tangent_flipped ? -1 : 1; }
    double sin2() const { return 1.0 - angles[0] * angles[0]; }  // min over the two angles
    Mat4 J_omega_chart() const { return frame_change_inv * J_omega * frame_change; }
};

Mat84 gram_schmidt(const Mat84& raw);

PointGeometry point_geometry(const ImmersionSpec& spec, const ChartPoint& p, const Tolerances& tol = {});
PointGeometry point_geometry_from_jet(const Jet3& jet, const ChartPoint& p, const Tolerances& tol = {});

// Singular values of L^{-1} P L^{-T} (L L^T = g_M), paired and sorted descending.
std::array<double, 2> kahler_angles(const Mat4& metric, const Mat4& pullback_form);

Classification classify_point(const std::array<double, 2>& angles, const Tolerances& tol = {});

struct AngleCoefficients {
    double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0;
    double l = 0, m = 0, p = 0, q = 0, r = 0, k = 0;
    double h = 1, o = 1, d = 1, n = 1;
    double calA = 0, calB = 0, calD = 0;
    // Middle coefficient with a q*r cross term in place of k*q and c read as C; disagrees with calB in general.
    double calB_qr_variant = 0;
};

AngleCoefficients angle_coefficients(const Jet3& jet);

// Roots of mu^2 A - mu B + D = 0, descending; these are cos^2 of the two angles.
std::array<double, 2> quadratic_cos2(const AngleCoefficients& c);

// Coefficient of lambda^2 in det(P - lambda G) by direct expansion.
double pencil_middle_coefficient(const Mat4& P, const Mat4& G);

// X -> (J0 X)^perp, in the oriented orthonormal frames (rows normal, columns tangent).
Mat4 phi_map(const PointGeometry& g);
// U -> (J0 U)^T, rows tangent, columns normal.
Mat4 xi_map(const PointGeometry& g);

double anti_i_holomorphic_defect(const Jet3& jet);
double condition_84_defect(const Jet3& jet);

// det[E, N Phi]: the 8-volume of (X_i, Phi(X_i)).
double phi_volume(const PointGeometry& g);

// Hodge star of a 2-form given by its skew matrix in an oriented orthonormal frame.
Mat4 hodge_star(const Mat4& a);

}  // namespace kahler
