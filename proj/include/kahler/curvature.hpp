#pragma once

#include "kahler/tangent_geometry.hpp"

#include <array>

namespace kahler {

// II[i][j][a]: normal component a of II(e_i, e_j), oriented orthonormal frames.
struct SecondFundamentalForm {
    Tensor3 II{};
};

// Each value is the coefficient of the metric volume form of the oriented frame.
struct CharacteristicDensities {
    double p1_tm = 0, p1_nm = 0;
    double chi_tm = 0, chi_nm = 0;
    double p1_plus_tm = 0, p1_minus_tm = 0;
    double p1_plus_nm = 0, p1_minus_nm = 0;
};

struct EtaForm {
    bool present = false;
    Tensor3 frame{};                      // eta(e_a, e_b, e_c), fully skew
    std::array<double, 4> chart{0, 0, 0, 0};  // eta_123, eta_023, eta_013, eta_012 in chart coordinates
};

struct CurvaturePackage {
    PointGeometry geom;
    SecondFundamentalForm II;
    Vec4 H = Vec4::Zero();   // mean curvature, normal frame coordinates
    Tensor4 RM{};            // R^M(X, Y, Z, W)
    Tensor4 Rperp{};         // R^perp(X, Y, U, V)
    double scalar = 0.0;
    CharacteristicDensities densities;
    EtaForm eta;

    double mean_curvature_norm() const { return H.norm(); }
};

SecondFundamentalForm second_fundamental_form(const PointGeometry& g);
SecondFundamentalForm second_fundamental_form(const ImmersionSpec& spec, const ChartPoint& p);

// Flat ambient: R^M(X,Y,Z,W) = <II(Z,X), II(W,Y)> - <II(Z,Y), II(W,X)>.
Tensor4 gauss_curvature(const SecondFundamentalForm& ii);
// R^perp(X,Y,U,V) = <A^U X, A^V Y> - <A^U Y, A^V X>.
Tensor4 normal_curvature(const SecondFundamentalForm& ii);
double scalar_curvature(const Tensor4& RM);

// Endomorphism of the curvature 2-form: [R(X,Y)]_{ij} = R(X,Y,e_j,e_i).
Mat4 curvature_endomorphism(const Tensor4& R, int x, int y);

// Wedge of two 2-forms on an oriented 4-frame, as a multiple of the volume form.
double wedge_2forms(const Mat4& a, const Mat4& b);

CharacteristicDensities characteristic_densities(const Tensor4& RM, const Tensor4& Rperp);
double pontryagin_density(const Tensor4& R);
double euler_density(const Tensor4& R);
// p1 of Lambda^2_{+} (sign = +1) or Lambda^2_{-} (sign = -1) from the induced curvature on that bundle.
double pontryagin_lambda2_density(const Tensor4& R, int sign);

// nP[x][a][y] = normal component a of (nabla_{e_x} Phi)(e_y).
Tensor3 nabla_phi(const PointGeometry& g, const SecondFundamentalForm& ii);
Tensor3 nabla_phi(const ImmersionSpec& spec, const ChartPoint& p);

// delta Phi = -sum_i (nabla_{e_i} Phi)(e_i), normal frame coordinates.
Vec4 codifferential_phi(const Tensor3& nP);

EtaForm eta_form(const PointGeometry& g, const SecondFundamentalForm& ii, const Tensor4& RM, const Tensor4& Rperp,
                 const Tolerances& tol = {});
EtaForm eta_form(const ImmersionSpec& spec, const ChartPoint& p, const Tolerances& tol = {});

// eta is always attempted; `eta.present` is false at points too close to complex.
CurvaturePackage curvature_package(const ImmersionSpec& spec, const ChartPoint& p, const Tolerances& tol = {});
CurvaturePackage curvature_package_from_geometry(const PointGeometry& g, const Tolerances& tol = {});

}  // namespace kahler
