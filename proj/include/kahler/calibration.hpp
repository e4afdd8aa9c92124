#pragma once

#include "kahler/tangent_geometry.hpp"

#include <array>
#include <map>

namespace kahler {

// A 4-form on R^8 in Cayley coordinates x1..x8 (stored 0-based, indices ascending).
struct FourForm8 {
    std::map<std::array<int, 4>, double> coefficients;

    std::size_t size() const { return coefficients.size(); }
    double coefficient(int i, int j, int k, int l) const;  // 0-based, any order
};

enum class CayleyVariant { Omega, OmegaPrime };

FourForm8 build_cayley_form(CayleyVariant variant);

double evaluate_form(const FourForm8& form, const Vec8& v1, const Vec8& v2, const Vec8& v3, const Vec8& v4);
double evaluate_form(const FourForm8& form, const Mat84& frame);

// Graph coordinates (x, y, z, w, u, v, s, t) to Cayley coordinates (x, u, y, v, z, s, w, t).
Vec8 graph_to_cayley(const Vec8& v);
Mat84 graph_to_cayley(const Mat84& m);

// 1 - form(oriented orthonormal tangent frame).
double calibration_defect(const PointGeometry& g, CayleyVariant variant = CayleyVariant::Omega);
double calibration_defect(const ImmersionSpec& spec, const ChartPoint& p,
                          CayleyVariant variant = CayleyVariant::Omega);

// 1 - max over the phase family (1/2) omega0^2 + Re(e^{i phi} dz1 dz2 dz3 dz4) on the tangent plane.
double phase_family_defect(const PointGeometry& g);

// Matrix of the map Lambda^2_{+} T -> Lambda^2_{+} N induced by the form (minus-spaces for OmegaPrime),
// for orthonormal tangent/normal frames given in Cayley coordinates.
Mat3 omega_triangle_frames(const Mat84& tangent, const Mat84& normal, CayleyVariant variant = CayleyVariant::Omega);
Mat3 omega_triangle(const PointGeometry& g, CayleyVariant variant = CayleyVariant::Omega);
Mat3 omega_triangle(const ImmersionSpec& spec, const ChartPoint& p, CayleyVariant variant = CayleyVariant::Omega);

}  // namespace kahler
