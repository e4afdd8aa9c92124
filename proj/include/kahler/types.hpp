#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace kahler {

using Vec4 = Eigen::Vector4d;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat4 = Eigen::Matrix4d;
using Mat3 = Eigen::Matrix3d;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat84 = Eigen::Matrix<double, 8, 4>;

// Fixed-size dense tensors indexed [i][j]..., row-major nesting.
using Tensor3 = std::array<std::array<std::array<double, 4>, 4>, 4>;
using Tensor4 = std::array<Tensor3, 4>;

struct ChartPoint {
    std::array<double, 4> coords{0.0, 0.0, 0.0, 0.0};

    ChartPoint() = default;
    ChartPoint(double x, double y, double z, double w) : coords{x, y, z, w} {}
    explicit ChartPoint(const Vec4& v) : coords{v[0], v[1], v[2], v[3]} {}

    double operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return coords[static_cast<std::size_t>(i)]; }
    Vec4 vec() const { return Vec4(coords[0], coords[1], coords[2], coords[3]); }
    bool finite() const;
};

ChartPoint operator+(const ChartPoint& p, const Vec4& v);
ChartPoint operator-(const ChartPoint& p, const Vec4& v);

struct Tolerances {
    double complex = 1e-10;     // on sin^2
    double lagrangian = 1e-10;  // on cos^2
    double equal = 1e-8;        // on |cos1 - cos2|
};

enum class ErrorCode {
    SingularPoint,
    DegreeCapExceeded,
    EigensolveFailure,
    FrameDegenerate,
    ComplexPoint,
    NearLagrangian,
    NearComplex,
    StencilOutOfDomain,
    QuadratureNonConvergent,
    InvalidArgument,
};

const char* error_code_name(ErrorCode c);

class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

Tensor3 zero_tensor3();
Tensor4 zero_tensor4();

}  // namespace kahler
