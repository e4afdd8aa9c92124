#pragma once

// Truncated third-order Taylor arithmetic in four variables. Used to build
// exact closed-form jets of the catalog maps by composing elementary pieces.

#include "kahler/types.hpp"

#include <array>

namespace kahler {

struct Taylor4 {
    double v = 0.0;
    std::array<double, 4> g{};
    std::array<std::array<double, 4>, 4> h{};
    Tensor3 t{};

    static Taylor4 constant(double c);
    static Taylor4 variable(const ChartPoint& p, int i);

    Taylor4& operator+=(const Taylor4& o);
    Taylor4& operator-=(const Taylor4& o);
    Taylor4& operator*=(double c);
};

Taylor4 operator+(Taylor4 a, const Taylor4& b);
Taylor4 operator-(Taylor4 a, const Taylor4& b);
Taylor4 operator-(Taylor4 a);
Taylor4 operator*(Taylor4 a, double c);
Taylor4 operator*(double c, Taylor4 a);
Taylor4 operator*(const Taylor4& a, const Taylor4& b);

// Composition phi(u) given phi and its first three derivatives at u.v.
Taylor4 compose(const Taylor4& u, double d0, double d1, double d2, double d3);

Taylor4 sin(const Taylor4& u);
Taylor4 cos(const Taylor4& u);
Taylor4 sinh(const Taylor4& u);
Taylor4 cosh(const Taylor4& u);
Taylor4 pow(const Taylor4& u, double e);
Taylor4 ipow(const Taylor4& u, int e);

// Truncated univariate series c0 + c1 t + c2 t^2 + c3 t^3.
struct Series3 {
    std::array<double, 4> c{};
    double derivative(int k) const;  // k-th derivative at t = 0
};

Series3 operator+(const Series3& a, const Series3& b);
Series3 operator-(const Series3& a, const Series3& b);
Series3 operator*(const Series3& a, const Series3& b);
Series3 operator*(double s, const Series3& a);
Series3 reciprocal(const Series3& a);

}  // namespace kahler
