#include "kahler/taylor.hpp"

#include <cmath>

namespace kahler {

Taylor4 Taylor4::constant(double c) {
    Taylor4 r;
    r.v = c;
    return r;
}

Taylor4 Taylor4::variable(const ChartPoint& p, int i) {
    Taylor4 r;
    r.v = p[i];
    r.g[static_cast<std::size_t>(i)] = 1.0;
    return r;
}

Taylor4& Taylor4::operator+=(const Taylor4& o) {
    v += o.v;
    for (int i = 0; i < 4; ++i) {
        g[i] += o.g[i];
        for (int j = 0; j < 4; ++j) {
            h[i][j] += o.h[i][j];
            for (int k = 0; k < 4; ++k) t[i][j][k] += o.t[i][j][k];
        }
    }
    return *this;
}

Taylor4& Taylor4::operator-=(const Taylor4& o) {
    v -= o.v;
    for (int i = 0; i < 4; ++i) {
        g[i] -= o.g[i];
        for (int j = 0; j < 4; ++j) {
            h[i][j] -= o.h[i][j];
            for (int k = 0; k < 4; ++k) t[i][j][k] -= o.t[i][j][k];
        }
    }
    return *this;
}

Taylor4& Taylor4::operator*=(double c) {
    v *= c;
    for (int i = 0; i < 4; ++i) {
        g[i] *= c;
        for (int j = 0; j < 4; ++j) {
            h[i][j] *= c;
            for (int k = 0; k < 4; ++k) t[i][j][k] *= c;
        }
    }
    return *this;
}

Taylor4 operator+(Taylor4 a, const Taylor4& b) { return a += b; }
Taylor4 operator-(Taylor4 a, const Taylor4& b) { return a -= b; }
Taylor4 operator-(Taylor4 a) { return a *= -1.0; }
Taylor4 operator*(Taylor4 a, double c) { return a *= c; }
Taylor4 operator*(double c, Taylor4 a) { return a *= c; }

Taylor4 operator*(const Taylor4& a, const Taylor4& b) {
    Taylor4 r;
    r.v = a.v * b.v;
    for (int i = 0; i < 4; ++i) {
        r.g[i] = a.g[i] * b.v + a.v * b.g[i];
        for (int j = 0; j < 4; ++j) {
            r.h[i][j] = a.h[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[i][j];
            for (int k = 0; k < 4; ++k) {
                r.t[i][j][k] = a.t[i][j][k] * b.v + a.v * b.t[i][j][k]
                    + a.h[i][j] * b.g[k] + a.h[i][k] * b.g[j] + a.h[j][k] * b.g[i]
                    + a.g[i] * b.h[j][k] + a.g[j] * b.h[i][k] + a.g[k] * b.h[i][j];
            }
        }
    }
    return r;
}

Taylor4 compose(const Taylor4& u, double d0, double d1, double d2, double d3) {
    Taylor4 r;
    r.v = d0;
    for (int i = 0; i < 4; ++i) {
        r.g[i] = d1 * u.g[i];
        for (int j = 0; j < 4; ++j) {
            r.h[i][j] = d2 * u.g[i] * u.g[j] + d1 * u.h[i][j];
            for (int k = 0; k < 4; ++k) {
                r.t[i][j][k] = d3 * u.g[i] * u.g[j] * u.g[k]
                    + d2 * (u.h[i][j] * u.g[k] + u.h[i][k] * u.g[j] + u.h[j][k] * u.g[i])
                    + d1 * u.t[i][j][k];
            }
        }
    }
    return r;
}

Taylor4 sin(const Taylor4& u) {
    const double s = std::sin(u.v), c = std::cos(u.v);
    return compose(u, s, c, -s, -c);
}

Taylor4 cos(const Taylor4& u) {
    const double s = std::sin(u.v), c = std::cos(u.v);
    return compose(u, c, -s, -c, s);
}

Taylor4 sinh(const Taylor4& u) {
    const double s = std::sinh(u.v), c = std::cosh(u.v);
    return compose(u, s, c, s, c);
}

Taylor4 cosh(const Taylor4& u) {
    const double s = std::sinh(u.v), c = std::cosh(u.v);
    return compose(u, c, s, c, s);
}

Taylor4 pow(const Taylor4& u, double e) {
    const double x = u.v;
    return compose(u, std::pow(x, e), e * std::pow(x, e - 1), e * (e - 1) * std::pow(x, e - 2),
                   e * (e - 1) * (e - 2) * std::pow(x, e - 3));
}

Taylor4 ipow(const Taylor4& u, int e) {
    if (e == 0) return Taylor4::constant(1.0);
    const double x = u.v;
    auto p = [x](int k) { return k < 0 ? 0.0 : std::pow(x, k); };
    const double de = e;
    return compose(u, p(e), de * p(e - 1), de * (de - 1) * p(e - 2),
                   de * (de - 1) * (de - 2) * p(e - 3));
}

double Series3::derivative(int k) const {
    static const double fact[4] = {1.0, 1.0, 2.0, 6.0};
    return c[static_cast<std::size_t>(k)] * fact[k];
}

Series3 operator+(const Series3& a, const Series3& b) {
    Series3 r;
    for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

Series3 operator-(const Series3& a, const Series3& b) {
    Series3 r;
    for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

Series3 operator*(const Series3& a, const Series3& b) {
    Series3 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; i + j < 4; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

Series3 operator*(double s, const Series3& a) {
    Series3 r;
    for (int i = 0; i < 4; ++i) r.c[i] = s * a.c[i];
    return r;
}

Series3 reciprocal(const Series3& a) {
    Series3 r;
    r.c[0] = 1.0 / a.c[0];
    for (int n = 1; n < 4; ++n) {
        double s = 0.0;
        for (int k = 1; k <= n; ++k) s += a.c[k] * r.c[n - k];
        r.c[n] = -s / a.c[0];
    }
    return r;
}

}  // namespace kahler
