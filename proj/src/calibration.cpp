#include "kahler/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace kahler {

namespace {

using TwoForm = std::map<std::pair<int, int>, double>;

// dx_i ^ dx_j with 1-based indices as written in coordinates.
TwoForm dx(int i, int j) { return {{{i - 1, j - 1}, 1.0}}; }

TwoForm combine(const TwoForm& a, double sb, const TwoForm& b) {
    TwoForm r = a;
    for (const auto& [k, v] : b) r[k] += sb * v;
    return r;
}

int permutation_sign(std::array<int, 4> idx) {
    int sign = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (idx[i] > idx[j]) sign = -sign;
    return sign;
}

void add_wedge(FourForm8& out, double scale, const TwoForm& a, const TwoForm& b) {
    for (const auto& [ij, x] : a)
        for (const auto& [kl, y] : b) {
            std::array<int, 4> idx{ij.first, ij.second, kl.first, kl.second};
            std::array<int, 4> s = idx;
            std::sort(s.begin(), s.end());
            if (std::adjacent_find(s.begin(), s.end()) != s.end()) continue;
            out.coefficients[s] += scale * permutation_sign(idx) * x * y;
        }
}

}  // namespace

double FourForm8::coefficient(int i, int j, int k, int l) const {
    std::array<int, 4> idx{i, j, k, l};
    std::array<int, 4> s = idx;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) return 0.0;
    auto it = coefficients.find(s);
    return it == coefficients.end() ? 0.0 : permutation_sign(idx) * it->second;
}

FourForm8 build_cayley_form(CayleyVariant variant) {
    FourForm8 f;
    f.coefficients[{0, 1, 2, 3}] = 1.0;
    f.coefficients[{4, 5, 6, 7}] = 1.0;
    if (variant == CayleyVariant::Omega) {
        add_wedge(f, 1.0, combine(dx(1, 2), 1.0, dx(3, 4)), combine(dx(5, 6), 1.0, dx(7, 8)));
        add_wedge(f, 1.0, combine(dx(1, 3), -1.0, dx(2, 4)), combine(dx(5, 7), -1.0, dx(6, 8)));
        add_wedge(f, -1.0, combine(dx(1, 4), 1.0, dx(2, 3)), combine(dx(5, 8), 1.0, dx(6, 7)));
    } else {
        add_wedge(f, 1.0, combine(dx(1, 2), -1.0, dx(3, 4)), combine(dx(5, 6), -1.0, dx(7, 8)));
        add_wedge(f, 1.0, combine(dx(1, 3), 1.0, dx(2, 4)), combine(dx(5, 7), 1.0, dx(6, 8)));
        add_wedge(f, 1.0, combine(dx(1, 4), -1.0, dx(2, 3)), combine(dx(5, 8), -1.0, dx(6, 7)));
    }
    for (auto it = f.coefficients.begin(); it != f.coefficients.end();)
        it = it->second == 0.0 ? f.coefficients.erase(it) : std::next(it);
    return f;
}

double evaluate_form(const FourForm8& form, const Mat84& V) {
    double total = 0.0;
    for (const auto& [idx, c] : form.coefficients) {
        Mat4 m;
        for (int r = 0; r < 4; ++r) m.row(r) = V.row(idx[static_cast<std::size_t>(r)]);
        total += c * m.determinant();
    }
    return total;
}

double evaluate_form(const FourForm8& form, const Vec8& v1, const Vec8& v2, const Vec8& v3, const Vec8& v4) {
    Mat84 V;
    V << v1, v2, v3, v4;
    return evaluate_form(form, V);
}

namespace {
constexpr std::array<int, 8> kCayleyFromGraph{0, 4, 1, 5, 2, 6, 3, 7};
}

Vec8 graph_to_cayley(const Vec8& v) {
    Vec8 r;
    for (int s = 0; s < 8; ++s) r[s] = v[kCayleyFromGraph[static_cast<std::size_t>(s)]];
    return r;
}

Mat84 graph_to_cayley(const Mat84& m) {
    Mat84 r;
    for (int s = 0; s < 8; ++s) r.row(s) = m.row(kCayleyFromGraph[static_cast<std::size_t>(s)]);
    return r;
}

double calibration_defect(const PointGeometry& g, CayleyVariant variant) {
    static const FourForm8 omega = build_cayley_form(CayleyVariant::Omega);
    static const FourForm8 omega_prime = build_cayley_form(CayleyVariant::OmegaPrime);
    const FourForm8& f = variant == CayleyVariant::Omega ? omega : omega_prime;
    return 1.0 - evaluate_form(f, graph_to_cayley(g.tangent));
}

double calibration_defect(const ImmersionSpec& spec, const ChartPoint& p, CayleyVariant variant) {
    return calibration_defect(point_geometry(spec, p), variant);
}

double phase_family_defect(const PointGeometry& g) {
    const Mat4& pe = g.pullback_on;
    const double pf = pe(0, 1) * pe(2, 3) - pe(0, 2) * pe(1, 3) + pe(0, 3) * pe(1, 2);
    Eigen::Matrix4cd z = g.tangent.topRows<4>().cast<std::complex<double>>()
                         + std::complex<double>(0.0, 1.0) * g.tangent.bottomRows<4>().cast<std::complex<double>>();
    return 1.0 - (pf + std::abs(z.determinant()));
}

Mat3 omega_triangle_frames(const Mat84& tangent, const Mat84& normal, CayleyVariant variant) {
    static const FourForm8 omega = build_cayley_form(CayleyVariant::Omega);
    static const FourForm8 omega_prime = build_cayley_form(CayleyVariant::OmegaPrime);
    const FourForm8& f = variant == CayleyVariant::Omega ? omega : omega_prime;
    struct Term { double c; int i, j; };
    const double s = variant == CayleyVariant::Omega ? 1.0 : -1.0;
    const std::array<std::array<Term, 2>, 3> basis{{{{{1.0, 0, 1}, {s, 2, 3}}},
                                                    {{{1.0, 0, 2}, {-s, 1, 3}}},
                                                    {{{1.0, 0, 3}, {s, 1, 2}}}}};
    Mat3 M;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double total = 0.0;
            for (const auto& ta : basis[static_cast<std::size_t>(a)])
                for (const auto& tb : basis[static_cast<std::size_t>(b)])
                    total += ta.c * tb.c * evaluate_form(f, tangent.col(ta.i), tangent.col(ta.j),
                                                         normal.col(tb.i), normal.col(tb.j));
            M(a, b) = 0.25 * total;
        }
    return M;
}

Mat3 omega_triangle(const PointGeometry& g, CayleyVariant variant) {
    return omega_triangle_frames(graph_to_cayley(g.tangent), graph_to_cayley(g.normal), variant);
}

Mat3 omega_triangle(const ImmersionSpec& spec, const ChartPoint& p, CayleyVariant variant) {
    return omega_triangle(point_geometry(spec, p), variant);
}

}  // namespace kahler
