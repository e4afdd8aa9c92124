#include "kahler/field_analysis.hpp"

#include "kahler/calibration.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace kahler {

std::size_t GridRequest::size() const {
    std::size_t n = 1;
    for (int r : resolution) n *= static_cast<std::size_t>(r);
    return n;
}

ChartPoint GridRequest::node(std::size_t index) const {
    ChartPoint p;
    for (int ax = 3; ax >= 0; --ax) {
        const auto r = static_cast<std::size_t>(resolution[static_cast<std::size_t>(ax)]);
        const std::size_t i = index % r;
        index /= r;
        const double a = lo[static_cast<std::size_t>(ax)], b = hi[static_cast<std::size_t>(ax)];
        p[ax] = r == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(r - 1);
    }
    return p;
}

std::array<double, 4> GridRequest::spacing() const {
    std::array<double, 4> h{};
    for (std::size_t ax = 0; ax < 4; ++ax)
        h[ax] = resolution[ax] > 1 ? (hi[ax] - lo[ax]) / (resolution[ax] - 1) : 0.0;
    return h;
}

double GridRequest::scale() const {
    double s = 0.0;
    for (std::size_t ax = 0; ax < 4; ++ax) s = std::max(s, hi[ax] - lo[ax]);
    return s;
}

double default_fd_step(const GridRequest& req) { return std::max(1e-4, 1e-3 * req.scale()); }

unsigned parse_field(const std::string& name) {
    if (name == "angles") return FieldAngles;
    if (name == "mean_curvature") return FieldMeanCurvature;
    if (name == "scalar") return FieldScalar;
    if (name == "calibration") return FieldCalibration;
    if (name == "densities") return FieldDensities;
    if (name == "eta") return FieldEta;
    if (name == "all") return FieldAll;
    throw GeometryError(ErrorCode::InvalidArgument, "unknown field '" + name + "'");
}

std::vector<std::string> field_columns(unsigned fields) {
    std::vector<std::string> c;
    if (fields & FieldAngles) c.insert(c.end(), {"cos1", "cos2"});
    if (fields & FieldMeanCurvature) c.push_back("mean_curvature");
    if (fields & FieldScalar) c.push_back("scalar");
    if (fields & FieldCalibration) c.insert(c.end(), {"calibration_omega", "calibration_omega_prime"});
    if (fields & FieldDensities)
        c.insert(c.end(), {"p1_tm", "p1_nm", "chi_tm", "chi_nm", "p1_plus_tm", "p1_minus_tm", "p1_plus_nm",
                           "p1_minus_nm"});
    if (fields & FieldEta) c.insert(c.end(), {"eta_123", "eta_023", "eta_013", "eta_012"});
    return c;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

bool masked_singular(const std::vector<DeclaredLocus>& loci, const ChartPoint& p, double radius) {
    for (const auto& l : loci)
        if (l.kind == LocusKind::Singular && l.measure(p) <= radius) return true;
    return false;
}

NodeSample evaluate_node(const ImmersionSpec& spec, const ChartPoint& p, unsigned fields,
                         const std::vector<DeclaredLocus>& loci, const Tolerances& tol, const GuardBands& guard,
                         std::size_t ncols) {
    NodeSample s;
    s.p = p;
    s.values.assign(ncols, std::nullopt);
    if (masked_singular(loci, p, guard.singular)) {
        s.status = "skipped:singular";
        return s;
    }
    try {
        const bool need_curv = fields & (FieldMeanCurvature | FieldScalar | FieldDensities | FieldEta);
        const PointGeometry g = point_geometry(spec, p, tol);
        s.cls = g.classification.kind;
        s.classified = true;
        CurvaturePackage c;
        if (need_curv) c = curvature_package_from_geometry(g, tol);
        std::size_t k = 0;
        if (fields & FieldAngles) {
            s.values[k++] = g.angles[0];
            s.values[k++] = g.angles[1];
        }
        if (fields & FieldMeanCurvature) s.values[k++] = c.mean_curvature_norm();
        if (fields & FieldScalar) s.values[k++] = c.scalar;
        if (fields & FieldCalibration) {
            s.values[k++] = calibration_defect(g, CayleyVariant::Omega);
            s.values[k++] = calibration_defect(g, CayleyVariant::OmegaPrime);
        }
        if (fields & FieldDensities) {
            const auto& d = c.densities;
            for (double v : {d.p1_tm, d.p1_nm, d.chi_tm, d.chi_nm, d.p1_plus_tm, d.p1_minus_tm, d.p1_plus_nm,
                             d.p1_minus_nm})
                s.values[k++] = v;
        }
        if (fields & FieldEta) {
            if (c.eta.present) {
                for (double v : c.eta.chart) s.values[k++] = v;
            } else {
                k += 4;
                s.status = "skipped:near-complex";
            }
        }
    } catch (const GeometryError& e) {
        s.values.assign(ncols, std::nullopt);
        s.classified = false;
        s.status = e.code() == ErrorCode::SingularPoint ? std::string("skipped:singular")
                                                        : std::string("error:") + error_code_name(e.code());
    }
    return s;
}

}  // namespace

FieldGrid scan_points(const ImmersionSpec& spec, const std::vector<ChartPoint>& points, unsigned fields,
                      const Tolerances& tol, const GuardBands& guard, unsigned threads) {
    FieldGrid grid;
    grid.fields = fields;
    grid.columns = field_columns(fields);
    grid.samples.resize(points.size());
    const auto loci = declared_loci(spec);
    const std::size_t ncols = grid.columns.size();
    parallel_for(points.size(), threads, [&](std::size_t i) {
        grid.samples[i] = evaluate_node(spec, points[i], fields, loci, tol, guard, ncols);
    });
    return grid;
}

FieldGrid scan(const ImmersionSpec& spec, const GridRequest& req, unsigned fields, const Tolerances& tol,
               const GuardBands& guard, unsigned threads) {
    for (int r : req.resolution)
        if (r < 1) throw GeometryError(ErrorCode::InvalidArgument, "grid resolution must be positive");
    std::vector<ChartPoint> points(req.size());
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = req.node(i);
    FieldGrid grid = scan_points(spec, points, fields, tol, guard, threads);
    grid.request = req;
    return grid;
}

namespace {

Vec4 unit(int i) {
    Vec4 v = Vec4::Zero();
    v[i] = 1.0;
    return v;
}

Mat4 metric_at(const ImmersionSpec& spec, const ChartPoint& p) {
    const Mat4 df = evaluate_jet(spec, p, 1).jacobian;
    return Mat4::Identity() + df.transpose() * df;
}

double sample_or_throw(const ScalarSampler& h, const ChartPoint& q) {
    double v;
    try {
        v = h(q);
    } catch (const GeometryError& e) {
        if (e.code() == ErrorCode::NearLagrangian || e.code() == ErrorCode::NearComplex) throw;
        throw GeometryError(ErrorCode::StencilOutOfDomain, std::string("stencil node failed: ") + e.what());
    }
    if (!std::isfinite(v)) throw GeometryError(ErrorCode::StencilOutOfDomain, "sampler is not finite on the stencil");
    return v;
}

}  // namespace

double laplace_beltrami(const ImmersionSpec& spec, const ScalarSampler& h, const ChartPoint& p, double step) {
    if (!(step > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "step must be positive");
    if (spec.model().near_singular(p, 2.0 * step))
        throw GeometryError(ErrorCode::StencilOutOfDomain, "stencil reaches a declared singularity");
    const double s = step;
    // Values on the 33-point stencil.
    auto at = [&](const Vec4& d) { return sample_or_throw(h, p + d); };
    const double h0 = at(Vec4::Zero());
    std::array<double, 4> hp{}, hm{};
    std::array<std::array<double, 4>, 4> hpp{}, hpm{}, hmp{}, hmm{};
    for (int i = 0; i < 4; ++i) {
        hp[i] = at(s * unit(i));
        hm[i] = at(-s * unit(i));
        for (int j = i + 1; j < 4; ++j) {
            hpp[i][j] = at(s * unit(i) + s * unit(j));
            hpm[i][j] = at(s * unit(i) - s * unit(j));
            hmp[i][j] = at(-s * unit(i) + s * unit(j));
            hmm[i][j] = at(-s * unit(i) - s * unit(j));
        }
    }
    // value at p + a e_i + b e_j for a, b in {-1, 0, 1}
    auto val2 = [&](int i, int a, int j, int b) -> double {
        if (a == 0 && b == 0) return h0;
        if (b == 0) return a > 0 ? hp[i] : hm[i];
        if (a == 0) return b > 0 ? hp[j] : hm[j];
        if (i > j) {
            std::swap(i, j);
            std::swap(a, b);
        }
        if (a > 0) return b > 0 ? hpp[i][j] : hpm[i][j];
        return b > 0 ? hmp[i][j] : hmm[i][j];
    };
    // Gradient of h at the half node p + (sgn/2) e_i.
    auto grad_half = [&](int i, int sgn) {
        Vec4 g;
        for (int j = 0; j < 4; ++j) {
            if (j == i) {
                g[j] = sgn * (val2(i, sgn, i, 0) - h0) / s;
            } else {
                g[j] = (val2(i, sgn, j, 1) - val2(i, sgn, j, -1) + val2(i, 0, j, 1) - val2(i, 0, j, -1)) / (4 * s);
            }
        }
        return g;
    };
    double div = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int sgn : {1, -1}) {
            const Mat4 G = metric_at(spec, p + (0.5 * sgn * s) * unit(i));
            const Mat4 Ginv = G.inverse();
            const double flux = std::sqrt(G.determinant()) * Ginv.row(i).dot(grad_half(i, sgn));
            div += sgn * flux;
        }
    }
    return div / (s * std::sqrt(metric_at(spec, p).determinant()));
}

double log_cos2_pde_residual(const ImmersionSpec& spec, const ChartPoint& p, double step, const Tolerances& tol,
                        const GuardBands& guard) {
    auto log_cos2 = [&](const ChartPoint& q) {
        const PointGeometry g = point_geometry(spec, q, tol);
        const double c2 = g.angles[0] * g.angles[0];
        if (!(c2 >= guard.lagrangian))
            throw GeometryError(ErrorCode::NearLagrangian, "cos^2 below the Lagrangian guard band");
        return std::log(c2);
    };
    log_cos2(p);
    const double lap = laplace_beltrami(spec, log_cos2, p, step);
    const double s = curvature_package(spec, p, tol).scalar;
    return std::abs(lap - s);
}

namespace {

std::array<double, 4> eta_chart_guarded(const ImmersionSpec& spec, const ChartPoint& q, const Tolerances& tol,
                                        const GuardBands& guard) {
    const PointGeometry g = point_geometry(spec, q, tol);
    if (!(g.sin2() >= guard.complex))
        throw GeometryError(ErrorCode::NearComplex, "sin^2 below the complex guard band");
    const auto ii = second_fundamental_form(g);
    const EtaForm e = eta_form(g, ii, gauss_curvature(ii), normal_curvature(ii), tol);
    if (!e.present) throw GeometryError(ErrorCode::NearComplex, "eta undefined at this node");
    return e.chart;
}

}  // namespace

double exterior_derivative_eta(const ImmersionSpec& spec, const ChartPoint& p, double step, const Tolerances& tol,
                               const GuardBands& guard) {
    if (spec.model().near_singular(p, 2.0 * step))
        throw GeometryError(ErrorCode::StencilOutOfDomain, "stencil reaches a declared singularity");
    // components [eta_123, eta_023, eta_013, eta_012]; d eta_0123 = d0 e123 - d1 e023 + d2 e013 - d3 e012
    const double sign[4] = {1.0, -1.0, 1.0, -1.0};
    double d = 0.0;
    for (int i = 0; i < 4; ++i) {
        const auto ep = eta_chart_guarded(spec, p + step * unit(i), tol, guard);
        const auto em = eta_chart_guarded(spec, p - step * unit(i), tol, guard);
        d += sign[i] * (ep[static_cast<std::size_t>(i)] - em[static_cast<std::size_t>(i)]) / (2.0 * step);
    }
    return d;
}

double transgression_identity_residual(const ImmersionSpec& spec, const ChartPoint& p, double step, const Tolerances& tol,
                            const GuardBands& guard) {
    const CurvaturePackage c = curvature_package(spec, p, tol);
    if (!(c.geom.sin2() >= guard.complex))
        throw GeometryError(ErrorCode::NearComplex, "sin^2 below the complex guard band");
    const double deta = exterior_derivative_eta(spec, p, step, tol, guard);
    const double vol = c.geom.orientation_sign() * std::sqrt(c.geom.metric.determinant());
    const double lhs = c.densities.p1_minus_nm - c.densities.p1_minus_tm;
    const double rhs = deta / (vol * std::numbers::pi * std::numbers::pi);
    return std::abs(lhs - rhs);
}

double observed_order(double residual_h, double residual_half) {
    return std::log2(std::abs(residual_h) / std::abs(residual_half));
}

RichardsonPair richardson(const std::function<double(double)>& residual, double step) {
    RichardsonPair r;
    r.residual_h = residual(step);
    r.residual_half = residual(0.5 * step);
    r.order = observed_order(r.residual_h, r.residual_half);
    return r;
}

namespace {

constexpr int kTriples[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};

// d of a chart 2-form field given by a sampler, components on kTriples.
std::array<double, 4> exterior_derivative_2form(const std::function<Mat4(const ChartPoint&)>& form,
                                                const ChartPoint& p, double step) {
    std::array<Mat4, 4> dA;
    for (int i = 0; i < 4; ++i) dA[i] = (form(p + step * unit(i)) - form(p - step * unit(i))) / (2.0 * step);
    std::array<double, 4> out{};
    for (int t = 0; t < 4; ++t) {
        const int i = kTriples[t][0], j = kTriples[t][1], k = kTriples[t][2];
        out[t] = dA[i](j, k) - dA[j](i, k) + dA[k](i, j);
    }
    return out;
}

}  // namespace

double pullback_form_closedness(const ImmersionSpec& spec, const ChartPoint& p, double step) {
    auto P = [&](const ChartPoint& q) {
        const Mat4 df = evaluate_jet(spec, q, 1).jacobian;
        return Mat4(df - df.transpose());
    };
    const auto d = exterior_derivative_2form(P, p, step);
    double m = 0.0;
    for (double v : d) m = std::max(m, std::abs(v));
    return m;
}

double pullback_form_coclosedness(const ImmersionSpec& spec, const ChartPoint& p, double step) {
    // (delta a)^j = -(1/sqrt g) d_i (sqrt g a^{ij}) for a skew 2-form.
    auto raised = [&](const ChartPoint& q) {
        const Mat4 df = evaluate_jet(spec, q, 1).jacobian;
        const Mat4 G = Mat4::Identity() + df.transpose() * df;
        const Mat4 Gi = G.inverse();
        return Mat4(std::sqrt(G.determinant()) * Gi * (df - df.transpose()) * Gi);
    };
    Vec4 div = Vec4::Zero();
    for (int i = 0; i < 4; ++i) {
        const Mat4 d = (raised(p + step * unit(i)) - raised(p - step * unit(i))) / (2.0 * step);
        div += d.row(i).transpose();
    }
    const Mat4 G = metric_at(spec, p);
    return (div / std::sqrt(G.determinant())).norm();
}

double kahler_form_relation_defect(const ImmersionSpec& spec, const ChartPoint& p, double step,
                                   const GuardBands& guard) {
    auto cos_at = [&](const ChartPoint& q) {
        const PointGeometry g = point_geometry(spec, q);
        if (!(g.angles[0] * g.angles[0] >= guard.lagrangian))
            throw GeometryError(ErrorCode::NearLagrangian, "cos^2 below the Lagrangian guard band");
        return g;
    };
    auto omega_M = [&](const ChartPoint& q) {
        const PointGeometry g = cos_at(q);
        return Mat4(g.pullback_form / g.angles[0]);
    };
    const auto d = exterior_derivative_2form(omega_M, p, step);
    Vec4 dlog;
    for (int i = 0; i < 4; ++i)
        dlog[i] = (std::log(cos_at(p + step * unit(i)).angles[0]) - std::log(cos_at(p - step * unit(i)).angles[0]))
                  / (2.0 * step);
    const Mat4 w = omega_M(p);
    double m = 0.0;
    for (int t = 0; t < 4; ++t) {
        const int i = kTriples[t][0], j = kTriples[t][1], k = kTriples[t][2];
        const double wedge = dlog[i] * w(j, k) - dlog[j] * w(i, k) + dlog[k] * w(i, j);
        m = std::max(m, std::abs(d[static_cast<std::size_t>(t)] + wedge));
    }
    return m;
}

namespace {

// Gamma[k][i][j] = Gamma^k_{ij} from the exact metric derivatives of the jet.
Tensor3 christoffel(const Jet3& J) {
    const Mat4& df = J.jacobian;
    const Mat4 G = Mat4::Identity() + df.transpose() * df;
    const Mat4 Gi = G.inverse();
    // dg[k][i][j] = d_k g_ij
    Tensor3 dg{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0.0;
                for (int a = 0; a < 4; ++a) s += J.hessian[a][k][i] * df(a, j) + df(a, i) * J.hessian[a][k][j];
                dg[k][i][j] = s;
            }
    Tensor3 gam{};
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0.0;
                for (int l = 0; l < 4; ++l) s += Gi(k, l) * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                gam[k][i][j] = 0.5 * s;
            }
    return gam;
}

}  // namespace

Tensor4 christoffel_curvature(const ImmersionSpec& spec, const ChartPoint& p, double step) {
    const PointGeometry g = point_geometry(spec, p);
    const Tensor3 gam = christoffel(g.jet);
    std::array<Tensor3, 4> dgam;  // dgam[i] = d_i Gamma
    for (int i = 0; i < 4; ++i) {
        const Tensor3 a = christoffel(evaluate_jet(spec, p + step * unit(i), 2));
        const Tensor3 b = christoffel(evaluate_jet(spec, p - step * unit(i), 2));
        for (int k = 0; k < 4; ++k)
            for (int x = 0; x < 4; ++x)
                for (int y = 0; y < 4; ++y) dgam[i][k][x][y] = (a[k][x][y] - b[k][x][y]) / (2.0 * step);
    }
    // R(d_i, d_j) d_k = Rup[l][k][i][j] d_l, with R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
    Tensor4 chart{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int m = 0; m < 4; ++m) {
                    double s = 0.0;
                    for (int l = 0; l < 4; ++l) {
                        double r = dgam[i][l][j][k] - dgam[j][l][i][k];
                        for (int q = 0; q < 4; ++q) r += gam[l][i][q] * gam[q][j][k] - gam[l][j][q] * gam[q][i][k];
                        s += g.metric(l, m) * r;
                    }
                    // stored with the last two slots exchanged to match gauss_curvature
                    chart[i][j][m][k] = s;
                }
    const Mat4& Ri = g.frame_change_inv;
    Tensor4 out{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double s = 0.0;
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j)
                            for (int k = 0; k < 4; ++k)
                                for (int l = 0; l < 4; ++l)
                                    s += Ri(i, a) * Ri(j, b) * Ri(k, c) * Ri(l, d) * chart[i][j][k][l];
                    out[a][b][c][d] = s;
                }
    return out;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw GeometryError(ErrorCode::InvalidArgument, "quadrature order must be positive");
    // Golub-Welsch: eigen-decomposition of the Jacobi matrix.
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        T(k, k - 1) = beta;
        T(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double v0 = es.eigenvectors()(0, k);
        nodes[static_cast<std::size_t>(k)] = 0.5 * (b - a) * es.eigenvalues()[k] + 0.5 * (a + b);
        weights[static_cast<std::size_t>(k)] = (b - a) * v0 * v0;
    }
}

namespace {

double det3_rows(const Vec4& a, const Vec4& b, const Vec4& c, int i, int j, int k) {
    return a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) + a[k] * (b[i] * c[j] - b[j] * c[i]);
}

double sphere_integral(const ImmersionSpec& spec, const ChartPoint& center, double radius, int order,
                       const Tolerances& tol, const GuardBands& guard) {
    std::vector<double> xp, wp, xt, wt, xf, wf;
    gauss_legendre(order, 0.0, std::numbers::pi, xp, wp);
    gauss_legendre(order, 0.0, std::numbers::pi, xt, wt);
    gauss_legendre(order, 0.0, 2.0 * std::numbers::pi, xf, wf);
    const std::size_t n = static_cast<std::size_t>(order);
    std::vector<double> parts(n * n * n, 0.0);
    parallel_for(parts.size(), 0, [&](std::size_t idx) {
        const std::size_t a = idx / (n * n), b = (idx / n) % n, c = idx % n;
        const double ps = xp[a], th = xt[b], ph = xf[c];
        const double sp = std::sin(ps), cp = std::cos(ps), st = std::sin(th), ct = std::cos(th);
        const double sf = std::sin(ph), cf = std::cos(ph);
        const Vec4 dir(cp, sp * ct, sp * st * cf, sp * st * sf);
        const Vec4 dps = radius * Vec4(-sp, cp * ct, cp * st * cf, cp * st * sf);
        const Vec4 dth = radius * Vec4(0.0, -sp * st, sp * ct * cf, sp * ct * sf);
        const Vec4 dph = radius * Vec4(0.0, 0.0, -sp * st * sf, sp * st * cf);
        const auto eta = eta_chart_guarded(spec, center + radius * dir, tol, guard);
        double v = 0.0;
        for (int t = 0; t < 4; ++t)
            v += eta[static_cast<std::size_t>(t)] * det3_rows(dps, dth, dph, kTriples[t][0], kTriples[t][1], kTriples[t][2]);
        parts[idx] = wp[a] * wt[b] * wf[c] * v;
    });
    double total = 0.0;
    for (double v : parts) total += v;
    return total;
}

}  // namespace

TubeResult tube_integral_eta(const ImmersionSpec& spec, const ChartPoint& center, double radius, int order,
                             double rel_tol, const Tolerances& tol, const GuardBands& guard) {
    if (!(radius > 0.0)) throw GeometryError(ErrorCode::InvalidArgument, "radius must be positive");
    TubeResult r;
    r.order = order;
    r.coarse = sphere_integral(spec, center, radius, order, tol, guard);
    r.value = sphere_integral(spec, center, radius, order + 4, tol, guard);
    if (std::abs(r.value - r.coarse) > rel_tol * (1.0 + std::abs(r.value)))
        throw GeometryError(ErrorCode::QuadratureNonConvergent, "tube integral changed between quadrature orders");
    return r;
}

double shell_integral_deta(const ImmersionSpec& spec, const ChartPoint& center, double r1, double r2, int order,
                           double step, const Tolerances& tol, const GuardBands& guard) {
    std::vector<double> xr, wr, xp, wp, xt, wt, xf, wf;
    gauss_legendre(order, r1, r2, xr, wr);
    gauss_legendre(order, 0.0, std::numbers::pi, xp, wp);
    gauss_legendre(order, 0.0, std::numbers::pi, xt, wt);
    gauss_legendre(order, 0.0, 2.0 * std::numbers::pi, xf, wf);
    const std::size_t n = static_cast<std::size_t>(order);
    std::vector<double> parts(n * n * n * n, 0.0);
    parallel_for(parts.size(), 0, [&](std::size_t idx) {
        const std::size_t a = idx / (n * n * n), b = (idx / (n * n)) % n, c = (idx / n) % n, d = idx % n;
        const double r = xr[a], ps = xp[b], th = xt[c], ph = xf[d];
        const double sp = std::sin(ps), st = std::sin(th);
        const Vec4 dir(std::cos(ps), sp * std::cos(th), sp * st * std::cos(ph), sp * st * std::sin(ph));
        const double jac = r * r * r * sp * sp * st;
        parts[idx] = wr[a] * wp[b] * wt[c] * wf[d] * jac
                     * exterior_derivative_eta(spec, center + r * dir, step, tol, guard);
    });
    double total = 0.0;
    for (double v : parts) total += v;
    return total;
}

}  // namespace kahler
