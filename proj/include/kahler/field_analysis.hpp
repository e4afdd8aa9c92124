#pragma once

#include "kahler/catalog.hpp"
#include "kahler/curvature.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kahler {

struct GridRequest {
    std::array<double, 4> lo{-1, -1, -1, -1};
    std::array<double, 4> hi{1, 1, 1, 1};
    std::array<int, 4> resolution{5, 5, 5, 5};

    std::size_t size() const;
    ChartPoint node(std::size_t index) const;  // row-major, x slowest
    std::array<double, 4> spacing() const;
    double scale() const;  // largest box side
};

enum Field : unsigned {
    FieldAngles = 1u << 0,
    FieldMeanCurvature = 1u << 1,
    FieldScalar = 1u << 2,
    FieldCalibration = 1u << 3,
    FieldDensities = 1u << 4,
    FieldEta = 1u << 5,
    FieldAll = (1u << 6) - 1,
};

// Parses "angles", "mean_curvature", "scalar", "calibration", "densities", "eta".
unsigned parse_field(const std::string& name);
std::vector<std::string> field_columns(unsigned fields);

struct GuardBands {
    double lagrangian = 1e-4;  // cos^2 threshold for the log cos^2 PDE
    double complex = 1e-4;     // sin^2 threshold for eta-based identities
    double singular = 1e-6;    // masking radius around declared singular loci
};

struct NodeSample {
    ChartPoint p;
    std::string status = "ok";  // ok | skipped:<reason> | error:<code>
    PointClass cls = PointClass::Generic;
    bool classified = false;  // cls is meaningful
    std::vector<std::optional<double>> values;  // aligned with FieldGrid::columns
};

struct FieldGrid {
    GridRequest request;
    unsigned fields = 0;
    std::vector<std::string> columns;
    std::vector<NodeSample> samples;
};

// Evaluates `fn(i)` for i in [0, n) on a worker pool; results land at their own index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

FieldGrid scan(const ImmersionSpec& spec, const GridRequest& req, unsigned fields, const Tolerances& tol = {},
               const GuardBands& guard = {}, unsigned threads = 0);

// Same as scan but over an explicit point list; `request` is left default.
FieldGrid scan_points(const ImmersionSpec& spec, const std::vector<ChartPoint>& points, unsigned fields,
                      const Tolerances& tol = {}, const GuardBands& guard = {}, unsigned threads = 0);

// Default step h = max(1e-4, 1e-3 * domain scale).
double default_fd_step(const GridRequest& req);

using ScalarSampler = std::function<double(const ChartPoint&)>;

// (1/sqrt g) d_i (sqrt g g^{ij} d_j h) with metric coefficients evaluated at half nodes.
double laplace_beltrami(const ImmersionSpec& spec, const ScalarSampler& h, const ChartPoint& p, double step);

double log_cos2_pde_residual(const ImmersionSpec& spec, const ChartPoint& p, double step, const Tolerances& tol = {},
                        const GuardBands& guard = {});

// d eta in chart coordinates: coefficient of dx dy dz dw.
double exterior_derivative_eta(const ImmersionSpec& spec, const ChartPoint& p, double step,
                               const Tolerances& tol = {}, const GuardBands& guard = {});

double transgression_identity_residual(const ImmersionSpec& spec, const ChartPoint& p, double step,
                            const Tolerances& tol = {}, const GuardBands& guard = {});

// Observed convergence order from residuals at h and h/2.
double observed_order(double residual_h, double residual_half);

struct RichardsonPair {
    double residual_h = 0, residual_half = 0, order = 0;
};

RichardsonPair richardson(const std::function<double(double)>& residual, double step);

// Max over components of the finite-difference d(F*omega).
double pullback_form_closedness(const ImmersionSpec& spec, const ChartPoint& p, double step);
// Norm of the finite-difference codifferential of F*omega.
double pullback_form_coclosedness(const ImmersionSpec& spec, const ChartPoint& p, double step);
// Max over components of d omega_M + d log cos(theta) ^ omega_M, omega_M = F*omega / cos(theta).
double kahler_form_relation_defect(const ImmersionSpec& spec, const ChartPoint& p, double step,
                                   const GuardBands& guard = {});

// Intrinsic curvature from finite-differenced Christoffel symbols, returned in the
// oriented orthonormal frame and in the same convention as gauss_curvature.
Tensor4 christoffel_curvature(const ImmersionSpec& spec, const ChartPoint& p, double step);

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

struct TubeResult {
    double value = 0;        // at order + 4
    double coarse = 0;       // at order
    int order = 0;
};

// Integral of the pulled-back eta over the coordinate 3-sphere |x - center| = radius, outward orientation.
TubeResult tube_integral_eta(const ImmersionSpec& spec, const ChartPoint& center, double radius, int order,
                             double rel_tol = 1e-6, const Tolerances& tol = {}, const GuardBands& guard = {});

// Integral of d eta over the shell r1 < |x - center| < r2, for the Stokes cross-check.
double shell_integral_deta(const ImmersionSpec& spec, const ChartPoint& center, double r1, double r2, int order,
                           double step, const Tolerances& tol = {}, const GuardBands& guard = {});

}  // namespace kahler
