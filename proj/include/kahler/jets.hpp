#pragma once

#include "kahler/taylor.hpp"
#include "kahler/types.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace kahler {

// f = (u, v, s, t) and its derivatives at one chart point.
// hessian[a][i][j] = d^2 f_a / dx_i dx_j, third[a][i][j][k] likewise.
struct Jet3 {
    Vec4 value = Vec4::Zero();
    Mat4 jacobian = Mat4::Zero();
    Tensor3 hessian{};
    Tensor4 third{};
    int order = 0;
};

struct Monomial {
    int target = 0;
    std::array<int, 4> exponents{0, 0, 0, 0};
    double coefficient = 0.0;

    int degree() const { return exponents[0] + exponents[1] + exponents[2] + exponents[3]; }
};

// A map R^4 -> R^4 able to produce exact third-order jets.
class MapModel {
public:
    virtual ~MapModel() = default;
    virtual Jet3 jet(const ChartPoint& p) const = 0;
    // True when p lies within `radius` of a declared singularity.
    virtual bool near_singular(const ChartPoint& p, double radius) const;
};

enum class SpecKind { Catalog, Polynomial };

class ImmersionSpec {
public:
    static ImmersionSpec catalog(const std::string& id, const std::map<std::string, double>& params = {});
    static ImmersionSpec polynomial(std::vector<Monomial> terms, int degree_cap = 8);
    static ImmersionSpec custom(std::shared_ptr<const MapModel> model, std::string label);

    SpecKind kind() const { return kind_; }
    const std::string& id() const { return id_; }
    const std::map<std::string, double>& params() const { return params_; }
    const std::vector<Monomial>& monomials() const { return terms_; }
    int degree_cap() const { return degree_cap_; }
    int codomain_dim() const { return codomain_dim_; }
    const MapModel& model() const { return *model_; }

private:
    SpecKind kind_ = SpecKind::Polynomial;
    std::string id_;
    std::map<std::string, double> params_;
    std::vector<Monomial> terms_;
    int degree_cap_ = 8;
    int codomain_dim_ = 4;
    std::shared_ptr<const MapModel> model_;
};

// Exact formal differentiation of a monomial table.
class PolynomialModel : public MapModel {
public:
    explicit PolynomialModel(std::vector<Monomial> terms) : terms_(std::move(terms)) {}
    Jet3 jet(const ChartPoint& p) const override;

private:
    std::vector<Monomial> terms_;
};

// Adapter for maps written with Taylor4 arithmetic.
class TaylorModel : public MapModel {
public:
    Jet3 jet(const ChartPoint& p) const override;
    virtual std::array<Taylor4, 4> components(const ChartPoint& p) const = 0;
};

Jet3 jet_from_taylor(const std::array<Taylor4, 4>& f);

Jet3 evaluate_jet(const ImmersionSpec& spec, const ChartPoint& p, int order = 3);

// Central-difference oracle built from point values only.
Jet3 finite_difference_jet(const ImmersionSpec& spec, const ChartPoint& p, double step);

// Parses the monomial-record block [{target, exponents, coefficient}, ...].
std::vector<Monomial> parse_monomials(const std::string& json_text);

}  // namespace kahler
