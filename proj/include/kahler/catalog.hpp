#pragma once

#include "kahler/jets.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kahler {

struct Quaternion {
    double w = 0.0, x = 0.0, y = 0.0, z = 0.0;  // w + x i + y j + z k

    Quaternion conj() const { return {w, -x, -y, -z}; }
    double norm() const;
};

Quaternion operator*(const Quaternion& a, const Quaternion& b);
Quaternion operator+(const Quaternion& a, const Quaternion& b);
Quaternion operator*(double s, const Quaternion& a);

enum class LocusKind { Complex, Lagrangian, Singular };

const char* locus_kind_name(LocusKind k);

struct DeclaredLocus {
    LocusKind kind;
    std::string description;
    // Vanishes exactly on the locus; grows away from it. Used for masking.
    std::function<double(const ChartPoint&)> measure;
};

using ParamMap = std::map<std::string, double>;

struct CatalogEntry {
    std::string id;
    std::string description;
    ParamMap defaults;
    int codomain_dim = 4;
    std::function<std::vector<DeclaredLocus>(const ParamMap&)> loci;
    // Closed-form cos(theta) where one is known.
    std::function<std::optional<double>(const ChartPoint&, const ParamMap&)> expected_cos;
    // Upper bound on cos(theta) over the whole domain, where one is known.
    std::function<std::optional<double>(const ParamMap&)> cos_bound;
    std::function<std::shared_ptr<const MapModel>(const ParamMap&)> make;
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& find_catalog_entry(const std::string& id);

// Fills defaults and rejects unknown parameter names.
ParamMap resolve_params(const CatalogEntry& e, const ParamMap& given);

std::vector<DeclaredLocus> declared_loci(const ImmersionSpec& spec);
std::optional<double> expected_cos(const ImmersionSpec& spec, const ChartPoint& p);

// 2(a^2+b^2) / (1+2(a^2+b^2)). Not a valid bound on cos(theta) for the family in general; see README.
double alpha_beta_naive_bound(double alpha, double beta);

// rho on the branch rho > (sqrt5/2) r solving (4 rho^2 - 5 r^2)^2 rho = c, as a series in s = r^2.
Series3 coassociative_profile(double s, double c);

}  // namespace kahler
