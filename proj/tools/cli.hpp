#pragma once

#include "kahler/calibration.hpp"
#include "kahler/field_analysis.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kahler::cli {

enum ExitCode : int { ExitOk = 0, ExitConfig = 2, ExitIO = 3, ExitStrict = 4 };

// Carries the offending field path, e.g. "domain.lo[2]".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IOError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TubeConfig {
    ChartPoint center;
    std::vector<double> radii{0.8, 0.6};
    int order = 24;
    double rel_tol = 1e-3;
};

struct RunConfig {
    std::optional<ImmersionSpec> immersion;
    GridRequest grid;
    unsigned fields = 0;  // 0: command default
    Tolerances tol;
    GuardBands guard;
    std::optional<double> fd_step;
    double strict_tolerance = 1e-9;
    double min_order = 1.8;
    double residual_floor = 1e-12;  // residual pairs both below this count as converged
    std::size_t samples = 0;        // > 0: random points in the domain instead of the grid
    CayleyVariant variant = CayleyVariant::Omega;
    bool check_pde = true, check_identity = true;
    TubeConfig tube;
    std::string output_path;
    std::string output_format;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::size_t strict_failures = 0;
};

void write_csv(std::ostream& os, const Table& t);
void write_json(std::ostream& os, const Table& t);

struct RunOptions {
    unsigned threads = 0;
    std::uint64_t seed = 0;
    bool strict = false;
};

std::vector<ChartPoint> sample_points(const RunConfig& cfg, std::uint64_t seed);

Table cmd_angles(const RunConfig& cfg, const RunOptions& opt);
Table cmd_calibrate(const RunConfig& cfg, const RunOptions& opt);
Table cmd_curvature(const RunConfig& cfg, const RunOptions& opt);
Table cmd_pde_check(const RunConfig& cfg, const RunOptions& opt);
Table cmd_tube(const RunConfig& cfg, const RunOptions& opt);
Table cmd_catalog_list();

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kahler::cli
