#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sosbound/bounds.hpp"
#include "sosbound/registry.hpp"

namespace sosbound {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One experiment cell: a function on a (domain, measure) with a bound
// engine. Functions and domains are registry names or inline JSON literals.
struct ExperimentConfig {
    std::string function = "linear";
    std::string domain = "box2";
    std::string measure = "lebesgue";  // lebesgue | chebyshev | box-jacobi | ball-jacobi
    double lambda = 0.0;               // for the *-jacobi measures
    int r_max = 10;
    std::string engine = "eigen";      // eigen | needle | both
    std::optional<std::string> estimator;  // quadratic | linear-ball
    std::optional<double> f_min;       // overrides the registry value
    bool do_recentre = false;
    std::string output;                // empty = stdout
    std::string format = "csv";        // csv | json
    unsigned precision_bits = 256;
    uint64_t seed = 20200927;

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ResolvedExperiment {
    Polynomial f;
    DomainSpec domain;
    MeasureSpec measure;
    double f_min;
    std::vector<Eigen::VectorXd> minimizers;
};

// Validates and resolves names/JSON/measures; throws ConfigError.
ResolvedExperiment resolve(const ExperimentConfig& cfg);

struct SeriesRow {
    int r = 0;
    double bound = 0.0;
    double error = 0.0;
    double residual = 0.0;      // eigen engine
    double needle_bound = 0.0;  // needle engine
    double needle_h = 0.0;
    bool needle_in_regime = false;
    double wall_ms = 0.0;
    double assemble_ms = 0.0;
    double solve_ms = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<SeriesRow> rows;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Writes result artifacts (atomic per file). Returns a process exit code:
// 0 success, 2 config error, 3 numerical failure.
int run_and_emit(const ExperimentConfig& cfg, std::string* message = nullptr);

struct RatioReport {
    std::vector<int> r;
    std::vector<double> error_a, error_b, ratio;
    double tail_mean = 0.0;   // over the last 5 finite ratios
    double tail_stdev = 0.0;

    std::string to_csv() const;
};

// E_A^(r) / E_B^(r) for two configs of the same function over the same
// r range. Zero denominators produce NaN rows that tail stats skip.
RatioReport ratio_report(const ExperimentConfig& a, const ExperimentConfig& b);
RatioReport ratio_from_series(const BoundSeries& a, const BoundSeries& b);

struct RateRow {
    std::string experiment;
    double slope = 0.0;
    double stderr_ = 0.0;
    bool converged_exactly = false;
    bool violates_ceiling = false;  // slope above the theorem-implied ceiling
};

// Fitted log-log slope of the error over [window_lo, window_hi]; the
// ceiling defaults to -0.75 (the convex-body -1 rate plus tolerance).
RateRow rate_report(const ExperimentConfig& cfg, int window_lo, int window_hi,
                    double ceiling = -0.75);

// Deterministic CSV float formatting used by all emitters.
std::string format_double(double v);

void write_file_atomic(const std::string& path, const std::string& body);

}  // namespace sosbound
