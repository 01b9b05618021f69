#include "sosbound/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sosbound/estimators.hpp"

namespace sosbound {

namespace {

using Clock = std::chrono::steady_clock;

MeasureSpec parse_measure(const std::string& name, double lambda, const DomainSpec& d) {
    MeasureSpec m = MeasureSpec::lebesgue();
    if (name == "lebesgue")
        m = MeasureSpec::lebesgue();
    else if (name == "chebyshev")
        m = MeasureSpec::chebyshev();
    else if (name == "box-jacobi")
        m = MeasureSpec::box_jacobi(lambda);
    else if (name == "ball-jacobi")
        m = MeasureSpec::ball_jacobi(lambda);
    else
        throw ConfigError("unknown measure '" + name + "'");
    if (!measure_compatible(d, m))
        throw ConfigError("measure '" + name + "' incompatible with domain");
    return m;
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["function"] = function;
    j["domain"] = domain;
    j["measure"] = measure;
    j["lambda"] = lambda;
    j["r_max"] = r_max;
    j["engine"] = engine;
    if (estimator) j["estimator"] = *estimator;
    if (f_min) j["f_min"] = *f_min;
    j["recentre"] = do_recentre;
    j["output"] = output;
    j["format"] = format;
    j["precision_bits"] = precision_bits;
    j["seed"] = seed;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.function = j.value("function", c.function);
    c.domain = j.value("domain", c.domain);
    c.measure = j.value("measure", c.measure);
    c.lambda = j.value("lambda", c.lambda);
    c.r_max = j.value("r_max", c.r_max);
    c.engine = j.value("engine", c.engine);
    if (j.contains("estimator")) c.estimator = j.at("estimator").get<std::string>();
    if (j.contains("f_min")) c.f_min = j.at("f_min").get<double>();
    c.do_recentre = j.value("recentre", c.do_recentre);
    c.output = j.value("output", c.output);
    c.format = j.value("format", c.format);
    c.precision_bits = j.value("precision_bits", c.precision_bits);
    c.seed = j.value("seed", c.seed);
    return c;
}

ResolvedExperiment resolve(const ExperimentConfig& cfg) {
    if (cfg.r_max < 1 || cfg.r_max > 24)
        throw ConfigError("r_max must be in [1, 24]");
    if (cfg.engine != "eigen" && cfg.engine != "needle" && cfg.engine != "both")
        throw ConfigError("engine must be eigen, needle or both");
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("format must be csv or json");
    if (cfg.precision_bits < 53)
        throw ConfigError("precision_bits must be >= 53");

    DomainSpec domain = [&] {
        if (!cfg.domain.empty() && cfg.domain.front() == '{') {
            try {
                return DomainSpec::from_json(nlohmann::json::parse(cfg.domain));
            } catch (const std::exception& e) {
                throw ConfigError(std::string("bad domain JSON: ") + e.what());
            }
        }
        if (!domain_exists(cfg.domain)) throw ConfigError("unknown domain '" + cfg.domain + "'");
        return domain_by_name(cfg.domain);
    }();

    Polynomial f = Polynomial::constant(domain.n_vars(), 0.0);
    double f_min = std::numeric_limits<double>::quiet_NaN();
    std::vector<Eigen::VectorXd> minimizers;
    if (!cfg.function.empty() && cfg.function.front() == '{') {
        try {
            f = Polynomial::from_json(nlohmann::json::parse(cfg.function));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad polynomial JSON: ") + e.what());
        }
    } else {
        if (!function_exists(cfg.function))
            throw ConfigError("unknown function '" + cfg.function + "'");
        const RegistryEntry& entry = function_by_name(cfg.function);
        f = entry.f;
        f_min = entry.f_min;
        minimizers = entry.minimizers;
    }
    if (cfg.f_min) f_min = *cfg.f_min;
    if (f.n_vars() != domain.n_vars())
        throw ConfigError("function/domain dimension mismatch");

    MeasureSpec measure = parse_measure(cfg.measure, cfg.lambda, domain);

    if (cfg.do_recentre || cfg.estimator || cfg.engine != "eigen") {
        if (minimizers.empty())
            throw ConfigError("recentre/estimator/needle runs need a registry function "
                              "with a known minimizer");
    }

    if (cfg.do_recentre) {
        RecentredProblem rp = recentre(f, domain, minimizers[0]);
        f = rp.f;
        domain = rp.domain;
        minimizers = {Eigen::VectorXd::Zero(domain.n_vars())};
        f_min = 0.0;
        if (measure.kind != MeasureKind::Lebesgue)
            throw ConfigError("recentre supports the Lebesgue measure only");
    }

    if (cfg.estimator) {
        const Eigen::VectorXd a = minimizers[0];
        if (*cfg.estimator == "quadratic") {
            SmoothnessConstants sc = smoothness_constants(f, domain, 50);
            f = quadratic_estimator(f, a, sc.gamma, domain).g;
        } else if (*cfg.estimator == "linear-ball") {
            if (domain.kind() != DomainKind::Ball)
                throw ConfigError("estimator linear-ball needs a ball domain");
            SmoothnessConstants sc = smoothness_constants(f, domain, 50);
            const Eigen::VectorXd c = domain.ball_center();
            const double rho = domain.ball_radius();
            Eigen::VectorXd grad = f.gradient_at(a);
            const double lam = grad.dot(c - a) / (c - a).squaredNorm();
            f = linear_estimator_on_ball(f, a, c, rho, sc.gamma, lam).g;
        } else {
            throw ConfigError("estimator must be quadratic or linear-ball "
                              "(lipschitz is not a polynomial and never enters the eigen engine)");
        }
    }

    if (cfg.engine != "eigen" && measure.kind != MeasureKind::Lebesgue)
        throw ConfigError("needle bounds are defined for the Lebesgue measure only");

    return {std::move(f), std::move(domain), measure, f_min, std::move(minimizers)};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ResolvedExperiment rx = resolve(cfg);
    ExperimentResult out;
    out.config = cfg;

    const bool want_eigen = cfg.engine == "eigen" || cfg.engine == "both";
    const bool want_needle = cfg.engine == "needle" || cfg.engine == "both";

    std::vector<SeriesRow> rows(cfg.r_max);
    for (int r = 1; r <= cfg.r_max; ++r) rows[r - 1].r = r;

    if (want_eigen) {
        EigenBoundEngine engine(rx.domain, rx.measure, cfg.precision_bits);
        for (int r = 1; r <= cfg.r_max; ++r) {
            const auto t0 = Clock::now();
            BoundResult b = engine.solve_for(rx.f, r);
            SeriesRow& row = rows[r - 1];
            row.bound = b.value;
            row.error = b.value - rx.f_min;
            row.residual = b.residual;
            row.assemble_ms = b.assemble_ms;
            row.solve_ms = b.solve_ms;
            row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        }
    }

    if (want_needle) {
        // Needle bounds run on the recentred problem; transport back is the
        // identity on values (bounds are affine-invariant).
        RecentredProblem rp = recentre(rx.f, rx.domain, rx.minimizers[0]);
        const double f_at_min = rx.f.evaluate(rx.minimizers[0]);
        for (int r = 1; r <= cfg.r_max; ++r) {
            SeriesRow& row = rows[r - 1];
            const auto t0 = Clock::now();
            if (r < 2) {
                // schedules need log r > 0
                row.needle_bound = std::numeric_limits<double>::quiet_NaN();
                if (!want_eigen) {
                    row.bound = row.needle_bound;
                    row.error = row.needle_bound;
                }
                continue;
            }
            NeedleBoundResult nb = needle_bound(rp.f, rp.domain, r, NeedleRegime::ConvexBody);
            row.needle_bound = nb.value + f_at_min;
            row.needle_h = nb.h;
            row.needle_in_regime = nb.in_regime;
            if (!want_eigen) {
                row.bound = row.needle_bound;
                row.error = row.needle_bound - rx.f_min;
                row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
            }
        }
    }

    out.rows = std::move(rows);
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string ExperimentResult::to_csv() const {
    std::ostringstream os;
    const bool eigen = config.engine == "eigen" || config.engine == "both";
    const bool needle = config.engine == "needle" || config.engine == "both";
    os << "r,bound,error";
    if (eigen) os << ",residual";
    if (needle) os << ",needle_bound,needle_h,needle_in_regime";
    os << ",wall_ms,assemble_ms,solve_ms\n";
    for (const auto& row : rows) {
        os << row.r << ',' << format_double(row.bound) << ',' << format_double(row.error);
        if (eigen) os << ',' << format_double(row.residual);
        if (needle)
            os << ',' << format_double(row.needle_bound) << ',' << format_double(row.needle_h)
               << ',' << (row.needle_in_regime ? 1 : 0);
        os << ',' << format_double(row.wall_ms) << ',' << format_double(row.assemble_ms) << ','
           << format_double(row.solve_ms) << '\n';
    }
    return os.str();
}

nlohmann::json ExperimentResult::to_json() const {
    nlohmann::json j;
    j["config"] = config.to_json();
    j["series"] = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json r;
        r["r"] = row.r;
        r["bound"] = row.bound;
        r["error"] = row.error;
        r["residual"] = row.residual;
        r["wall_ms"] = row.wall_ms;
        if (config.engine != "eigen") {
            r["needle_bound"] = row.needle_bound;
            r["needle_h"] = row.needle_h;
            r["needle_in_regime"] = row.needle_in_regime;
        }
        j["series"].push_back(std::move(r));
    }
    return j;
}

void write_file_atomic(const std::string& path, const std::string& body) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        os << body;
    }
    fs::rename(tmp, target);
}

int run_and_emit(const ExperimentConfig& cfg, std::string* message) {
    try {
        ExperimentResult result = run_experiment(cfg);
        const std::string body =
            cfg.format == "csv" ? result.to_csv() : result.to_json().dump(2) + "\n";
        if (cfg.output.empty())
            std::cout << body;
        else
            write_file_atomic(cfg.output, body);
        return 0;
    } catch (const ConfigError& e) {
        if (message) *message = e.what();
        return 2;
    } catch (const std::invalid_argument& e) {
        if (message) *message = e.what();
        return 2;
    } catch (const NumericalError& e) {
        if (message) *message = e.what();
        return 3;
    }
}

RatioReport ratio_from_series(const BoundSeries& a, const BoundSeries& b) {
    if (a.results.size() != b.results.size())
        throw ConfigError("ratio: series must cover the same r range");
    RatioReport rep;
    for (size_t i = 0; i < a.results.size(); ++i) {
        if (a.results[i].r != b.results[i].r)
            throw ConfigError("ratio: series must cover the same r range");
        const double ea = a.results[i].value - a.f_min;
        const double eb = b.results[i].value - b.f_min;
        rep.r.push_back(a.results[i].r);
        rep.error_a.push_back(ea);
        rep.error_b.push_back(eb);
        rep.ratio.push_back(eb == 0.0 ? std::numeric_limits<double>::quiet_NaN() : ea / eb);
    }
    // tail statistics over the last 5 finite ratios
    std::vector<double> tail;
    for (auto it = rep.ratio.rbegin(); it != rep.ratio.rend() && tail.size() < 5; ++it)
        if (std::isfinite(*it)) tail.push_back(*it);
    if (!tail.empty()) {
        double s = 0;
        for (double v : tail) s += v;
        rep.tail_mean = s / tail.size();
        double q = 0;
        for (double v : tail) q += (v - rep.tail_mean) * (v - rep.tail_mean);
        rep.tail_stdev = tail.size() > 1 ? std::sqrt(q / (tail.size() - 1)) : 0.0;
    }
    return rep;
}

RatioReport ratio_report(const ExperimentConfig& a, const ExperimentConfig& b) {
    if (a.function != b.function) throw ConfigError("ratio: configs must share the function");
    if (a.r_max != b.r_max) throw ConfigError("ratio: configs must share r_max");
    ResolvedExperiment ra = resolve(a);
    ResolvedExperiment rb = resolve(b);
    BoundSeries sa = upper_bound_series(ra.f, ra.domain, ra.measure, a.r_max, ra.f_min,
                                        a.precision_bits);
    BoundSeries sb = upper_bound_series(rb.f, rb.domain, rb.measure, b.r_max, rb.f_min,
                                        b.precision_bits);
    return ratio_from_series(sa, sb);
}

std::string RatioReport::to_csv() const {
    std::ostringstream os;
    os << "r,error_a,error_b,ratio\n";
    for (size_t i = 0; i < r.size(); ++i)
        os << r[i] << ',' << format_double(error_a[i]) << ',' << format_double(error_b[i]) << ','
           << format_double(ratio[i]) << '\n';
    os << "# tail_mean=" << format_double(tail_mean) << ",tail_stdev=" << format_double(tail_stdev)
       << "\n";
    return os.str();
}

RateRow rate_report(const ExperimentConfig& cfg, int window_lo, int window_hi, double ceiling) {
    ResolvedExperiment rx = resolve(cfg);
    if (window_lo < 1 || window_hi > cfg.r_max || window_lo > window_hi)
        throw ConfigError("rate: window outside the series");
    BoundSeries s = upper_bound_series(rx.f, rx.domain, rx.measure, cfg.r_max, rx.f_min,
                                       cfg.precision_bits);
    RateRow row;
    row.experiment = cfg.function + " on " + cfg.domain + " (" + rx.measure.describe() + ")";
    try {
        RateFit fit = rate_fit(s, window_lo, window_hi);
        row.slope = fit.slope;
        row.stderr_ = fit.stderr_;
        row.violates_ceiling = fit.slope > ceiling;
    } catch (const ConvergedExactly&) {
        row.converged_exactly = true;
    }
    return row;
}

}  // namespace sosbound
