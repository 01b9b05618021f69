// sosbound: measure-based upper bounds for polynomial minimization.
//
// Subcommands:
//   bound         per-r bound series for one (function, domain, measure)
//   ratio         error-ratio series between two cells
//   rate          fitted log-log convergence slope over a window
//   needle-table  needle/half-needle value table for plotting
//   moments-dump  moment table of a (domain, measure) as CSV

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sosbound/experiment.hpp"
#include "sosbound/moments.hpp"
#include "sosbound/needles.hpp"

using namespace sosbound;

namespace {

void add_cell_options(CLI::App* cmd, ExperimentConfig& cfg, std::string suffix = "") {
    cmd->add_option("--function" + suffix, cfg.function,
                    "registry name or inline JSON polynomial");
    cmd->add_option("--domain" + suffix, cfg.domain, "registry name or inline JSON domain");
    cmd->add_option("--measure" + suffix, cfg.measure,
                    "lebesgue | chebyshev | box-jacobi | ball-jacobi");
    cmd->add_option("--lambda" + suffix, cfg.lambda, "weight exponent for the jacobi measures");
}

int emit_text(const std::string& out, const std::string& body) {
    if (out.empty())
        std::cout << body;
    else
        write_file_atomic(out, body);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lasserre measure-based upper bounds via moment matrices and needle densities"};
    app.require_subcommand(1);

    ExperimentConfig cfg;

    auto* bound = app.add_subcommand("bound", "compute a bound series");
    add_cell_options(bound, cfg);
    bound->add_option("--r-max", cfg.r_max, "hierarchy depth, in [1, 24]");
    bound->add_option("--engine", cfg.engine, "eigen | needle | both");
    std::string estimator;
    bound->add_option("--estimator", estimator, "replace f by an upper estimator: quadratic | linear-ball");
    double f_min_flag = std::numeric_limits<double>::quiet_NaN();
    bound->add_option("--f-min", f_min_flag, "known minimum for the error column");
    bound->add_flag("--recentre", cfg.do_recentre, "recentre at the registry minimizer first");
    bound->add_option("--output,-o", cfg.output, "output path (default stdout)");
    bound->add_option("--format", cfg.format, "csv | json");
    bound->add_option("--precision-bits", cfg.precision_bits, "assembly precision (default 256)");
    bound->add_option("--seed", cfg.seed, "seed for randomized validation helpers");

    ExperimentConfig cfg_b;
    auto* ratio = app.add_subcommand("ratio", "error ratio E_A/E_B of two cells");
    add_cell_options(ratio, cfg, "-a");
    add_cell_options(ratio, cfg_b, "-b");
    std::string ratio_function, ratio_output;
    int ratio_rmax = 10;
    unsigned ratio_bits = 256;
    ratio->add_option("--function", ratio_function, "shared function name")->required();
    ratio->add_option("--r-max", ratio_rmax, "hierarchy depth for both series");
    ratio->add_option("--output,-o", ratio_output, "output path (default stdout)");
    ratio->add_option("--precision-bits", ratio_bits, "assembly precision");

    auto* rate = app.add_subcommand("rate", "fitted log-log convergence slope");
    add_cell_options(rate, cfg);
    int win_lo = 10, win_hi = 20;
    double ceiling = -0.75;
    rate->add_option("--r-max", cfg.r_max, "hierarchy depth, in [1, 24]");
    rate->add_flag("--recentre", cfg.do_recentre, "recentre at the registry minimizer first");
    rate->add_option("--window-lo", win_lo, "window start");
    rate->add_option("--window-hi", win_hi, "window end");
    rate->add_option("--ceiling", ceiling, "slope ceiling used for the violation flag");
    rate->add_option("--precision-bits", cfg.precision_bits, "assembly precision");
    rate->add_option("--output,-o", cfg.output, "output path (default stdout)");

    auto* needle = app.add_subcommand("needle-table", "needle polynomial value table");
    int needle_r = 4;
    double needle_h = 0.2;
    int needle_points = 401;
    std::string needle_output;
    needle->add_option("--r", needle_r, "needle parameter r");
    needle->add_option("--width", needle_h, "needle width h in (0,1)");
    needle->add_option("--points", needle_points, "grid points on [-1, 1]");
    needle->add_option("--output,-o", needle_output, "output path (default stdout)");

    auto* mdump = app.add_subcommand("moments-dump", "moment table dump");
    std::string md_domain = "box2", md_measure = "lebesgue", md_output;
    double md_lambda = 0.0;
    int md_degree = 8;
    unsigned md_bits = 256;
    mdump->add_option("--domain", md_domain, "registry name or inline JSON domain");
    mdump->add_option("--measure", md_measure, "lebesgue | chebyshev | box-jacobi | ball-jacobi");
    mdump->add_option("--lambda", md_lambda, "weight exponent");
    mdump->add_option("--max-degree", md_degree, "dump all |alpha| <= max-degree");
    mdump->add_option("--precision-bits", md_bits, "assembly precision");
    mdump->add_option("--output,-o", md_output, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bound) {
            if (!estimator.empty()) cfg.estimator = estimator;
            if (std::isfinite(f_min_flag)) cfg.f_min = f_min_flag;
            std::string message;
            const int code = run_and_emit(cfg, &message);
            if (code != 0) std::cerr << "error: " << message << "\n";
            return code;
        }

        if (*ratio) {
            cfg.function = cfg_b.function = ratio_function;
            cfg.r_max = cfg_b.r_max = ratio_rmax;
            cfg.precision_bits = cfg_b.precision_bits = ratio_bits;
            RatioReport rep = ratio_report(cfg, cfg_b);
            return emit_text(ratio_output, rep.to_csv());
        }

        if (*rate) {
            RateRow row = rate_report(cfg, win_lo, win_hi, ceiling);
            std::ostringstream os;
            os << "experiment,slope,stderr,converged_exactly,violates_ceiling\n";
            os << '"' << row.experiment << "\"," << format_double(row.slope) << ','
               << format_double(row.stderr_) << ',' << (row.converged_exactly ? 1 : 0) << ','
               << (row.violates_ceiling ? 1 : 0) << '\n';
            return emit_text(cfg.output, os.str());
        }

        if (*needle) {
            NeedleSpec nu(needle_r, needle_h, NeedleVariant::Needle);
            NeedleSpec kappa(needle_r, needle_h * needle_h, NeedleVariant::HalfNeedle);
            std::ostringstream os;
            os << "t,nu,kappa,lambda,bound_envelope\n";
            for (int i = 0; i < needle_points; ++i) {
                const double t = -1.0 + 2.0 * i / (needle_points - 1);
                const double envelope =
                    std::abs(t) >= needle_h
                        ? std::min(1.0, 4.0 * std::exp(-0.5 * needle_r * needle_h))
                        : 1.0;
                os << format_double(t) << ',' << format_double(needle_eval(nu, t)) << ','
                   << format_double(needle_eval(kappa, std::abs(t))) << ','
                   << format_double(lambda_lower(4 * needle_r, std::abs(t))) << ','
                   << format_double(envelope) << '\n';
            }
            return emit_text(needle_output, os.str());
        }

        if (*mdump) {
            DomainSpec d = md_domain.front() == '{'
                               ? DomainSpec::from_json(nlohmann::json::parse(md_domain))
                               : domain_by_name(md_domain);
            MeasureSpec m = MeasureSpec::lebesgue();
            if (md_measure == "chebyshev") m = MeasureSpec::chebyshev();
            else if (md_measure == "box-jacobi") m = MeasureSpec::box_jacobi(md_lambda);
            else if (md_measure == "ball-jacobi") m = MeasureSpec::ball_jacobi(md_lambda);
            else if (md_measure != "lebesgue") throw ConfigError("unknown measure");
            MomentOracle oracle(d, m, md_bits);
            std::ostringstream os;
            for (int i = 0; i < d.n_vars(); ++i) os << "alpha_" << (i + 1) << ',';
            os << "value\n";
            for (const auto& alpha : monomial_basis(d.n_vars(), md_degree)) {
                for (int a : alpha) os << a << ',';
                os << format_double(oracle.moment(alpha)) << '\n';
            }
            return emit_text(md_output, os.str());
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
