#include "tvgl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvgl/devlab.hpp"
#include "tvgl/errors.hpp"
#include "tvgl/glasso.hpp"
#include "tvgl/io.hpp"
#include "tvgl/kernel.hpp"
#include "tvgl/parallel.hpp"
#include "tvgl/risk.hpp"
#include "tvgl/rng.hpp"
#include "tvgl/simgen.hpp"

namespace tvgl::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

double bandwidth_rule(int n) {
    return 5.848 * std::pow(static_cast<double>(n), -1.0 / 3.0);
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(parse_double(item));
    }
    if (out.empty()) throw ConfigError("empty numeric list: '" + csv + "'");
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    for (double v : parse_double_list(csv)) {
        const int i = static_cast<int>(std::lround(v));
        if (std::abs(v - i) > 1e-9)
            throw ConfigError("expected integer list, got '" + csv + "'");
        out.push_back(i);
    }
    return out;
}

// Binds CLI options and knows how to overlay values from a JSON config
// file. Explicit command-line flags always win over the file; unknown
// config keys are rejected.
class OptionRegistry {
public:
    explicit OptionRegistry(CLI::App& app) : app_(app) {
        config_opt_ = app.add_option(
            "--config", config_path_,
            "JSON config file; explicit flags override its values");
    }

    template <typename T>
    CLI::Option* add(const std::string& flag, T& var, const std::string& desc) {
        CLI::Option* opt = app_.add_option(flag, var, desc);
        register_entry<T>(flag, opt, var);
        return opt;
    }

    CLI::Option* add_flag(const std::string& flag, bool& var,
                          const std::string& desc) {
        CLI::Option* opt = app_.add_flag(flag, var, desc);
        entries_[key_of(flag)] =
            Entry{opt, [&var](const json& v) { var = v.get<bool>(); }};
        return opt;
    }

    /// Applies the config file (when given) to all options the user did not
    /// set explicitly. Call once after CLI11 parsing.
    void apply_config() {
        if (config_opt_->count() == 0) return;
        json j;
        try {
            j = json::parse(read_text_file(config_path_));
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config file is not valid JSON: ") +
                              e.what());
        }
        if (!j.is_object())
            throw ConfigError("config file must hold a JSON object");
        for (const auto& [key, value] : j.items()) {
            const auto it = entries_.find(key);
            if (it == entries_.end())
                throw ConfigError("unknown config key: " + key);
            if (it->second.opt->count() == 0) {
                try {
                    it->second.apply(value);
                } catch (const json::exception& e) {
                    throw ConfigError("config key '" + key +
                                      "' has the wrong type: " + e.what());
                }
            }
        }
    }

private:
    struct Entry {
        CLI::Option* opt = nullptr;
        std::function<void(const json&)> apply;
    };

    static std::string key_of(const std::string& flag) {
        const auto pos = flag.find_first_not_of('-');
        return flag.substr(pos == std::string::npos ? flag.size() : pos);
    }

    template <typename T>
    void register_entry(const std::string& flag, CLI::Option* opt, T& var) {
        entries_[key_of(flag)] =
            Entry{opt, [&var](const json& v) { var = v.get<T>(); }};
    }

    CLI::App& app_;
    std::string config_path_;
    CLI::Option* config_opt_ = nullptr;
    std::map<std::string, Entry> entries_;
};

fs::path prepare_out_dir(const std::string& out) {
    if (out.empty()) throw ConfigError("--out is required");
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out);
    return dir;
}

json kernel_meta(const KernelSpec& spec) {
    return json{{"family", to_string(spec.family)},
                {"bandwidth", spec.bandwidth}};
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    EvolutionConfig config;
    std::string out;
};

void register_simulate(CLI::App& app, SimulateArgs& args,
                       std::shared_ptr<OptionRegistry>& reg) {
    reg = std::make_shared<OptionRegistry>(app);
    reg->add("--p", args.config.p, "dimension of the Gaussian vector");
    reg->add("--steps", args.config.steps, "number of discrete time steps");
    reg->add("--base-diag", args.config.base_diag,
             "diagonal level of the precision matrix");
    reg->add("--initial-edges", args.config.initial_edges,
             "edges present at step 0");
    reg->add("--churn-period", args.config.churn_period,
             "steps between churn events (also the ramp length)");
    reg->add("--churn-count", args.config.churn_count,
             "edges added and removed per churn event");
    reg->add("--weight-min", args.config.weight_min, "edge weight lower bound");
    reg->add("--weight-max", args.config.weight_max, "edge weight upper bound");
    reg->add("--max-churn-events", args.config.max_churn_events,
             "cap on churn events (< 0 = unlimited)");
    reg->add("--seed", args.config.seed, "random seed");
    reg->add("--out", args.out, "output directory");
}

int run_simulate(const SimulateArgs& args) {
    const fs::path dir = prepare_out_dir(args.out);
    const GraphTrajectory trajectory = generate_trajectory(args.config);
    const TimeSeriesData data = sample_data(trajectory, args.config.seed);
    write_trajectory_jsonl(dir / "trajectory.jsonl", trajectory);
    write_data_csv(dir / "data.csv", data);
    std::cout << "wrote " << (dir / "trajectory.jsonl").string() << " and "
              << (dir / "data.csv").string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
    std::string data_path;
    double t0 = 1.0;
    std::string kernel = "truncated_gaussian";
    double bandwidth = 0.0;  // 0 = 5.848 n^{-1/3}
    double lambda = 0.1;
    bool penalize_diagonal = false;
    double zero_tol = -1.0;  // < 0 = 1e-6 scaled by max |theta|
    double tol = 1e-6;
    int max_iter = 500;
    double jitter = 0.0;
    std::string out;
};

void register_estimate(CLI::App& app, EstimateArgs& args,
                       std::shared_ptr<OptionRegistry>& reg) {
    reg = std::make_shared<OptionRegistry>(app);
    reg->add("--data", args.data_path, "input data CSV")->required();
    reg->add("--t0", args.t0, "estimation time in [0, 1]");
    reg->add("--kernel", args.kernel,
             "kernel family: boxcar|epanechnikov|gaussian");
    reg->add("--bandwidth", args.bandwidth,
             "kernel bandwidth h (0 = 5.848/n^{1/3})");
    reg->add("--lambda", args.lambda, "l1 penalty level");
    reg->add_flag("--penalize-diagonal", args.penalize_diagonal,
                  "penalize diagonal precision entries too");
    reg->add("--zero-tol", args.zero_tol,
             "edge threshold (< 0 = 1e-6 scaled by max |theta|)");
    reg->add("--tol", args.tol, "KKT convergence tolerance");
    reg->add("--max-iter", args.max_iter, "maximum solver sweeps");
    reg->add("--jitter", args.jitter,
             "diagnostic ridge added to the smoothed covariance diagonal");
    reg->add("--out", args.out, "output directory");
}

int run_estimate(const EstimateArgs& args) {
    if (!(args.t0 >= 0.0 && args.t0 <= 1.0))
        throw ConfigError("--t0 must lie in [0, 1]");
    const fs::path dir = prepare_out_dir(args.out);
    const TimeSeriesData data = read_data_csv(args.data_path);
    KernelSpec spec{kernel_family_from_string(args.kernel),
                    args.bandwidth > 0.0 ? args.bandwidth
                                         : bandwidth_rule(data.n())};
    const CovarianceMatrix s = smoothed_covariance(data, args.t0, spec);

    GlassoOptions options;
    options.tol = args.tol;
    options.max_iter = args.max_iter;
    options.diag_jitter = args.jitter;
    const GlassoFit result =
        fit(s, PenaltySpec{args.lambda, args.penalize_diagonal}, options);

    const double zero_tol = args.zero_tol >= 0.0
                                ? args.zero_tol
                                : default_zero_tol(result.theta);
    const EdgeSet edges = edges_of(result.theta, zero_tol);

    json meta{{"lambda", args.lambda},
              {"h", spec.bandwidth},
              {"kernel", to_string(spec.family)},
              {"t0", args.t0},
              {"n", data.n()},
              {"penalize_diagonal", args.penalize_diagonal},
              {"zero_tol", zero_tol},
              {"kkt_residual", result.kkt_residual},
              {"iterations", result.iterations},
              {"objective", result.objective},
              {"converged", result.converged}};
    write_text_file(dir / "precision.json",
                    precision_matrix_json(result.theta.matrix(), meta.dump()));

    std::ostringstream edge_csv;
    edge_csv << "i,j,theta\n";
    for (const Edge& e : edges.edges())
        edge_csv << e.i << ',' << e.j << ','
                 << format_double(result.theta(e.i, e.j)) << '\n';
    write_text_file(dir / "edges.csv", edge_csv.str());

    if (!result.converged) {
        std::cerr << "estimate: solver hit max-iter with KKT residual "
                  << result.kkt_residual << " (outputs written)\n";
        return kExitNumeric;
    }
    std::cout << "wrote " << (dir / "precision.json").string() << " ("
              << edges.size() << " edges)\n";
    return kExitOk;
}

// -------------------------------------------------------------------- path

struct PathArgs {
    std::string data_path;
    std::string truth_path;
    double t0 = 1.0;
    std::string kernel = "truncated_gaussian";
    double bandwidth = 0.0;
    std::string lambdas;  // comma list; empty = log grid
    int grid_size = 20;
    double min_ratio = 0.01;
    bool penalize_diagonal = false;
    double zero_tol = -1.0;
    double tol = 1e-6;
    int max_iter = 500;
    std::string out;
};

void register_path(CLI::App& app, PathArgs& args,
                   std::shared_ptr<OptionRegistry>& reg) {
    reg = std::make_shared<OptionRegistry>(app);
    reg->add("--data", args.data_path, "input data CSV")->required();
    reg->add("--truth", args.truth_path,
             "true trajectory JSONL; enables oracle and recall columns");
    reg->add("--t0", args.t0, "estimation time in [0, 1]");
    reg->add("--kernel", args.kernel,
             "kernel family: boxcar|epanechnikov|gaussian");
    reg->add("--bandwidth", args.bandwidth,
             "kernel bandwidth h (0 = 5.848/n^{1/3})");
    reg->add("--lambdas", args.lambdas,
             "comma-separated penalty grid (any order)");
    reg->add("--grid-size", args.grid_size,
             "size of the default log-spaced grid");
    reg->add("--min-ratio", args.min_ratio,
             "smallest grid lambda as a fraction of lambda_max");
    reg->add_flag("--penalize-diagonal", args.penalize_diagonal,
                  "penalize diagonal precision entries too");
    reg->add("--zero-tol", args.zero_tol, "edge threshold (< 0 = auto)");
    reg->add("--tol", args.tol, "KKT convergence tolerance");
    reg->add("--max-iter", args.max_iter, "maximum solver sweeps");
    reg->add("--out", args.out, "output directory");
}

std::vector<double> make_lambda_grid(const PathArgs& args,
                                     const CovarianceMatrix& s) {
    std::vector<double> grid;
    if (!args.lambdas.empty()) {
        grid = parse_double_list(args.lambdas);
        std::sort(grid.begin(), grid.end(), std::greater<double>());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        for (double v : grid)
            if (!(v > 0.0)) throw ConfigError("lambdas must be positive");
    } else {
        if (args.grid_size < 1) throw ConfigError("grid size must be >= 1");
        if (!(args.min_ratio > 0.0 && args.min_ratio < 1.0))
            throw ConfigError("min-ratio must lie in (0, 1)");
        const double hi = std::max(lambda_max(s), 1e-8);
        const double lo = hi * args.min_ratio;
        for (int k = 0; k < args.grid_size; ++k) {
            const double f = args.grid_size == 1
                                 ? 0.0
                                 : static_cast<double>(k) /
                                       static_cast<double>(args.grid_size - 1);
            grid.push_back(hi * std::pow(lo / hi, f));
        }
    }
    return grid;  // strictly decreasing
}

int run_path(const PathArgs& args) {
    if (!(args.t0 >= 0.0 && args.t0 <= 1.0))
        throw ConfigError("--t0 must lie in [0, 1]");
    const fs::path dir = prepare_out_dir(args.out);
    const TimeSeriesData data = read_data_csv(args.data_path);
    KernelSpec spec{kernel_family_from_string(args.kernel),
                    args.bandwidth > 0.0 ? args.bandwidth
                                         : bandwidth_rule(data.n())};
    const CovarianceMatrix s = smoothed_covariance(data, args.t0, spec);
    const std::vector<double> grid = make_lambda_grid(args, s);

    GlassoOptions options;
    options.tol = args.tol;
    options.max_iter = args.max_iter;
    const std::vector<GlassoFit> fits =
        regularization_path(s, grid, args.penalize_diagonal, options);

    // Optional truth: true covariance at t0 plus the true edge set.
    std::optional<CovarianceMatrix> sigma0;
    std::optional<EdgeSet> f_true;
    std::vector<GlassoFit> oracle_fits;
    if (!args.truth_path.empty()) {
        const TruthTrajectory truth = read_trajectory_jsonl(args.truth_path);
        if (truth.p() != data.p())
            throw ConfigError("truth trajectory dimension does not match data");
        const int step = truth.nearest_step(args.t0);
        sigma0 = CovarianceMatrix(spd_inverse(truth.theta_at(step)));
        f_true = truth.edge_set_at(step);
        oracle_fits =
            regularization_path(*sigma0, grid, args.penalize_diagonal, options);
    }

    auto l1_of = [](const GlassoFit& f) {
        return penalized_l1(f.theta.matrix(), f.penalty);
    };
    auto matched_oracle = [&](double l1) -> std::optional<std::size_t> {
        if (oracle_fits.empty()) return std::nullopt;
        std::size_t best = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < oracle_fits.size(); ++k) {
            const double gap = std::abs(l1_of(oracle_fits[k]) - l1);
            if (gap < best_gap) {
                best_gap = gap;
                best = k;
            }
        }
        const double scale =
            std::max({l1, l1_of(oracle_fits[best]), 1e-12});
        if (best_gap / scale <= 0.05) return best;
        return std::nullopt;
    };

    std::ostringstream csv;
    csv << risk_report_csv_header();
    const bool with_truth = sigma0.has_value();
    if (with_truth)
        csv << ",oracle_l1_norm,oracle_predictive_risk,oracle_matched";
    csv << '\n';

    std::size_t matched_pairs = 0;
    std::size_t oracle_wins = 0;
    // Rows are reported with lambda increasing.
    for (std::size_t idx = fits.size(); idx-- > 0;) {
        const GlassoFit& f = fits[idx];
        RiskReport report;
        report.lambda = f.penalty.lambda;
        report.l1_norm = l1_of(f);
        const double zero_tol = args.zero_tol >= 0.0
                                    ? args.zero_tol
                                    : default_zero_tol(f.theta);
        const EdgeSet edges = edges_of(f.theta, zero_tol);
        report.edge_count = edges.size();
        report.empirical_risk = empirical_risk(f.sigma, s);
        std::optional<std::size_t> mate;
        if (with_truth) {
            report.predictive_risk = predictive_risk(f.sigma, *sigma0);
            const PrecisionRecall pr = precision_recall(*f_true, edges);
            report.precision = pr.precision;
            report.recall = pr.recall;
            mate = matched_oracle(report.l1_norm);
        }
        csv << risk_report_csv_row(report);
        if (with_truth) {
            csv << ',';
            if (mate) {
                const GlassoFit& o = oracle_fits[*mate];
                const double orc_risk = predictive_risk(o.sigma, *sigma0);
                csv << format_double(l1_of(o)) << ','
                    << format_double(orc_risk) << ",1";
                ++matched_pairs;
                if (orc_risk <= *report.predictive_risk) ++oracle_wins;
            } else {
                csv << ",,0";
            }
        }
        csv << '\n';
    }
    write_text_file(dir / "path.csv", csv.str());

    json summary{{"n", data.n()},
                 {"p", data.p()},
                 {"t0", args.t0},
                 {"kernel", kernel_meta(spec)},
                 {"lambda_max", lambda_max(s)},
                 {"grid", grid}};
    if (with_truth) {
        summary["matched_pairs"] = matched_pairs;
        summary["oracle_wins"] = oracle_wins;
        summary["oracle_win_fraction"] =
            matched_pairs > 0
                ? static_cast<double>(oracle_wins) /
                      static_cast<double>(matched_pairs)
                : 0.0;
    }
    write_text_file(dir / "summary.json", summary.dump(2) + "\n");
    std::cout << "wrote " << (dir / "path.csv").string() << " (" << fits.size()
              << " rows)\n";
    return kExitOk;
}

// ------------------------------------------------------------------- track

struct TrackArgs {
    std::string data_path;
    std::string truth_path;
    double lambda = 0.2;
    std::string kernel = "truncated_gaussian";
    double bandwidth = 0.0;
    int stride = 1;
    bool oracle = false;
    double zero_tol = -1.0;
    double tol = 1e-6;
    int max_iter = 500;
    std::string out;
};

void register_track(CLI::App& app, TrackArgs& args,
                    std::shared_ptr<OptionRegistry>& reg) {
    reg = std::make_shared<OptionRegistry>(app);
    reg->add("--data", args.data_path, "input data CSV")->required();
    reg->add("--truth", args.truth_path, "true trajectory JSONL")->required();
    reg->add("--lambda", args.lambda, "l1 penalty level");
    reg->add("--kernel", args.kernel,
             "kernel family: boxcar|epanechnikov|gaussian");
    reg->add("--bandwidth", args.bandwidth,
             "kernel bandwidth h (0 = 5.848/n^{1/3})");
    reg->add("--stride", args.stride, "evaluate every stride-th step");
    reg->add_flag("--oracle", args.oracle,
                  "track the true edge sets instead of estimates");
    reg->add("--zero-tol", args.zero_tol, "edge threshold (< 0 = auto)");
    reg->add("--tol", args.tol, "KKT convergence tolerance");
    reg->add("--max-iter", args.max_iter, "maximum solver sweeps");
    reg->add("--out", args.out, "output directory");
}

int run_track(const TrackArgs& args) {
    if (args.stride < 1) throw ConfigError("--stride must be >= 1");
    const fs::path dir = prepare_out_dir(args.out);
    const TruthTrajectory truth = read_trajectory_jsonl(args.truth_path);
    const TimeSeriesData data = read_data_csv(args.data_path);
    if (!args.oracle && truth.steps() != data.n())
        throw ConfigError("truth trajectory is not aligned with the data");
    const int steps = truth.steps();

    KernelSpec spec{kernel_family_from_string(args.kernel),
                    args.bandwidth > 0.0 ? args.bandwidth
                                         : bandwidth_rule(data.n())};
    GlassoOptions options;
    options.tol = args.tol;
    options.max_iter = args.max_iter;

    std::vector<int> eval_steps;
    for (int k = 0; k < steps; k += args.stride) eval_steps.push_back(k);

    std::vector<EdgeSet> estimates;
    estimates.reserve(eval_steps.size());
    for (int k : eval_steps) {
        if (args.oracle) {
            estimates.push_back(truth.edge_set_at(k));
            continue;
        }
        const CovarianceMatrix s =
            smoothed_covariance(data, truth.time(k), spec);
        const GlassoFit f =
            fit(s, PenaltySpec{args.lambda, false}, options);
        const double zero_tol = args.zero_tol >= 0.0
                                    ? args.zero_tol
                                    : default_zero_tol(f.theta);
        estimates.push_back(edges_of(f.theta, zero_tol));
    }

    auto first_where = [&](int from_step, const Edge& e, bool present)
        -> std::optional<int> {
        for (std::size_t idx = 0; idx < eval_steps.size(); ++idx) {
            if (eval_steps[idx] < from_step) continue;
            if (estimates[idx].contains(e.i, e.j) == present)
                return eval_steps[idx];
        }
        return std::nullopt;
    };

    std::ostringstream csv;
    csv << "i,j,kind,birth_step,decay_start_step,death_step,detected_step,"
           "detected_t\n";
    auto emit_row = [&](const Edge& e, const char* kind, int birth,
                        std::optional<int> decay_start,
                        std::optional<int> death,
                        std::optional<int> detected) {
        csv << e.i << ',' << e.j << ',' << kind << ',' << birth << ',';
        if (decay_start) csv << *decay_start;
        csv << ',';
        if (death) csv << *death;
        csv << ',';
        if (detected) csv << *detected;
        csv << ',';
        if (detected) csv << format_double(truth.time(*detected));
        csv << '\n';
    };

    for (const EdgeEvent& ev : truth.events()) {
        if (ev.ramped_in)
            emit_row(ev.edge, "added", ev.birth_step, ev.decay_start_step,
                     ev.death_step,
                     first_where(ev.birth_step, ev.edge, true));
        if (ev.death_step)
            emit_row(ev.edge, "removed", ev.birth_step, ev.decay_start_step,
                     ev.death_step,
                     first_where(*ev.decay_start_step, ev.edge, false));
    }
    write_text_file(dir / "latency.csv", csv.str());
    std::cout << "wrote " << (dir / "latency.csv").string() << " ("
              << eval_steps.size() << " evaluations)\n";
    return kExitOk;
}

// ------------------------------------------------------------------ devlab

struct MgfArgs {
    double t = 0.0;
    double sigma_i = 1.0;
    double sigma_j = 1.0;
    double rho = 0.0;
    long long mc_draws = 0;  // 0 = closed form only
    std::uint64_t seed = 0;
    std::string out;
};

void register_mgf(CLI::App& app, MgfArgs& args,
                  std::shared_ptr<OptionRegistry>& reg) {
    reg = std::make_shared<OptionRegistry>(app);
    reg->add("--t", args.t, "MGF argument");
    reg->add("--sigma-i", args.sigma_i, "std deviation of Z_i");
    reg->add("--sigma-j", args.sigma_j, "std deviation of Z_j");
    reg->add("--rho", args.rho, "correlation of (Z_i, Z_j)");
    reg->add("--mc-draws", args.mc_draws,
             "Monte-Carlo draws for cross-checking (0 = skip)");
    reg->add("--seed", args.seed, "random seed");
    reg->add("--out", args.out, "output directory");
}

int run_mgf(const MgfArgs& args) {
    const fs::path dir = prepare_out_dir(args.out);
    const double closed =
        mgf_product_normals(args.t, args.sigma_i, args.sigma_j, args.rho);

    std::optional<double> mc_mean, mc_se;
    if (args.mc_draws > 0) {
        Rng rng = Rng::substream(args.seed, stream_tag("mgf"));
        const double b = args.rho * args.sigma_j;
        const double c =
            args.sigma_j * std::sqrt(1.0 - args.rho * args.rho);
        double sum = 0.0, sumsq = 0.0;
        for (long long k = 0; k < args.mc_draws; ++k) {
            const double g1 = rng.normal();
            const double g2 = rng.normal();
            const double zi = args.sigma_i * g1;
            const double zj = b * g1 + c * g2;
            const double v = std::exp(args.t * zi * zj);
            sum += v;
            sumsq += v * v;
        }
        const double n = static_cast<double>(args.mc_draws);
        mc_mean = sum / n;
        const double var = std::max(0.0, sumsq / n - *mc_mean * *mc_mean);
        mc_se = std::sqrt(var / n);
    }

    std::ostringstream csv;
    csv << "t,sigma_i,sigma_j,rho,closed_form,mc_mean,mc_se,mc_draws\n"
        << format_double(args.t) << ',' << format_double(args.sigma_i) << ','
        << format_double(args.sigma_j) << ',' << format_double(args.rho)
        << ',' << format_double(closed) << ',';
    if (mc_mean) csv << format_double(*mc_mean);
    csv << ',';
    if (mc_se) csv << format_double(*mc_se);
    csv << ',' << args.mc_draws << '\n';
    write_text_file(dir / "mgf.csv", csv.str());

    json summary{{"config",
                  {{"t", args.t},
                   {"sigma_i", args.sigma_i},
                   {"sigma_j", args.sigma_j},
                   {"rho", args.rho},
                   {"mc_draws", args.mc_draws},
                   {"seed", args.seed}}},
                 {"closed_form", closed}};
    if (mc_mean) {
        summary["mc_mean"] = *mc_mean;
        summary["mc_se"] = *mc_se;
    }
    write_text_file(dir / "mgf.json", summary.dump(2) + "\n");
    std::cout << "mgf = " << format_double(closed) << "\n";
    return kExitOk;
}

struct BiasArgs {
    double c0 = 1.0;
    double c1 = 0.5;
    double c2 = 0.25;
    double t0 = 1.0;
    std::string kernel = "boxcar";
    std::string h_values = "0.4,0.2,0.1,0.05";
    int n = 2000;
    std::string out;
};

void register_bias(CLI::App& app, BiasArgs& args,
                   std::shared_ptr<OptionRegistry>& reg) {
    reg = std::make_shared<OptionRegistry>(app);
    reg->add("--c0", args.c0, "curve constant term");
    reg->add("--c1", args.c1, "curve slope at t0");
    reg->add("--c2", args.c2, "curve quadratic coefficient");
    reg->add("--t0", args.t0, "smoothing target time");
    reg->add("--kernel", args.kernel, "kernel family");
    reg->add("--h-values", args.h_values, "comma-separated bandwidths");
    reg->add("--n", args.n, "grid size");
    reg->add("--out", args.out, "output directory");
}

int run_bias(const BiasArgs& args) {
    const fs::path dir = prepare_out_dir(args.out);
    const MatrixCurve curve =
        polynomial_entry_curve(args.c0, args.c1, args.c2, args.t0);
    const std::vector<double> hs = parse_double_list(args.h_values);
    const std::vector<BiasPoint> points =
        bias_curve(curve, 0, 0, args.t0,
                   kernel_family_from_string(args.kernel), hs, args.n);

    std::ostringstream csv;
    csv << "h,abs_bias\n";
    for (const BiasPoint& pt : points)
        csv << format_double(pt.h) << ',' << format_double(pt.abs_bias)
            << '\n';
    write_text_file(dir / "bias.csv", csv.str());

    json ratios = json::array();
    for (std::size_t k = 1; k < points.size(); ++k)
        ratios.push_back(points[k - 1].abs_bias > 0.0
                             ? points[k].abs_bias / points[k - 1].abs_bias
                             : 0.0);
    json summary{{"config",
                  {{"c0", args.c0},
                   {"c1", args.c1},
                   {"c2", args.c2},
                   {"t0", args.t0},
                   {"kernel", args.kernel},
                   {"n", args.n}}},
                 {"ratios", ratios}};
    write_text_file(dir / "bias.json", summary.dump(2) + "\n");
    std::cout << "wrote " << (dir / "bias.csv").string() << "\n";
    return kExitOk;
}

struct TailArgs {
    std::string n_values = "250,500,1000,2000";
    double h_const = 2.0;
    double epsilon = 0.25;
    int replicates = 10000;
    std::string kernel = "boxcar";
    double variance = 1.0;
    int entry_i = 0;
    int entry_j = 0;
    double bound_c = 0.1;
    std::uint64_t seed = 0;
    std::string out;
};

void register_tail(CLI::App& app, TailArgs& args,
                   std::shared_ptr<OptionRegistry>& reg) {
    reg = std::make_shared<OptionRegistry>(app);
    reg->add("--n-values", args.n_values, "comma-separated sample sizes");
    reg->add("--h-const", args.h_const, "bandwidth constant: h = c n^{-1/3}");
    reg->add("--epsilon", args.epsilon, "deviation threshold");
    reg->add("--replicates", args.replicates, "Monte-Carlo replicates per n");
    reg->add("--kernel", args.kernel, "kernel family");
    reg->add("--variance", args.variance, "constant covariance level");
    reg->add("--entry-i", args.entry_i, "covariance entry row");
    reg->add("--entry-j", args.entry_j, "covariance entry column");
    reg->add("--bound-c", args.bound_c,
             "reporting constant in exp(-c n h eps^2)");
    reg->add("--seed", args.seed, "random seed");
    reg->add("--out", args.out, "output directory");
}

int run_tail(const TailArgs& args) {
    const fs::path dir = prepare_out_dir(args.out);
    const std::vector<int> ns = parse_int_list(args.n_values);
    const int p = std::max(args.entry_i, args.entry_j) + 1;
    SymmetricMatrix sigma(p);
    for (int i = 0; i < p; ++i) sigma.set(i, i, args.variance);

    TailExperimentConfig base;
    base.epsilon = args.epsilon;
    base.replicates = args.replicates;
    base.curve = constant_curve(sigma);
    base.entry_i = args.entry_i;
    base.entry_j = args.entry_j;
    base.family = kernel_family_from_string(args.kernel);
    base.seed = args.seed;
    base.bound_c = args.bound_c;

    std::ostringstream csv;
    csv << "n,h,nh_eps2,empirical_tail,bound_value\n";
    json summary{{"config",
                  {{"n_values", ns},
                   {"h_const", args.h_const},
                   {"epsilon", args.epsilon},
                   {"replicates", args.replicates},
                   {"kernel", args.kernel},
                   {"variance", args.variance},
                   {"entry", {args.entry_i, args.entry_j}},
                   {"bound_c", args.bound_c},
                   {"seed", args.seed}}}};

    if (ns.size() == 1) {
        TailExperimentConfig cfg = base;
        cfg.n = ns[0];
        cfg.h = args.h_const *
                std::pow(static_cast<double>(ns[0]), -1.0 / 3.0);
        const TailResult r = tail_probability(cfg);
        csv << ns[0] << ',' << format_double(cfg.h) << ','
            << format_double(ns[0] * cfg.h * cfg.epsilon * cfg.epsilon) << ','
            << format_double(r.empirical_tail) << ','
            << format_double(r.bound_value) << '\n';
        summary["empirical_tail"] = r.empirical_tail;
    } else {
        const TailGridResult grid = tail_grid(ns, args.h_const, base);
        for (const TailGridPoint& pt : grid.points)
            csv << pt.n << ',' << format_double(pt.h) << ','
                << format_double(pt.nh_eps2) << ','
                << format_double(pt.empirical_tail) << ','
                << format_double(pt.bound_value) << '\n';
        summary["slope"] = grid.slope;
        summary["fitted_rate"] = grid.fitted_rate;
        summary["decreasing_adjacent"] = grid.decreasing_adjacent;
        summary["total_adjacent"] = grid.total_adjacent;
    }
    write_text_file(dir / "tail.csv", csv.str());
    write_text_file(dir / "tail.json", summary.dump(2) + "\n");
    std::cout << "wrote " << (dir / "tail.csv").string() << "\n";
    return kExitOk;
}

struct RateArgs {
    std::string n_values = "200,400,800,1600";
    double lambda_const = 0.5;
    double h_const = 5.848;
    int replicates = 10;
    int p = 20;
    int initial_edges = 20;
    int churn_count = 2;
    double period_frac = 0.2;
    double base_diag = 0.25;
    double weight_min = 0.1;
    double weight_max = 0.3;
    std::string kernel = "truncated_gaussian";
    double tol = 1e-6;
    int max_iter = 500;
    std::uint64_t seed = 0;
    std::string out;
};

void register_rate(CLI::App& app, RateArgs& args,
                   std::shared_ptr<OptionRegistry>& reg) {
    reg = std::make_shared<OptionRegistry>(app);
    reg->add("--n-values", args.n_values, "comma-separated sample sizes");
    reg->add("--lambda-const", args.lambda_const,
             "lambda_n = c sqrt(log n / n^{2/3})");
    reg->add("--h-const", args.h_const, "bandwidth constant: h = c n^{-1/3}");
    reg->add("--replicates", args.replicates, "replicates per n");
    reg->add("--p", args.p, "trajectory dimension");
    reg->add("--initial-edges", args.initial_edges, "edges at step 0");
    reg->add("--churn-count", args.churn_count, "edges churned per event");
    reg->add("--period-frac", args.period_frac,
             "churn period as a fraction of n");
    reg->add("--base-diag", args.base_diag, "precision diagonal level");
    reg->add("--weight-min", args.weight_min, "edge weight lower bound");
    reg->add("--weight-max", args.weight_max, "edge weight upper bound");
    reg->add("--kernel", args.kernel, "kernel family");
    reg->add("--tol", args.tol, "KKT convergence tolerance");
    reg->add("--max-iter", args.max_iter, "maximum solver sweeps");
    reg->add("--seed", args.seed, "random seed");
    reg->add("--out", args.out, "output directory");
}

int run_rate(const RateArgs& args) {
    const fs::path dir = prepare_out_dir(args.out);
    RateExperimentConfig config;
    config.n_values = parse_int_list(args.n_values);
    config.lambda_const = args.lambda_const;
    config.h_const = args.h_const;
    config.replicates = args.replicates;
    config.shape = RateTrajectoryShape{args.p,          args.base_diag,
                                       args.initial_edges, args.churn_count,
                                       args.period_frac,   args.weight_min,
                                       args.weight_max};
    config.family = kernel_family_from_string(args.kernel);
    config.seed = args.seed;
    config.tol = args.tol;
    config.max_iter = args.max_iter;

    const RateResult result = frobenius_rate(config);

    std::ostringstream csv;
    csv << "n,h,lambda,mean_frob_error,std_error\n";
    for (const RatePoint& pt : result.points)
        csv << pt.n << ',' << format_double(pt.h) << ','
            << format_double(pt.lambda) << ','
            << format_double(pt.mean_error) << ','
            << format_double(pt.std_error) << '\n';
    write_text_file(dir / "rate.csv", csv.str());

    json summary{{"config",
                  {{"n_values", config.n_values},
                   {"lambda_const", args.lambda_const},
                   {"h_const", args.h_const},
                   {"replicates", args.replicates},
                   {"p", args.p},
                   {"initial_edges", args.initial_edges},
                   {"churn_count", args.churn_count},
                   {"period_frac", args.period_frac},
                   {"base_diag", args.base_diag},
                   {"kernel", args.kernel},
                   {"seed", args.seed}}},
                 {"loglog_slope", result.loglog_slope}};
    write_text_file(dir / "rate.json", summary.dump(2) + "\n");
    std::cout << "wrote " << (dir / "rate.csv").string()
              << " (slope = " << format_double(result.loglog_slope) << ")\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"time-varying sparse Gaussian graphical model toolkit"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads,
                   "cap worker threads (0 = hardware concurrency)");

    // fallthrough lets --threads appear after the subcommand name.
    SimulateArgs simulate_args;
    std::shared_ptr<OptionRegistry> simulate_reg;
    CLI::App* simulate_cmd = app.add_subcommand(
        "simulate", "generate an evolving-graph trajectory and sample data");
    simulate_cmd->fallthrough();
    register_simulate(*simulate_cmd, simulate_args, simulate_reg);

    EstimateArgs estimate_args;
    std::shared_ptr<OptionRegistry> estimate_reg;
    CLI::App* estimate_cmd = app.add_subcommand(
        "estimate", "estimate the precision matrix at one time point");
    estimate_cmd->fallthrough();
    register_estimate(*estimate_cmd, estimate_args, estimate_reg);

    PathArgs path_args;
    std::shared_ptr<OptionRegistry> path_reg;
    CLI::App* path_cmd = app.add_subcommand(
        "path", "regularization path with risk and graph metrics");
    path_cmd->fallthrough();
    register_path(*path_cmd, path_args, path_reg);

    TrackArgs track_args;
    std::shared_ptr<OptionRegistry> track_reg;
    CLI::App* track_cmd = app.add_subcommand(
        "track", "edge appearance/disappearance latency along a trajectory");
    track_cmd->fallthrough();
    register_track(*track_cmd, track_args, track_reg);

    CLI::App* devlab_cmd =
        app.add_subcommand("devlab", "numerical verification experiments");
    devlab_cmd->require_subcommand(1);
    devlab_cmd->fallthrough();

    MgfArgs mgf_args;
    std::shared_ptr<OptionRegistry> mgf_reg;
    CLI::App* mgf_cmd = devlab_cmd->add_subcommand(
        "mgf", "closed-form product-normal MGF with optional MC cross-check");
    mgf_cmd->fallthrough();
    register_mgf(*mgf_cmd, mgf_args, mgf_reg);

    BiasArgs bias_args;
    std::shared_ptr<OptionRegistry> bias_reg;
    CLI::App* bias_cmd = devlab_cmd->add_subcommand(
        "bias", "deterministic smoother bias across bandwidths");
    bias_cmd->fallthrough();
    register_bias(*bias_cmd, bias_args, bias_reg);

    TailArgs tail_args;
    std::shared_ptr<OptionRegistry> tail_reg;
    CLI::App* tail_cmd = devlab_cmd->add_subcommand(
        "tail", "Monte-Carlo tail probabilities of the smoothed covariance");
    tail_cmd->fallthrough();
    register_tail(*tail_cmd, tail_args, tail_reg);

    RateArgs rate_args;
    std::shared_ptr<OptionRegistry> rate_reg;
    CLI::App* rate_cmd = devlab_cmd->add_subcommand(
        "rate", "Frobenius-error trend of the penalized estimator");
    rate_cmd->fallthrough();
    register_rate(*rate_cmd, rate_args, rate_reg);

    std::vector<std::string> argv_like;
    argv_like.push_back("tvgl");
    for (const std::string& a : args) argv_like.push_back(a);
    std::vector<const char*> argv_ptrs;
    argv_ptrs.reserve(argv_like.size());
    for (const std::string& a : argv_like) argv_ptrs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv_ptrs.size()), argv_ptrs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        set_max_threads(threads);
        if (simulate_cmd->parsed()) {
            simulate_reg->apply_config();
            return run_simulate(simulate_args);
        }
        if (estimate_cmd->parsed()) {
            estimate_reg->apply_config();
            return run_estimate(estimate_args);
        }
        if (path_cmd->parsed()) {
            path_reg->apply_config();
            return run_path(path_args);
        }
        if (track_cmd->parsed()) {
            track_reg->apply_config();
            return run_track(track_args);
        }
        if (devlab_cmd->parsed()) {
            if (mgf_cmd->parsed()) {
                mgf_reg->apply_config();
                return run_mgf(mgf_args);
            }
            if (bias_cmd->parsed()) {
                bias_reg->apply_config();
                return run_bias(bias_args);
            }
            if (tail_cmd->parsed()) {
                tail_reg->apply_config();
                return run_tail(tail_args);
            }
            if (rate_cmd->parsed()) {
                rate_reg->apply_config();
                return run_rate(rate_args);
            }
        }
        std::cerr << "no command selected\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace tvgl::cli
