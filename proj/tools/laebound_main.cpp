#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <semaphore>
#include <thread>

#include "laebound/config.hpp"
#include "laebound/dense_io.hpp"
#include "laebound/ease.hpp"
#include "laebound/interactions.hpp"
#include "laebound/lae_bound.hpp"
#include "laebound/metrics.hpp"
#include "laebound/mlr_bound.hpp"
#include "laebound/oracle.hpp"
#include "laebound/report.hpp"
#include "laebound/rng.hpp"
#include "laebound/synthetic.hpp"
#include "laebound/verify.hpp"

namespace fs = std::filesystem;
using namespace laeb;

namespace {

constexpr int kExitUserError = 1;
constexpr int kExitNumericalError = 2;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot write " + path.string());
    out << content;
}

int resolve_workers(int configured) {
    if (const char* env = std::getenv("LAEBOUND_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    if (configured > 0) return configured;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Drops users/items below the configured interaction floors (one pass each),
// then re-indexes densely in first-appearance order.
LoadResult apply_activity_filters(const LoadResult& loaded, int min_user, int min_item) {
    if (min_user <= 0 && min_item <= 0) return loaded;
    const InteractionMatrix& h = loaded.matrix;
    std::vector<long long> item_counts(static_cast<std::size_t>(h.n()), 0);
    h.for_each_entry([&](int i, int) { ++item_counts[static_cast<std::size_t>(i)]; });

    LoadResult out;
    std::vector<int> item_map(static_cast<std::size_t>(h.n()), -1);
    std::vector<std::pair<int, int>> coords;
    for (int u = 0; u < h.m(); ++u) {
        std::vector<int> kept;
        for (int i : h.items_of_user(u)) {
            if (item_counts[static_cast<std::size_t>(i)] >= min_item) kept.push_back(i);
        }
        if (static_cast<int>(kept.size()) < min_user) continue;
        const int new_user = static_cast<int>(out.user_ids.size());
        out.user_ids.push_back(loaded.user_ids[static_cast<std::size_t>(u)]);
        for (int i : kept) {
            int& mapped = item_map[static_cast<std::size_t>(i)];
            if (mapped < 0) {
                mapped = static_cast<int>(out.item_ids.size());
                out.item_ids.push_back(loaded.item_ids[static_cast<std::size_t>(i)]);
            }
            coords.emplace_back(mapped, new_user);
        }
    }
    if (coords.empty()) throw EmptyDatasetError("activity filters removed every interaction");
    out.matrix = InteractionMatrix::from_coords(static_cast<int>(out.item_ids.size()),
                                                static_cast<int>(out.user_ids.size()), coords);
    out.raw_records = loaded.raw_records;
    out.duplicate_records = loaded.duplicate_records;
    return out;
}

void write_id_map(const fs::path& path, const std::vector<std::string>& ids) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot write " + path.string());
    for (std::size_t k = 0; k < ids.size(); ++k) out << k << ' ' << ids[k] << '\n';
}

// ---- subcommand payloads ----------------------------------------------------

struct IngestArgs {
    std::string input;
    std::string output;
    std::string delimiter = ",";
    int skip_lines = 0;
    int min_user = 0;
    int min_item = 0;
    std::string users_map;
    std::string items_map;
};

int cmd_ingest(const IngestArgs& args) {
    LoadFormat format;
    if (args.delimiter == "tab" || args.delimiter == "\\t") format.delimiter = '\t';
    else if (args.delimiter.size() == 1) format.delimiter = args.delimiter[0];
    else throw ArgumentError("--delimiter expects one character or 'tab'");
    format.skip_lines = args.skip_lines;

    const LoadResult raw = load_interactions(args.input, format);
    const LoadResult loaded = apply_activity_filters(raw, args.min_user, args.min_item);
    save_interactions(args.output, loaded.matrix);
    if (!args.users_map.empty()) write_id_map(args.users_map, loaded.user_ids);
    if (!args.items_map.empty()) write_id_map(args.items_map, loaded.item_ids);

    std::cout << "items " << loaded.matrix.n() << "\nusers " << loaded.matrix.m()
              << "\ninteractions " << loaded.matrix.nnz() << "\nraw_records "
              << loaded.raw_records << "\nduplicates " << loaded.duplicate_records << "\n";
    return 0;
}

struct SplitArgs {
    std::string input;
    std::string train;
    std::string test;
    double test_fraction = 0.3;
    std::uint64_t seed = 1;
};

int cmd_split(const SplitArgs& args) {
    const InteractionMatrix h = load_interactions_internal(args.input);
    const auto [train, test] = strong_split(h, args.test_fraction, args.seed);
    save_interactions(args.train, train);
    save_interactions(args.test, test);
    std::cout << "train_users " << train.m() << "\ntest_users " << test.m() << "\n";
    return 0;
}

struct TrainArgs {
    std::string input;
    std::string output;
    double gamma = 500.0;
};

int cmd_train_ease(const TrainArgs& args) {
    const InteractionMatrix h = load_interactions_internal(args.input);
    const EaseModel model = train_ease(h, args.gamma);
    save_dense(args.output, model.weights);
    std::cout << "items " << h.n() << "\ngamma " << fmt(args.gamma) << "\nweights_norm "
              << fmt(model.weights.norm()) << "\n";
    return 0;
}

constexpr int kDenseWarnItems = 20000;

Matrix population_correlation_checked(const InteractionMatrix& h) {
    if (h.n() > kDenseWarnItems) {
        std::cerr << "warning: allocating a dense " << h.n() << "x" << h.n()
                  << " correlation matrix ("
                  << static_cast<double>(h.n()) * h.n() * 8.0 / (1 << 30) << " GiB)\n";
    }
    return population_correlation(h);
}

Matrix resolve_sigma_hh(SigmaHhSource source, const fs::path& sigma_hh_file,
                        const InteractionMatrix* whole, const InteractionMatrix* train) {
    switch (source) {
        case SigmaHhSource::whole:
            if (!whole) throw ArgumentError("sigma_hh_source=whole needs the whole dataset");
            return population_correlation_checked(*whole);
        case SigmaHhSource::train:
            if (!train) throw ArgumentError("sigma_hh_source=train needs the train split");
            return population_correlation_checked(*train);
        case SigmaHhSource::file:
            if (sigma_hh_file.empty()) {
                throw ArgumentError("sigma_hh_source=file needs sigma_hh_file");
            }
            return load_dense(sigma_hh_file);
    }
    throw ArgumentError("unknown sigma_hh source");
}

struct BoundArgs {
    std::string model;
    std::string test;
    std::string population;      // interactions file for the population moments
    std::string sigma_hh_file;   // dense matrix alternative
    double p = 0.5;
    double sigma = 0.001;
    double delta = 0.01;
    std::string lambda = "1,2,4,8,16,32,64,128,256,512";
    std::uint64_t seed = 1;
    double jitter = 0.0;
    bool unconstrained = false;
    std::string report_prefix = "bound";
};

std::vector<double> parse_lambda_list(const std::string& text) {
    std::vector<double> grid;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            grid.push_back(v);
        } catch (const std::exception&) {
            throw ArgumentError("cannot parse list entry '" + item + "'");
        }
    }
    return grid;
}

int cmd_bound(const BoundArgs& args) {
    const Matrix w = load_dense(args.model);
    const InteractionMatrix test = load_interactions_internal(args.test);
    const HoldoutSplit split = holdout_mask(test, args.p, args.seed);

    Matrix sigma_hh;
    if (!args.sigma_hh_file.empty()) {
        sigma_hh = resolve_sigma_hh(SigmaHhSource::file, args.sigma_hh_file, nullptr, nullptr);
    } else if (!args.population.empty()) {
        const InteractionMatrix population = load_interactions_internal(args.population);
        sigma_hh = population_correlation_checked(population);
    } else {
        throw ArgumentError("bound needs --population or --sigma-hh-file");
    }

    BoundConfig config;
    config.sigma = args.sigma;
    config.delta = args.delta;
    config.lambda_grid = parse_lambda_list(args.lambda);
    config.zero_diag = !args.unconstrained;
    if (args.jitter > 0.0) config.jitter = args.jitter;

    const BoundReport report = compute_bound(sigma_hh, args.p, split.x, split.y, w, config);
    const fs::path prefix(args.report_prefix);
    write_bound_report(prefix.string() + ".txt", prefix.string() + ".json", report);

    const GridRecord& best = report.grid[report.best_index];
    std::cout << "lambda " << fmt(best.lambda) << "\nLH " << fmt(best.lh) << "\nRH "
              << fmt(best.rh) << "\n";
    if (best.rh > 3.0 * best.lh) {
        std::cout << "note RH exceeds 3x LH on this dataset\n";
    }
    return 0;
}

struct MetricsArgs {
    std::string model;
    std::string test;
    double p = 0.5;
    std::uint64_t seed = 1;
    std::string ks = "50,100";
    bool include_input = false;
};

int cmd_metrics(const MetricsArgs& args) {
    const Matrix w = load_dense(args.model);
    const InteractionMatrix test = load_interactions_internal(args.test);
    const HoldoutSplit split = holdout_mask(test, args.p, args.seed);

    std::vector<int> ks;
    for (double v : parse_lambda_list(args.ks)) ks.push_back(static_cast<int>(v));
    const RankingResult result =
        evaluate_ranking(w, split.x, split.y, ks, !args.include_input);
    for (int k : ks) {
        std::cout << "recall@" << k << ' ' << fmt(result.recall.at(k)) << "\n";
        std::cout << "ndcg@" << k << ' ' << fmt(result.ndcg.at(k)) << "\n";
    }
    std::cout << "users_evaluated " << result.users_evaluated << "\n";
    return 0;
}

struct GammaRow {
    double gamma = 0.0;
    BoundReport report;
    RankingResult ranking;
};

int cmd_run(const ExperimentConfig& config) {
    if (config.dataset.empty()) throw ArgumentError("config is missing 'dataset'");
    fs::create_directories(config.output_dir);

    LoadFormat format;
    format.delimiter = config.delimiter;
    format.skip_lines = config.skip_lines;
    const LoadResult raw = load_interactions(config.dataset, format);
    const LoadResult loaded = apply_activity_filters(raw, config.min_user_interactions,
                                                     config.min_item_interactions);
    const InteractionMatrix& whole = loaded.matrix;

    const auto [train, test] = strong_split(whole, config.test_fraction, config.split_seed());
    const HoldoutSplit split = holdout_mask(test, config.p, config.mask_seed());
    const Matrix sigma_hh =
        resolve_sigma_hh(config.sigma_hh_source, config.sigma_hh_file, &whole, &train);

    BoundConfig bound_config;
    bound_config.sigma = config.sigma;
    bound_config.delta = config.delta;
    bound_config.lambda_grid = config.lambda;
    bound_config.zero_diag = config.zero_diag;
    bound_config.jitter = config.jitter;

    // The spectral work on sigma_hh is shared by every gamma.
    const CorrelationTriple corr =
        correlations_from_holdout(sigma_hh, config.p, config.jitter);

    const int workers = resolve_workers(config.workers);
    std::counting_semaphore<256> slots(std::min(workers, 256));
    std::vector<std::future<GammaRow>> futures;
    futures.reserve(config.gamma.size());
    for (double gamma : config.gamma) {
        futures.push_back(std::async(std::launch::async, [&, gamma]() {
            slots.acquire();
            struct Release {
                std::counting_semaphore<256>& s;
                ~Release() { s.release(); }
            } release{slots};

            GammaRow row;
            row.gamma = gamma;
            try {
                const EaseModel model = train_ease(train, gamma);
                row.report = compute_bound(corr, config.p, split.x, split.y, model.weights,
                                           bound_config);
                row.ranking =
                    evaluate_ranking(model.weights, split.x, split.y, config.metric_ks);
            } catch (const std::exception& e) {
                throw NumericalError("gamma " + fmt(gamma) + ": " + e.what());
            }
            return row;
        }));
    }

    std::vector<GammaRow> rows;
    rows.reserve(futures.size());
    for (auto& f : futures) rows.push_back(f.get());

    // Resolved config echo: every report embeds it.
    const std::string config_echo = config_to_string(config);
    write_text(config.output_dir / "config_resolved.txt", config_echo);

    const std::string sigma_hh_source_name =
        config.sigma_hh_source == SigmaHhSource::whole   ? "whole"
        : config.sigma_hh_source == SigmaHhSource::train ? "train"
                                                         : "file";

    std::string table = "# per-gamma summary (sigma_hh source: " + sigma_hh_source_name + ")\n";
    table += "gamma\tlambda\tLH\tRH";
    for (int k : config.metric_ks) table += "\trecall@" + std::to_string(k);
    for (int k : config.metric_ks) table += "\tndcg@" + std::to_string(k);
    table += "\n";

    nlohmann::ordered_json summary;
    summary["config"] = config_echo;
    summary["sigma_hh_source"] = sigma_hh_source_name;
    summary["items"] = whole.n();
    summary["users"] = whole.m();
    summary["train_users"] = train.m();
    summary["test_users"] = test.m();
    summary["rows"] = nlohmann::ordered_json::array();

    for (std::size_t k = 0; k < rows.size(); ++k) {
        const GammaRow& row = rows[k];
        const GridRecord& best = row.report.grid[row.report.best_index];
        table += fmt(row.gamma) + "\t" + fmt(best.lambda) + "\t" + fmt(best.lh) + "\t" +
                 fmt(best.rh);
        for (int kk : config.metric_ks) table += "\t" + fmt(row.ranking.recall.at(kk));
        for (int kk : config.metric_ks) table += "\t" + fmt(row.ranking.ndcg.at(kk));
        table += "\n";

        const std::string stem = "bound_gamma" + fmt(row.gamma);
        write_bound_report(config.output_dir / (stem + ".txt"),
                           config.output_dir / (stem + ".json"), row.report);

        nlohmann::ordered_json entry;
        entry["gamma"] = row.gamma;
        entry["lambda"] = best.lambda;
        entry["LH"] = best.lh;
        entry["RH"] = best.rh;
        entry["emp_risk_exp"] = best.emp_risk_exp;
        entry["kl"] = best.kl;
        entry["log_mgf"] = best.log_mgf;
        entry["ln_L_over_delta"] = best.ln_l_over_delta;
        entry["rh_within_3x_lh"] = best.rh <= 3.0 * best.lh;
        for (int kk : config.metric_ks) {
            entry["recall@" + std::to_string(kk)] = row.ranking.recall.at(kk);
            entry["ndcg@" + std::to_string(kk)] = row.ranking.ndcg.at(kk);
        }
        summary["rows"].push_back(std::move(entry));
    }

    write_text(config.output_dir / "run_summary.txt", table);
    write_text(config.output_dir / "run_summary.json", summary.dump(2) + "\n");
    std::cout << table;
    return 0;
}

int cmd_verify(const std::string& level, std::uint64_t seed) {
    VerifyLevel parsed;
    if (level == "quick") parsed = VerifyLevel::quick;
    else if (level == "full") parsed = VerifyLevel::full;
    else throw ArgumentError("--level expects quick or full");

    const std::vector<CheckResult> checks = run_verify(parsed, seed);
    bool all = true;
    for (const CheckResult& check : checks) {
        std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": "
                  << check.detail << "\n";
        all = all && check.passed;
    }
    std::cout << (all ? "all checks passed\n" : "some checks FAILED\n");
    return all ? 0 : kExitNumericalError;
}

int cmd_mlr_demo(std::uint64_t seed) {
    RngStream rng(seed);
    const int n = 3;
    const int p = 2;
    GaussianDataModel model;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    model.sigma_x = a * a.transpose() / n;
    model.mu_x = Vector::Zero(n);
    for (int i = 0; i < n; ++i) model.mu_x(i) = 0.5 * rng.normal();
    Matrix b(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) b(i, j) = rng.normal();
    model.sigma_e = b * b.transpose() / p + 0.2 * Matrix::Identity(p, p);
    model.w_star = Matrix(p, n);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < n; ++j) model.w_star(i, j) = 0.5 * rng.normal();

    Matrix u0 = model.w_star;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < n; ++j) u0(i, j) += 0.3 * rng.normal();
    const double sigma = 0.25;
    const double lambda = 0.2;

    const ConvergenceCheck cond = convergence_condition_gaussian(model, u0, sigma, lambda);
    std::cout << "convergence threshold 1/(2 nu1 sigma^2) = " << fmt(cond.threshold)
              << ", lambda = " << fmt(lambda) << " -> "
              << (cond.holds ? "conforming" : "NOT conforming") << "\n";
    if (cond.log_value) {
        std::cout << "log E_pi exp(lambda |...|^2) = " << fmt(*cond.log_value) << "\n";
    }

    const GaussianPrior prior{u0, sigma, false};
    const std::vector<Matrix> samples = sample_prior(prior, p, n, 2000, seed + 1);
    std::cout << "m\tpsi_exact\tpsi_upper\n";
    for (long long m : {10LL, 100LL, 1000LL, 10000LL, 1000000LL}) {
        std::cout << m << '\t' << fmt(psi_exact(model, samples, lambda, m)) << '\t'
                  << fmt(psi_upper(model, samples, lambda, m)) << "\n";
    }

    // A full Eq.-1 style assembly at m = 1000 with a posterior concentrated
    // near the truth.
    const long long m = 1000;
    const auto [x, y] = sample_regression(model, m, seed + 2);
    const GaussianPrior rho{model.w_star, 0.05, false};
    const std::vector<Matrix> rho_samples = sample_prior(rho, p, n, 500, seed + 3);
    double emp = 0.0;
    double true_risk = 0.0;
    for (const Matrix& w : rho_samples) {
        emp += (y - w * x).squaredNorm() / static_cast<double>(m);
        true_risk += error_moments(model, w).true_risk();
    }
    emp /= static_cast<double>(rho_samples.size());
    true_risk /= static_cast<double>(rho_samples.size());

    double kl = 0.0;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < n; ++j) {
            const double du = rho.u0(i, j) - u0(i, j);
            kl += std::log(sigma / rho.sigma) +
                  (rho.sigma * rho.sigma + du * du) / (2.0 * sigma * sigma) - 0.5;
        }
    }
    const double delta = 0.05;
    const double psi = psi_exact(model, samples, lambda, m);
    const double rhs = alquier_rhs(emp, kl, delta, psi, lambda);
    std::cout << "m = " << m << ", delta = " << fmt(delta) << "\n";
    std::cout << "E_rho[R_emp] = " << fmt(emp) << ", KL = " << fmt(kl)
              << ", psi = " << fmt(psi) << "\n";
    std::cout << "E_rho[R_true] = " << fmt(true_risk) << " <= RHS = " << fmt(rhs)
              << (true_risk <= rhs ? "  (bound holds)" : "  (bound VIOLATED)") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAC-Bayes generalization bounds for linear autoencoders"};
    app.require_subcommand(1);

    IngestArgs ingest;
    CLI::App* cmd_ingest_p = app.add_subcommand("ingest", "convert raw pairs to the sparse format");
    cmd_ingest_p->add_option("--input", ingest.input)->required();
    cmd_ingest_p->add_option("--output", ingest.output)->required();
    cmd_ingest_p->add_option("--delimiter", ingest.delimiter);
    cmd_ingest_p->add_option("--skip-lines", ingest.skip_lines);
    cmd_ingest_p->add_option("--min-user-interactions", ingest.min_user);
    cmd_ingest_p->add_option("--min-item-interactions", ingest.min_item);
    cmd_ingest_p->add_option("--users-map", ingest.users_map);
    cmd_ingest_p->add_option("--items-map", ingest.items_map);

    SplitArgs split;
    CLI::App* cmd_split_p = app.add_subcommand("split", "strong-generalization user split");
    cmd_split_p->add_option("--input", split.input)->required();
    cmd_split_p->add_option("--train", split.train)->required();
    cmd_split_p->add_option("--test", split.test)->required();
    cmd_split_p->add_option("--test-fraction", split.test_fraction);
    cmd_split_p->add_option("--seed", split.seed);

    TrainArgs train;
    CLI::App* cmd_train_p = app.add_subcommand("train-ease", "closed-form EASE training");
    cmd_train_p->add_option("--input", train.input)->required();
    cmd_train_p->add_option("--output", train.output)->required();
    cmd_train_p->add_option("--gamma", train.gamma);

    BoundArgs bound;
    CLI::App* cmd_bound_p = app.add_subcommand("bound", "compute the PAC-Bayes bound");
    cmd_bound_p->add_option("--model", bound.model)->required();
    cmd_bound_p->add_option("--test", bound.test)->required();
    cmd_bound_p->add_option("--population", bound.population);
    cmd_bound_p->add_option("--sigma-hh-file", bound.sigma_hh_file);
    cmd_bound_p->add_option("--p", bound.p);
    cmd_bound_p->add_option("--sigma", bound.sigma);
    cmd_bound_p->add_option("--delta", bound.delta);
    cmd_bound_p->add_option("--lambda", bound.lambda);
    cmd_bound_p->add_option("--seed", bound.seed);
    cmd_bound_p->add_option("--jitter", bound.jitter);
    cmd_bound_p->add_flag("--unconstrained", bound.unconstrained);
    cmd_bound_p->add_option("--report-prefix", bound.report_prefix);

    MetricsArgs metrics;
    CLI::App* cmd_metrics_p = app.add_subcommand("metrics", "ranking metrics on a hold-out split");
    cmd_metrics_p->add_option("--model", metrics.model)->required();
    cmd_metrics_p->add_option("--test", metrics.test)->required();
    cmd_metrics_p->add_option("--p", metrics.p);
    cmd_metrics_p->add_option("--seed", metrics.seed);
    cmd_metrics_p->add_option("--ks", metrics.ks);
    cmd_metrics_p->add_flag("--include-input", metrics.include_input);

    std::string config_path;
    std::vector<std::string> overrides;
    CLI::App* cmd_run_p = app.add_subcommand("run", "full pipeline over the gamma list");
    cmd_run_p->add_option("--config", config_path)->required();
    cmd_run_p->add_option("--set", overrides, "key=value config overrides");

    std::string verify_level = "quick";
    std::uint64_t verify_seed = 20240901;
    CLI::App* cmd_verify_p = app.add_subcommand("verify", "oracle cross-check suite");
    cmd_verify_p->add_option("--level", verify_level);
    cmd_verify_p->add_option("--seed", verify_seed);

    std::uint64_t demo_seed = 7;
    CLI::App* cmd_demo_p = app.add_subcommand("mlr-demo", "multivariate regression bound demo");
    cmd_demo_p->add_option("--seed", demo_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUserError;
    }

    try {
        if (cmd_ingest_p->parsed()) return cmd_ingest(ingest);
        if (cmd_split_p->parsed()) return cmd_split(split);
        if (cmd_train_p->parsed()) return cmd_train_ease(train);
        if (cmd_bound_p->parsed()) return cmd_bound(bound);
        if (cmd_metrics_p->parsed()) return cmd_metrics(metrics);
        if (cmd_run_p->parsed()) {
            ExperimentConfig config = load_config(config_path);
            for (const std::string& item : overrides) {
                const auto eq = item.find('=');
                if (eq == std::string::npos) {
                    throw ArgumentError("--set expects key=value, got '" + item + "'");
                }
                apply_config_line(config, item.substr(0, eq), item.substr(eq + 1));
            }
            return cmd_run(config);
        }
        if (cmd_verify_p->parsed()) return cmd_verify(verify_level, verify_seed);
        if (cmd_demo_p->parsed()) return cmd_mlr_demo(demo_seed);
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const EmptyDatasetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumericalError;
    }
    return 0;
}
