#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gpcrec/errors.hpp"
#include "gpcrec/experiment.hpp"
#include "gpcrec/least_squares.hpp"
#include "gpcrec/serialize.hpp"

namespace fs = std::filesystem;
using namespace gpcrec;

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::optional<std::string> scheme;
    bool quiet = false;
    int threads = 1;
};

Config load_config(const CommonArgs& args) {
    Config cfg = args.config_path.empty() ? Config{} : Config::load(args.config_path);
    if (args.seed) cfg.set("experiment.seed", std::to_string(*args.seed));
    if (args.scheme) cfg.set("experiment.scheme", *args.scheme);
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "config file (key = value lines)");
    cmd->add_option("--seed", args.seed, "seed override");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--scheme", args.scheme, "sampling scheme: i or ii")
        ->check(CLI::IsMember({"i", "ii"}));
    cmd->add_flag("--quiet", args.quiet, "suppress progress output");
    cmd->add_option("--threads", args.threads, "worker thread count");
}

void apply_threads(const CommonArgs& args) {
#ifdef _OPENMP
    omp_set_num_threads(std::max(1, args.threads));
#endif
}

fs::path ensure_out(const CommonArgs& args) {
    fs::path out(args.out_dir);
    fs::create_directories(out);
    return out;
}

int run_widths(const CommonArgs& args) {
    apply_threads(args);
    const Config cfg = load_config(args);
    const WeightSpec spec = weight_spec_from_config(cfg);
    const std::size_t count = static_cast<std::size_t>(cfg.get_int("widths.count", 16));
    const double xi = cfg.get_double("widths.xi", 8.0);
    const fs::path out = ensure_out(args);

    const IndexSet table = smallest_m(spec, count + 1);
    IndexSet head;
    head.indices.assign(table.indices.begin(), table.indices.begin() + count);
    head.sigmas.assign(table.sigmas.begin(), table.sigmas.begin() + count);
    write_text_file(out / "index_set.json", to_json(head).dump(2) + "\n");

    const IndexSet lambda = enumerate_threshold(spec, xi);
    write_text_file(out / "lambda.json", to_json(lambda).dump(2) + "\n");

    std::string csv = "n,d_n\n";
    for (std::size_t n = 0; n < count; ++n)
        csv += std::to_string(n) + "," + format_double(1.0 / table.sigmas[n + 1]) + "\n";
    write_text_file(out / "widths.csv", csv);

    if (!args.quiet)
        std::cout << "widths: " << count << " entries, |Lambda(" << xi
                  << ")| = " << lambda.size() << "\n";
    return 0;
}

int run_sample(const CommonArgs& args) {
    apply_threads(args);
    const Config cfg = load_config(args);
    const ExperimentConfig ec = ExperimentConfig::from_config(cfg);
    const std::size_t m = static_cast<std::size_t>(cfg.get_int("sample.m", 8));
    const std::size_t count = static_cast<std::size_t>(cfg.get_int("sample.count", 64));
    const fs::path out = ensure_out(args);

    const NuSpec nu = build_nu(ec.family, ec.spec, m, ec.nu_options);
    const int J = std::max({ec.J, nu.basis.max_dim(), nu.tail_set.max_dim(), 1});
    SamplePlan plan = draw_samples(nu, count, ec.seed, J, SampleScheme::IidSchemeI);
    if (ec.scheme == Scheme::II) {
        SamplePlan big = draw_samples(nu, count, ec.seed, J, SampleScheme::IidForSubsampling);
        const std::size_t target = static_cast<std::size_t>(
            std::ceil(ec.c2 * static_cast<double>(m)));
        plan = subsample(big, ec.family, nu.basis, target, ec.subsample_options);
    }
    write_text_file(out / "plan.csv", plan_to_csv(plan));
    write_text_file(out / "plan.json", to_json(plan).dump(2) + "\n");
    if (!args.quiet)
        std::cout << "sample: " << plan.size() << " points, J = " << plan.J << "\n";
    return 0;
}

int run_recover(const CommonArgs& args) {
    apply_threads(args);
    const Config cfg = load_config(args);
    ExperimentConfig ec = ExperimentConfig::from_config(cfg);
    if (ec.n_grid.empty()) ec.n_grid = {static_cast<long>(cfg.get_int("experiment.n", 256))};
    ec.n_grid.resize(1);
    const fs::path out = ensure_out(args);

    const RateReport report = run_recovery_experiment(ec);
    write_text_file(out / "recovery.json", report_to_json(report).dump(2) + "\n");
    if (!args.quiet && !report.rows.empty())
        std::cout << "recover: n = " << report.rows[0].n << ", rmse = " << report.rows[0].rmse
                  << " (" << report.rows[0].status << ")\n";
    return report.rows.empty() || report.rows[0].status == "gram_failure" ? 2 : 0;
}

int run_pde(const CommonArgs& args) {
    apply_threads(args);
    Config cfg = load_config(args);
    if (!cfg.has("experiment.target")) cfg.set("experiment.target", "pde_lognormal");
    ExperimentConfig ec = ExperimentConfig::from_config(cfg);
    if (ec.target != TargetKind::PdeLognormal && ec.target != TargetKind::PdeAffine)
        throw ConfigError("pde subcommand needs a pde_* target");
    if (ec.n_grid.empty()) ec.n_grid = {static_cast<long>(cfg.get_int("experiment.n", 128))};
    ec.n_grid.resize(1);
    const fs::path out = ensure_out(args);

    const RateReport report = run_recovery_experiment(ec);
    write_text_file(out / "pde.json", report_to_json(report).dump(2) + "\n");
    if (!args.quiet && !report.rows.empty())
        std::cout << "pde: n = " << report.rows[0].n << ", rmse = " << report.rows[0].rmse
                  << " +/- " << report.rows[0].stderr_ << "\n";
    return report.rows.empty() || report.rows[0].status == "gram_failure" ? 2 : 0;
}

int run_rates(const CommonArgs& args) {
    apply_threads(args);
    const Config cfg = load_config(args);
    const ExperimentConfig ec = ExperimentConfig::from_config(cfg);
    const fs::path out = ensure_out(args);

    const RateReport report = run_recovery_experiment(ec);
    write_text_file(out / "rates.csv", report_to_csv(report));
    write_text_file(out / "rates.json", report_to_json(report).dump(2) + "\n");
    if (!args.quiet) {
        if (report.slope_fitted)
            std::cout << "rates: fitted slope " << report.fit.slope << " (theory "
                      << report.theory_slope << ")\n";
        else
            std::cout << "rates: slope fit skipped (" << report.status << ")\n";
    }
    for (const auto& row : report.rows)
        if (row.status == "gram_failure") return 2;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted least-squares sampling recovery of polynomial chaos expansions"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* widths = app.add_subcommand("widths", "emit sigma table, threshold set and widths");
    add_common(widths, args);
    auto* sample = app.add_subcommand("sample", "emit a sample plan");
    add_common(sample, args);
    auto* recover = app.add_subcommand("recover", "one-shot synthetic recovery");
    add_common(recover, args);
    auto* pde = app.add_subcommand("pde", "one-shot PDE collocation");
    add_common(pde, args);
    auto* rates = app.add_subcommand("rates", "full rate sweep");
    add_common(rates, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return 1;
    }

    try {
        if (widths->parsed()) return run_widths(args);
        if (sample->parsed()) return run_sample(args);
        if (recover->parsed()) return run_recover(args);
        if (pde->parsed()) return run_pde(args);
        if (rates->parsed()) return run_rates(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
