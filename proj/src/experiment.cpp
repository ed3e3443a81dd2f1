#include "gpcrec/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "gpcrec/design.hpp"
#include "gpcrec/errors.hpp"
#include "gpcrec/least_squares.hpp"
#include "gpcrec/rng.hpp"

namespace gpcrec {

WeightSpec weight_spec_from_config(const Config& cfg) {
    const std::string kind = cfg.get_string("weights.kind", "affine");
    const double q = cfg.get_double("weights.q", 1.0);

    RhoRule rho;
    const std::string rho_kind = cfg.get_string("weights.rho", "geometric");
    const std::size_t max_dim =
        static_cast<std::size_t>(cfg.get_int("weights.rho_max_dim", 0));
    if (rho_kind == "geometric") {
        rho = RhoRule::geometric(cfg.get_double("weights.rho_base", 2.0), max_dim);
    } else if (rho_kind == "power") {
        rho = RhoRule::power(cfg.get_double("weights.rho_scale", 1.0),
                             cfg.get_double("weights.rho_exponent", 1.0), max_dim);
    } else if (rho_kind == "values") {
        rho = RhoRule::from_values(cfg.get_list("weights.rho_values"));
    } else {
        throw ConfigError("weights.rho must be geometric, power or values");
    }

    if (kind == "lognormal")
        return WeightSpec::lognormal(static_cast<int>(cfg.get_int("weights.eta", 1)), rho, q);
    if (kind == "affine") {
        DegreeRule c;
        const std::string c_kind = cfg.get_string("weights.c", "legendre_sup");
        if (c_kind == "legendre_sup")
            c.kind = DegreeRule::Kind::LegendreSup;
        else if (c_kind == "one")
            c.kind = DegreeRule::Kind::One;
        else
            throw ConfigError("weights.c must be legendre_sup or one");
        return WeightSpec::affine(rho, c, q);
    }
    throw ConfigError("weights.kind must be lognormal or affine");
}

PolynomialFamily family_from_config(const Config& cfg) {
    const std::string kind = cfg.get_string("family.kind", "hermite");
    if (kind == "hermite") return PolynomialFamily::hermite();
    if (kind == "jacobi")
        return PolynomialFamily::jacobi(cfg.get_double("family.a", 0.0),
                                        cfg.get_double("family.b", 0.0));
    throw ConfigError("family.kind must be hermite or jacobi");
}

ExperimentConfig ExperimentConfig::from_config(const Config& cfg) {
    ExperimentConfig ec;
    const std::string target = cfg.get_string("experiment.target", "synthetic_scalar");
    if (target == "synthetic_scalar")
        ec.target = TargetKind::SyntheticScalar;
    else if (target == "synthetic_bochner")
        ec.target = TargetKind::SyntheticBochner;
    else if (target == "pde_lognormal")
        ec.target = TargetKind::PdeLognormal;
    else if (target == "pde_affine")
        ec.target = TargetKind::PdeAffine;
    else
        throw ConfigError("experiment.target: unknown value " + target);

    const std::string scheme = cfg.get_string("experiment.scheme", "i");
    if (scheme == "i")
        ec.scheme = Scheme::I;
    else if (scheme == "ii")
        ec.scheme = Scheme::II;
    else
        throw ConfigError("experiment.scheme must be i or ii");

    if (cfg.has("experiment.n_grid")) {
        ec.n_grid = cfg.get_int_list("experiment.n_grid");
        for (std::size_t i = 1; i < ec.n_grid.size(); ++i)
            if (ec.n_grid[i] <= ec.n_grid[i - 1])
                throw ConfigError("experiment.n_grid must be strictly increasing");
    }
    ec.seed = static_cast<std::uint64_t>(cfg.get_int("experiment.seed", 42));
    ec.J = static_cast<int>(cfg.get_int("experiment.J", 0));
    ec.test_count = static_cast<std::size_t>(cfg.get_int("experiment.test_count", 2000));
    ec.active_m = static_cast<std::size_t>(cfg.get_int("experiment.active_m", 256));
    ec.bochner_d = static_cast<int>(cfg.get_int("experiment.bochner_d", 1));

    // default family by target, overridable
    if (ec.target == TargetKind::PdeAffine)
        ec.family = PolynomialFamily::jacobi(0.0, 0.0);
    else
        ec.family = PolynomialFamily::hermite();
    if (cfg.has("family.kind")) ec.family = family_from_config(cfg);

    ec.field_J = static_cast<int>(cfg.get_int("field.J", 4));

    // PDE targets live in a fixed number of dimensions; truncate the weight
    // rule accordingly unless the config already did
    Config wcfg = cfg;
    const bool is_pde =
        ec.target == TargetKind::PdeLognormal || ec.target == TargetKind::PdeAffine;
    if (is_pde && !cfg.has("weights.rho_max_dim"))
        wcfg.set("weights.rho_max_dim", std::to_string(ec.field_J));
    if (is_pde && !cfg.has("weights.kind"))
        wcfg.set("weights.kind",
                 ec.target == TargetKind::PdeLognormal ? "lognormal" : "affine");
    ec.spec = weight_spec_from_config(wcfg);

    ec.m_divisor = cfg.get_double("sampling.m_divisor", 20.0);
    ec.c1 = cfg.get_double("sampling.c1", 1.0);
    ec.oversample_ii = cfg.get_double("sampling.oversample", 20.0);
    ec.c2 = cfg.get_double("sampling.c2", 1.2);
    ec.nu_options.tail_tol = cfg.get_double("sampling.tail_tol", 1e-6);
    ec.subsample_options.gamma_low = cfg.get_double("sampling.gamma_low", 1.0 / 66.0);
    ec.subsample_options.gamma_high = cfg.get_double("sampling.gamma_high", 70.0);
    ec.subsample_options.lazy_pops =
        static_cast<int>(cfg.get_int("sampling.lazy_pops", 24));
    ec.subsample_options.epoch = static_cast<int>(cfg.get_int("sampling.epoch", 0));

    ec.mesh.nh = static_cast<int>(cfg.get_int("mesh.nh", 256));
    ec.rhs_const = cfg.get_double("rhs.constant", 1.0);
    ec.psi_kind = cfg.get_string("field.psi", "sine");
    ec.field_kappa = cfg.get_double("field.kappa", 1.0);
    ec.field_theta = cfg.get_double("field.theta", 2.0);
    ec.field_abar = cfg.get_double("field.abar", 2.0);
    return ec;
}

CoefficientField field_from_config(const ExperimentConfig& cfg) {
    std::vector<PsiSpec> psi;
    if (cfg.psi_kind == "sine")
        psi = sine_psi_family(cfg.field_kappa, cfg.field_theta, cfg.field_J);
    else if (cfg.psi_kind == "hats")
        psi = hat_psi_family(cfg.field_kappa, cfg.field_theta, cfg.field_J);
    else
        throw ConfigError("field.psi must be sine or hats");

    if (cfg.target == TargetKind::PdeAffine) {
        const double abar = cfg.field_abar;
        return CoefficientField::affine([abar](double) { return abar; }, std::move(psi));
    }
    return CoefficientField::lognormal(std::move(psi));
}

CoeffTable synth_function(const WeightSpec& spec, const IndexSet& active_set,
                          std::uint64_t seed, int d) {
    if (d < 1) throw DomainError("synth_function: d must be positive");
    RngStream rs(seed, 0x5f3759df);
    Eigen::MatrixXd g(static_cast<Eigen::Index>(active_set.size()), d);
    for (Eigen::Index r = 0; r < g.rows(); ++r)
        for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = rs.normal();
    const double norm = g.norm();
    if (norm > 0.0) g /= norm;

    CoeffTable table;
    for (std::size_t i = 0; i < active_set.size(); ++i) {
        const double sigma = active_set.sigmas[i];
        table[active_set.indices[i]] =
            g.row(static_cast<Eigen::Index>(i)).transpose() / sigma;
    }
    (void)spec;
    return table;
}

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw DegenerateInput("fit_slope: need at least 3 points");
    const std::size_t n = points.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [nn, rmse] : points) {
        if (!(rmse > 0.0)) throw DegenerateInput("fit_slope: rmse must be positive");
        if (!(nn > 0.0)) throw DegenerateInput("fit_slope: n must be positive");
        const double x = std::log(nn), y = std::log(rmse);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-14) throw DegenerateInput("fit_slope: degenerate abscissae");
    SlopeFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0;
    for (const auto& [nn, rmse] : points) {
        const double r = std::log(rmse) - (fit.intercept + fit.slope * std::log(nn));
        ss_res += r * r;
    }
    const double dof = static_cast<double>(n) - 2.0;
    const double var = dof > 0 ? ss_res / dof : 0.0;
    const double se = std::sqrt(var * n / denom);
    fit.ci_lo = fit.slope - 1.959963984540054 * se;
    fit.ci_hi = fit.slope + 1.959963984540054 * se;
    return fit;
}

namespace {

struct SyntheticTarget {
    IndexSet active;
    CoeffTable table;
    Eigen::MatrixXd coeffs; // |active| x d, aligned with active order
    int d = 1;
};

Eigen::MatrixXd evaluate_synthetic(const PolynomialFamily& family, const SyntheticTarget& t,
                                   const Eigen::MatrixXd& points) {
    const Eigen::MatrixXd L = tensor_design(family, t.active, points);
    return L * t.coeffs;
}

double exact_parseval_rmse(const SyntheticTarget& t, const Approximant& approx) {
    // approx basis must be a prefix of the active enumeration
    double acc = 0.0;
    for (std::size_t i = 0; i < t.active.size(); ++i) {
        Eigen::VectorXd diff = t.coeffs.row(static_cast<Eigen::Index>(i)).transpose();
        if (i < approx.basis.size()) {
            if (approx.basis.indices[i] != t.active.indices[i])
                throw ShapeMismatch("exact_parseval_rmse: basis is not a prefix of the target set");
            diff -= approx.coefficients.row(static_cast<Eigen::Index>(i)).transpose();
        }
        acc += diff.squaredNorm();
    }
    return std::sqrt(acc);
}

} // namespace

RateReport run_recovery_experiment(const ExperimentConfig& cfg) {
    if (cfg.n_grid.empty()) throw ConfigError("run_recovery_experiment: empty n_grid");

    const bool is_pde =
        cfg.target == TargetKind::PdeLognormal || cfg.target == TargetKind::PdeAffine;
    const bool is_bochner_synth = cfg.target == TargetKind::SyntheticBochner;

    RateReport report;
    report.m_divisor = cfg.m_divisor;
    report.c1 = cfg.c1;
    report.oversample_ii = cfg.oversample_ii;
    report.c2 = cfg.c2;
    report.scheme = cfg.scheme == Scheme::I ? "i" : "ii";
    report.theory_slope = -1.0 / cfg.spec.q();

    SyntheticTarget synth;
    CoefficientField field = CoefficientField::lognormal({});
    RhsFn rhs;
    if (is_pde) {
        field = field_from_config(cfg);
        const double c = cfg.rhs_const;
        rhs = [c](double) { return c; };
    } else {
        synth.d = is_bochner_synth ? cfg.bochner_d : 1;
        synth.active = smallest_m(cfg.spec, cfg.active_m);
        synth.table = synth_function(cfg.spec, synth.active, cfg.seed, synth.d);
        const Approximant aligned = truncate_expansion(synth.table, synth.active);
        synth.coeffs = aligned.coefficients;
    }

    for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
        const long n = cfg.n_grid[gi];
        RateRow row;
        row.n = n;
        const double logn = std::max(std::log(static_cast<double>(n)), 1.0);
        std::size_t m, draw_count, target = 0;
        if (cfg.scheme == Scheme::I) {
            m = static_cast<std::size_t>(std::max(
                1.0, std::floor(static_cast<double>(n) / (cfg.m_divisor * logn))));
            draw_count = static_cast<std::size_t>(std::ceil(cfg.c1 * static_cast<double>(n)));
        } else {
            m = static_cast<std::size_t>(n);
            draw_count = static_cast<std::size_t>(
                std::ceil(cfg.oversample_ii * static_cast<double>(n) * logn));
            target = static_cast<std::size_t>(std::ceil(cfg.c2 * static_cast<double>(m)));
        }
        if (!is_pde && m > cfg.active_m)
            throw ConfigError("run_recovery_experiment: basis size exceeds active_m; "
                              "increase experiment.active_m");
        row.m = m;

        const NuSpec nu = build_nu(cfg.family, cfg.spec, m, cfg.nu_options);
        int J = std::max(cfg.J, std::max(nu.basis.max_dim(), nu.tail_set.max_dim()));
        if (is_pde) J = std::max(J, cfg.field_J);
        else J = std::max(J, synth.active.max_dim());
        J = std::max(J, 1);

        const std::uint64_t row_seed = cfg.seed + 0x9E37llu * gi;
        SamplePlan plan;
        bool plan_ok = false;
        for (int attempt = 0; attempt < 2 && !plan_ok; ++attempt) {
            const std::uint64_t s = row_seed + 0x51ED270Bllu * attempt;
            try {
                if (cfg.scheme == Scheme::I) {
                    plan = draw_samples(nu, draw_count, s, J, SampleScheme::IidSchemeI);
                } else {
                    SamplePlan big =
                        draw_samples(nu, draw_count, s, J, SampleScheme::IidForSubsampling);
                    plan = subsample(big, cfg.family, nu.basis, target, cfg.subsample_options);
                }
                plan_ok = true;
            } catch (const IllConditionedInput&) {
                // one redraw, then record the failure
            }
        }
        if (!plan_ok) {
            row.status = "gram_failure";
            row.samples_used = 0;
            report.rows.push_back(row);
            continue;
        }
        row.samples_used = plan.size();

        const DesignMatrix design = assemble_design(cfg.family, nu.basis, plan);
        row.lambda_min = gram_diagnostics(design).lambda_min;

        Approximant approx;
        if (is_pde) {
            const int dof = cfg.mesh.nh - 1;
            Eigen::MatrixXd samples(static_cast<Eigen::Index>(plan.size()), dof);
#pragma omp parallel for schedule(static)
            for (long long i = 0; i < static_cast<long long>(plan.size()); ++i) {
                std::vector<double> y(static_cast<std::size_t>(J));
                for (int j = 0; j < J; ++j) y[static_cast<std::size_t>(j)] = plan.points(i, j);
                samples.row(i) = solve_fem(field, y, cfg.rhs_const, cfg.mesh).values.transpose();
            }
            approx = solve_bochner(design, samples);
            const McError err = bochner_error_mc(approx, cfg.family, field, rhs, cfg.mesh,
                                                 cfg.test_count, row_seed ^ 0xABCDEF, J);
            row.rmse = err.rmse;
            row.stderr_ = err.stderr_;
        } else {
            const Eigen::MatrixXd values = evaluate_synthetic(cfg.family, synth, plan.points);
            approx = synth.d == 1 ? solve_scalar(design, values.col(0))
                                  : solve_bochner(design, values);
            row.rmse = exact_parseval_rmse(synth, approx);
            row.stderr_ = 0.0;
        }
        if (row.rmse <= 1e-8) row.status = "exact";
        report.rows.push_back(row);
    }

    std::vector<std::pair<double, double>> fit_points;
    for (const auto& row : report.rows)
        if (row.status == "ok")
            fit_points.emplace_back(static_cast<double>(row.n), row.rmse);
    if (fit_points.size() >= 3) {
        report.fit = fit_slope(fit_points);
        report.slope_fitted = true;
    } else {
        bool any_ok = false;
        for (const auto& row : report.rows)
            if (row.status == "ok") any_ok = true;
        report.status = any_ok ? "too_few_points" : "exact";
    }
    return report;
}

std::string report_to_csv(const RateReport& report) {
    std::string out = "n,m,samples_used,lambda_min,rmse,stderr,status\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.n) + "," + std::to_string(row.m) + "," +
               std::to_string(row.samples_used) + "," + format_double(row.lambda_min) + "," +
               format_double(row.rmse) + "," + format_double(row.stderr_) + "," + row.status +
               "\n";
    }
    return out;
}

Json report_to_json(const RateReport& report) {
    Json j;
    j["scheme"] = report.scheme;
    j["constants"] = {{"m_divisor", report.m_divisor},
                      {"c1", report.c1},
                      {"oversample_ii", report.oversample_ii},
                      {"c2", report.c2}};
    j["theory_slope"] = report.theory_slope;
    j["status"] = report.status;
    j["slope_fitted"] = report.slope_fitted;
    if (report.slope_fitted) {
        j["fitted_slope"] = report.fit.slope;
        j["intercept"] = report.fit.intercept;
        j["slope_ci"] = {report.fit.ci_lo, report.fit.ci_hi};
    }
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"n", row.n},
                        {"m", row.m},
                        {"samples_used", row.samples_used},
                        {"lambda_min", row.lambda_min},
                        {"rmse", row.rmse},
                        {"stderr", row.stderr_},
                        {"status", row.status}});
    }
    j["rows"] = std::move(rows);
    return j;
}

} // namespace gpcrec
