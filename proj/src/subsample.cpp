#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "gpcrec/design.hpp"
#include "gpcrec/errors.hpp"
#include "gpcrec/sampling.hpp"

namespace gpcrec {

namespace {

// largest/smallest eigenvalue of an SPD-resolvent via power iteration
double power_lambda_max(const Eigen::MatrixXd& M, int iters = 48) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(M.rows()).normalized();
    double lam = 0.0;
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXd w = M.selfadjointView<Eigen::Lower>() * v;
        lam = w.norm();
        if (lam <= 0.0) return 0.0;
        v = w / lam;
    }
    return lam;
}

struct Barriers {
    double lower;      // l' < lambda_min(A)
    double upper;      // u' > lambda_max(A)
    Eigen::MatrixXd inv_lower; // (A - l'I)^{-1}
    Eigen::MatrixXd inv_upper; // (u'I - A)^{-1}
};

void refresh_barriers(const Eigen::MatrixXd& A, double gap_low, double gap_high,
                      Barriers& bar) {
    const Eigen::Index m = A.rows();
    double lam_min = 0.0, lam_max = 0.0;
    if (bar.inv_lower.size() == 0) {
        // cold start: A may be zero
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
        lam_min = eig.eigenvalues().minCoeff();
        lam_max = eig.eigenvalues().maxCoeff();
    } else {
        lam_min = bar.lower + 1.0 / power_lambda_max(bar.inv_lower);
        lam_max = bar.upper - 1.0 / power_lambda_max(bar.inv_upper);
    }
    bar.lower = lam_min - gap_low;
    bar.upper = lam_max + gap_high;
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
    bar.inv_lower = (A - bar.lower * I).llt().solve(I);
    bar.inv_upper = (bar.upper * I - A).llt().solve(I);
}

} // namespace

SamplePlan subsample(const SamplePlan& plan, const PolynomialFamily& family,
                     const IndexSet& basis, std::size_t target,
                     const SubsampleOptions& opts) {
    if (plan.scheme != SampleScheme::IidForSubsampling)
        throw DomainError("subsample: plan must be drawn with the pre-subsampling scheme");
    const std::size_t N = plan.size();
    const std::size_t m = basis.size();
    if (m == 0) throw DomainError("subsample: empty basis");
    if (target < static_cast<std::size_t>(std::ceil(opts.c2_floor * static_cast<double>(m))))
        throw TargetTooSmall("subsample: target below c2_floor * |basis|");

    const Eigen::MatrixXd Phi = tensor_design(family, basis, plan.points);

    // full-plan normalized Gram (1/N) sum omega_i phi phi^T
    Eigen::MatrixXd scaled = Phi;
    for (Eigen::Index i = 0; i < scaled.rows(); ++i)
        scaled.row(i) *= std::sqrt(plan.weights(i) / static_cast<double>(N));
    Eigen::MatrixXd G_full = Eigen::MatrixXd::Zero(m, m);
    G_full.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G_full);
        const double lam_min = eig.eigenvalues().minCoeff();
        if (lam_min < opts.gram_min_lambda - 1e-9)
            throw IllConditionedInput("subsample: full-plan Gram lambda_min = " +
                                      std::to_string(lam_min) + " < " +
                                      std::to_string(opts.gram_min_lambda));
    }

    auto finish = [&](std::vector<std::size_t> chosen) {
        std::sort(chosen.begin(), chosen.end());
        const double factor = static_cast<double>(target) / static_cast<double>(N);
        SamplePlan out;
        out.points.resize(static_cast<Eigen::Index>(chosen.size()), plan.points.cols());
        out.weights.resize(static_cast<Eigen::Index>(chosen.size()));
        for (std::size_t r = 0; r < chosen.size(); ++r) {
            out.points.row(static_cast<Eigen::Index>(r)) =
                plan.points.row(static_cast<Eigen::Index>(chosen[r]));
            out.weights(static_cast<Eigen::Index>(r)) =
                factor * plan.weights(static_cast<Eigen::Index>(chosen[r]));
        }
        out.scheme = SampleScheme::SubsampledSchemeII;
        out.seed = plan.seed;
        out.m = plan.m;
        out.J = plan.J;
        out.alpha = plan.alpha * factor;
        return out;
    };

    if (N <= target) {
        // nothing to remove
        std::vector<std::size_t> all(N);
        for (std::size_t i = 0; i < N; ++i) all[i] = i;
        return finish(std::move(all));
    }

    // candidate rows c_i = sqrt(omega_i / target) phi_i; the selected
    // unweighted sum of c c^T is exactly the normalized sub-plan Gram
    Eigen::MatrixXd C = Phi;
    double max_norm2 = 0.0;
    for (Eigen::Index i = 0; i < C.rows(); ++i) {
        C.row(i) *= std::sqrt(plan.weights(i) / static_cast<double>(target));
        max_norm2 = std::max(max_norm2, C.row(i).squaredNorm());
    }

    const double gap_low = std::max(0.25, 0.125 * static_cast<double>(m) /
                                              static_cast<double>(target) * 2.0);
    const double gap_high = std::max(2.0, 1.5 * max_norm2);
    int epoch = opts.epoch;
    if (epoch <= 0) epoch = std::max<int>(1, static_cast<int>(target) / 12);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Barriers bar;
    refresh_barriers(A, gap_low, gap_high, bar);

    // stale-score max-heap; exact rescoring on pop
    struct Entry {
        double score;
        std::size_t idx;
    };
    auto cmp = [](const Entry& a, const Entry& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.idx > b.idx;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);

    // barrier-potential ratio score: potential gain at the lower barrier
    // minus potential cost at the upper one under the rank-one update
    auto exact_score = [&](std::size_t i, Eigen::VectorXd& ml_c, Eigen::VectorXd& mu_c) {
        const Eigen::VectorXd c = C.row(static_cast<Eigen::Index>(i)).transpose();
        ml_c.noalias() = bar.inv_lower.selfadjointView<Eigen::Lower>() * c;
        mu_c.noalias() = bar.inv_upper.selfadjointView<Eigen::Lower>() * c;
        const double bl = c.dot(ml_c), al = ml_c.squaredNorm();
        const double bu = c.dot(mu_c), au = mu_c.squaredNorm();
        const double gain = al / (1.0 + bl);
        if (bu >= 1.0) return -std::numeric_limits<double>::infinity();
        const double cost = au / (1.0 - bu);
        return gain - cost;
    };

    std::vector<char> taken(N, 0);
    std::vector<std::size_t> chosen;
    chosen.reserve(target);

    {
        // initial scoring of every candidate in two symmetric products
        Eigen::MatrixXd Pl = C * bar.inv_lower.selfadjointView<Eigen::Lower>();
        Eigen::MatrixXd Pu = C * bar.inv_upper.selfadjointView<Eigen::Lower>();
        for (std::size_t i = 0; i < N; ++i) {
            const Eigen::Index ii = static_cast<Eigen::Index>(i);
            const double bl = C.row(ii).dot(Pl.row(ii)), al = Pl.row(ii).squaredNorm();
            const double bu = C.row(ii).dot(Pu.row(ii)), au = Pu.row(ii).squaredNorm();
            double score = al / (1.0 + bl);
            score -= (bu >= 1.0) ? std::numeric_limits<double>::infinity()
                                 : au / (1.0 - bu);
            heap.push({score, i});
        }
    }

    Eigen::VectorXd ml_c(static_cast<Eigen::Index>(m)), mu_c(static_cast<Eigen::Index>(m));
    Eigen::VectorXd best_ml, best_mu;
    while (chosen.size() < target) {
        // lazy-greedy selection with bounded exact re-evaluations
        double best_score = -std::numeric_limits<double>::infinity();
        std::size_t best_idx = N;
        bool have_best = false;
        for (int pops = 0; pops < opts.lazy_pops && !heap.empty(); ++pops) {
            Entry top = heap.top();
            heap.pop();
            if (taken[top.idx]) {
                --pops;
                continue;
            }
            const double fresh = exact_score(top.idx, ml_c, mu_c);
            if (std::isinf(fresh) && fresh < 0) continue; // would cross the upper barrier
            if (!have_best || fresh > best_score) {
                best_score = fresh;
                best_idx = top.idx;
                best_ml = ml_c;
                best_mu = mu_c;
                have_best = true;
            }
            if (!heap.empty() && fresh >= heap.top().score) break; // confirmed top
            heap.push({fresh, top.idx});
        }
        if (!have_best)
            throw IllConditionedInput("subsample: no admissible candidate left");

        taken[best_idx] = 1;
        chosen.push_back(best_idx);
        const Eigen::VectorXd c = C.row(static_cast<Eigen::Index>(best_idx)).transpose();
        const double bl = c.dot(best_ml), bu = c.dot(best_mu);
        A.selfadjointView<Eigen::Lower>().rankUpdate(c);
        bar.inv_lower.selfadjointView<Eigen::Lower>().rankUpdate(best_ml, -1.0 / (1.0 + bl));
        bar.inv_upper.selfadjointView<Eigen::Lower>().rankUpdate(best_mu, 1.0 / (1.0 - bu));

        if (chosen.size() % static_cast<std::size_t>(epoch) == 0 && chosen.size() < target)
            refresh_barriers(A, gap_low, gap_high, bar);
    }

    // certify the selected spectrum
    {
        Eigen::MatrixXd A_sym = A.selfadjointView<Eigen::Lower>();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A_sym);
        const double lam_min = eig.eigenvalues().minCoeff();
        const double lam_max = eig.eigenvalues().maxCoeff();
        if (lam_min < opts.gamma_low || lam_max > opts.gamma_high)
            throw IllConditionedInput(
                "subsample: selected Gram spectrum [" + std::to_string(lam_min) + ", " +
                std::to_string(lam_max) + "] escaped [gamma_low, gamma_high]");
    }
    return finish(std::move(chosen));
}

} // namespace gpcrec
