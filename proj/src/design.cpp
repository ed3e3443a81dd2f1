#include "gpcrec/design.hpp"

#include <vector>

#include "gpcrec/errors.hpp"

namespace gpcrec {

Eigen::MatrixXd tensor_design(const PolynomialFamily& family, const IndexSet& basis,
                              const Eigen::MatrixXd& points, int max_degree) {
    const Eigen::Index n = points.rows();
    const Eigen::Index m = static_cast<Eigen::Index>(basis.size());
    const int dims = basis.max_dim();
    if (dims > points.cols())
        throw DimensionMismatch("tensor_design: points have fewer dimensions than the basis");

    // highest degree needed per dimension
    std::vector<int> max_deg(static_cast<std::size_t>(dims), 0);
    for (const auto& s : basis.indices)
        for (const auto& [dim, deg] : s.entries())
            max_deg[static_cast<std::size_t>(dim) - 1] =
                std::max(max_deg[static_cast<std::size_t>(dim) - 1], static_cast<int>(deg));
    for (int d : max_deg)
        if (d > max_degree) throw DegreeTooLarge("tensor_design: basis degree exceeds maximum");

    Eigen::MatrixXd L(n, m);
    std::vector<std::vector<double>> table(static_cast<std::size_t>(dims));
    for (std::size_t j = 0; j < table.size(); ++j) table[j].resize(max_deg[j] + 1);

    for (Eigen::Index i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < table.size(); ++j)
            eval_univariate_all(family, max_deg[j], points(i, static_cast<Eigen::Index>(j)),
                                table[j].data());
        for (Eigen::Index c = 0; c < m; ++c) {
            double prod = 1.0;
            for (const auto& [dim, deg] : basis.indices[static_cast<std::size_t>(c)].entries())
                prod *= table[static_cast<std::size_t>(dim) - 1][static_cast<std::size_t>(deg)];
            L(i, c) = prod;
        }
    }
    return L;
}

} // namespace gpcrec
