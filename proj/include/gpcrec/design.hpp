#ifndef GPCREC_DESIGN_HPP
#define GPCREC_DESIGN_HPP

#include <Eigen/Core>

#include "gpcrec/basis.hpp"
#include "gpcrec/index_set.hpp"

namespace gpcrec {

/// Dense matrix of tensor-basis values: entry (i, s) = phi_s(y_i).  Rows are
/// the rows of `points`; per-point univariate values are computed once per
/// dimension and reused across basis entries.
Eigen::MatrixXd tensor_design(const PolynomialFamily& family, const IndexSet& basis,
                              const Eigen::MatrixXd& points,
                              int max_degree = kDefaultMaxEvalDegree);

} // namespace gpcrec

#endif
