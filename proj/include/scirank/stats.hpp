#ifndef SCIRANK_STATS_HPP
#define SCIRANK_STATS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "scirank/error.hpp"

namespace scirank {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct CriterionVector {
    std::string label;
    VectorX<Scalar> values;
};

// Sample Pearson correlation. The 1/(n-1) factors cancel, so the population
// convention gives the same r.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar pearson(const Eigen::MatrixBase<DerivedX>& x,
                                  const Eigen::MatrixBase<DerivedY>& y) {
    using Scalar = typename DerivedX::Scalar;
    if (x.size() != y.size())
        throw Error(ErrorKind::LengthMismatch, "pearson: vectors differ in length (" +
                                                   std::to_string(x.size()) + " vs " +
                                                   std::to_string(y.size()) + ")");
    if (x.size() < 2) throw Error(ErrorKind::LengthMismatch, "pearson: need at least two values");

    const auto dx = (x.array() - x.mean()).matrix().eval();
    const auto dy = (y.array() - y.mean()).matrix().eval();
    const Scalar sxx = dx.squaredNorm();
    const Scalar syy = dy.squaredNorm();
    if (sxx == Scalar(0) || syy == Scalar(0))
        throw Error(ErrorKind::ConstantInput, "pearson: constant input");
    const Scalar r = dx.dot(dy) / std::sqrt(sxx * syy);
    return std::clamp(r, Scalar(-1), Scalar(1));
}

template <typename Scalar>
Scalar pearson(const CriterionVector<Scalar>& x, const CriterionVector<Scalar>& y) {
    return pearson(x.values, y.values);
}

/// Symmetric matrix of pairwise correlations with a unit diagonal.
template <typename Scalar>
MatrixX<Scalar> correlation_matrix(const std::vector<CriterionVector<Scalar>>& vectors) {
    const auto m = static_cast<Eigen::Index>(vectors.size());
    MatrixX<Scalar> r = MatrixX<Scalar>::Identity(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = a + 1; b < m; ++b) {
            r(a, b) = pearson(vectors[a], vectors[b]);
            r(b, a) = r(a, b);
        }
    // A constant vector must still fail even when it is the only one.
    if (m == 1) pearson(vectors[0], vectors[0]);
    return r;
}

/// Affine map of [min, max] of `values` onto [lo, hi].
template <typename Derived>
VectorX<typename Derived::Scalar> minmax_normalize(const Eigen::MatrixBase<Derived>& values,
                                                   typename Derived::Scalar lo,
                                                   typename Derived::Scalar hi) {
    using Scalar = typename Derived::Scalar;
    if (values.size() == 0) throw Error(ErrorKind::ConstantInput, "minmax_normalize: empty input");
    const Scalar vmin = values.minCoeff();
    const Scalar vmax = values.maxCoeff();
    if (!(vmax > vmin)) throw Error(ErrorKind::ConstantInput, "minmax_normalize: constant input");
    VectorX<Scalar> out = ((values.array() - vmin) * ((hi - lo) / (vmax - vmin)) + lo).matrix();
    // Pin the endpoints so spanning inputs map exactly.
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (values(i) == vmin) out(i) = lo;
        if (values(i) == vmax) out(i) = hi;
    }
    return out;
}

}  // namespace scirank

#endif  // SCIRANK_STATS_HPP
