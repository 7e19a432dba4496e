#ifndef SCIRANK_CA_HPP
#define SCIRANK_CA_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "scirank/error.hpp"
#include "scirank/stats.hpp"

namespace scirank {

/// Supplementary rows are profiles over the active columns; supplementary
/// columns are profiles over the active rows. Neither enters the fit.
template <typename Scalar>
struct ContingencyTable {
    std::vector<std::string> row_ids;
    std::vector<std::string> col_ids;
    MatrixX<Scalar> counts;

    std::vector<std::string> supplementary_row_ids;
    MatrixX<Scalar> supplementary_rows;  // one row per id, counts.cols() wide
    std::vector<std::string> supplementary_col_ids;
    MatrixX<Scalar> supplementary_cols;  // one column per id, counts.rows() tall
};

/// Coordinates are principal (symmetric map); axis k has inertia
/// singular_values(k)^2.
template <typename Scalar>
struct CaModel {
    VectorX<Scalar> row_masses;
    VectorX<Scalar> col_masses;
    VectorX<Scalar> singular_values;
    MatrixX<Scalar> row_standard;  // R x axes
    MatrixX<Scalar> col_standard;  // C x axes
    MatrixX<Scalar> row_coords;
    MatrixX<Scalar> col_coords;
    VectorX<Scalar> inertia_shares;
    Scalar total_inertia = 0;

    Eigen::Index axes() const { return singular_values.size(); }
};

enum class Side { Row, Column };

/// Axes whose singular value does not exceed this are treated as noise.
template <typename Scalar>
constexpr Scalar kAxisFloor = Scalar(1e-12);

template <typename Scalar>
void check_table(const ContingencyTable<Scalar>& t) {
    const auto& n = t.counts;
    if (n.rows() == 0 || n.cols() == 0) throw Error(ErrorKind::EmptyTable, "contingency table is empty");
    if (static_cast<Eigen::Index>(t.row_ids.size()) != n.rows() ||
        static_cast<Eigen::Index>(t.col_ids.size()) != n.cols())
        throw Error(ErrorKind::DimensionMismatch, "contingency labels do not match table shape");
    if (!n.allFinite()) throw Error(ErrorKind::NonFinite, "contingency table has non-finite entries");
    if ((n.array() < Scalar(0)).any()) throw Error(ErrorKind::NegativeEntry, "contingency counts must be nonnegative");
    for (Eigen::Index i = 0; i < n.rows(); ++i)
        if (!(n.row(i).sum() > Scalar(0)))
            throw Error(ErrorKind::ZeroMarginal, "row '" + t.row_ids[i] + "' has zero total");
    for (Eigen::Index j = 0; j < n.cols(); ++j)
        if (!(n.col(j).sum() > Scalar(0)))
            throw Error(ErrorKind::ZeroMarginal, "column '" + t.col_ids[j] + "' has zero total");
}

/// Fits correspondence analysis to the active part of the table via the SVD
/// of the standardised residuals (p_ij - r_i c_j) / sqrt(r_i c_j). Each axis
/// is oriented so that its largest-magnitude row coordinate is positive.
template <typename Scalar>
CaModel<Scalar> ca_fit(const ContingencyTable<Scalar>& t) {
    check_table(t);
    const MatrixX<Scalar> p = t.counts / t.counts.sum();
    CaModel<Scalar> model;
    model.row_masses = p.rowwise().sum();
    model.col_masses = p.colwise().sum().transpose();

    const VectorX<Scalar> rs = model.row_masses.array().sqrt().inverse().matrix();
    const VectorX<Scalar> cs = model.col_masses.array().sqrt().inverse().matrix();
    const MatrixX<Scalar> resid = rs.asDiagonal() *
                                  (p - model.row_masses * model.col_masses.transpose()) *
                                  cs.asDiagonal();

    Eigen::JacobiSVD<MatrixX<Scalar>> svd(resid, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorX<Scalar>& sv = svd.singularValues();
    Eigen::Index axes = 0;
    while (axes < sv.size() && sv(axes) > kAxisFloor<Scalar> * std::max(Scalar(1), sv(0))) ++axes;

    MatrixX<Scalar> u = svd.matrixU().leftCols(axes);
    MatrixX<Scalar> v = svd.matrixV().leftCols(axes);
    model.singular_values = sv.head(axes);
    model.row_standard = rs.asDiagonal() * u;
    model.col_standard = cs.asDiagonal() * v;

    for (Eigen::Index k = 0; k < axes; ++k) {
        Eigen::Index arg = 0;
        model.row_standard.col(k).cwiseAbs().maxCoeff(&arg);
        if (model.row_standard(arg, k) < Scalar(0)) {
            model.row_standard.col(k) *= Scalar(-1);
            model.col_standard.col(k) *= Scalar(-1);
        }
    }
    model.row_coords = model.row_standard * model.singular_values.asDiagonal();
    model.col_coords = model.col_standard * model.singular_values.asDiagonal();

    const VectorX<Scalar> inertia = model.singular_values.array().square().matrix();
    model.total_inertia = inertia.sum();
    model.inertia_shares = model.total_inertia > Scalar(0) ? VectorX<Scalar>(inertia / model.total_inertia)
                                                           : VectorX<Scalar>(VectorX<Scalar>::Zero(axes));
    return model;
}

/// Principal coordinates of a supplementary profile via the transition
/// formula: the normalised profile averages the opposite side's standard
/// coordinates. A row profile has one entry per active column.
template <typename Scalar, typename Derived>
VectorX<Scalar> project_supplementary(const CaModel<Scalar>& model, const Eigen::MatrixBase<Derived>& profile,
                                      Side side) {
    const MatrixX<Scalar>& opposite = side == Side::Row ? model.col_standard : model.row_standard;
    if (profile.size() != opposite.rows())
        throw Error(ErrorKind::DimensionMismatch,
                    "supplementary profile has " + std::to_string(profile.size()) + " entries, expected " +
                        std::to_string(opposite.rows()));
    if (!profile.allFinite() || (profile.array() < Scalar(0)).any())
        throw Error(ErrorKind::NegativeEntry, "supplementary profile must be finite and nonnegative");
    const Scalar total = profile.sum();
    if (!(total > Scalar(0))) throw Error(ErrorKind::ZeroProfile, "supplementary profile sums to zero");
    return (opposite.transpose() * (profile.template cast<Scalar>() / total)).eval();
}

/// Share of total inertia carried by two distinct axes (0-based).
template <typename Scalar>
Scalar plane_inertia(const CaModel<Scalar>& model, Eigen::Index a, Eigen::Index b) {
    const Eigen::Index n = model.inertia_shares.size();
    if (a == b || a < 0 || b < 0 || a >= n || b >= n)
        throw Error(ErrorKind::BadAxis, "axes " + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                                            " invalid for a model with " + std::to_string(n) + " axes");
    return model.inertia_shares(a) + model.inertia_shares(b);
}

}  // namespace scirank

#endif  // SCIRANK_CA_HPP
