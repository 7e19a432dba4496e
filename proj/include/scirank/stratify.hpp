#ifndef SCIRANK_STRATIFY_HPP
#define SCIRANK_STRATIFY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "scirank/error.hpp"
#include "scirank/stats.hpp"

namespace scirank {

/// N entities (rows) scored on M criteria (columns).
template <typename Scalar>
struct CriteriaMatrix {
    std::vector<std::string> row_ids;
    std::vector<std::string> criterion_names;
    MatrixX<Scalar> x;

    Eigen::Index rows() const { return x.rows(); }
    Eigen::Index cols() const { return x.cols(); }
};

template <typename Scalar>
void check_criteria(const CriteriaMatrix<Scalar>& m) {
    if (m.rows() < 1 || m.cols() < 1)
        throw Error(ErrorKind::DimensionMismatch, "criteria matrix must be at least 1x1");
    if (static_cast<Eigen::Index>(m.row_ids.size()) != m.rows() ||
        static_cast<Eigen::Index>(m.criterion_names.size()) != m.cols())
        throw Error(ErrorKind::DimensionMismatch, "criteria labels do not match matrix shape");
    if (!m.x.allFinite()) throw Error(ErrorKind::NonFinite, "criteria matrix has non-finite entries");
}

/// f = X w.
template <typename DerivedX, typename DerivedW>
VectorX<typename DerivedX::Scalar> combined_criterion(const Eigen::MatrixBase<DerivedX>& x,
                                                      const Eigen::MatrixBase<DerivedW>& w) {
    if (x.cols() != w.size())
        throw Error(ErrorKind::DimensionMismatch,
                    "weights have " + std::to_string(w.size()) + " entries for " +
                        std::to_string(x.cols()) + " criteria");
    return x * w;
}

// ---------------------------------------------------------------------------
// One-dimensional k-means
// ---------------------------------------------------------------------------

/// Labels are 0-based and ordered by ascending centre.
template <typename Scalar>
struct Clustering1D {
    std::vector<int> assignment;
    VectorX<Scalar> centres;
    Scalar objective = 0;
};

/// Within-cluster sum of squares of `values` under `assignment`, computed
/// directly around the cluster means.
template <typename Derived>
typename Derived::Scalar within_cluster_ss(const Eigen::MatrixBase<Derived>& values,
                                           std::span<const int> assignment, int k) {
    using Scalar = typename Derived::Scalar;
    VectorX<Scalar> sum = VectorX<Scalar>::Zero(k);
    Eigen::VectorXi count = Eigen::VectorXi::Zero(k);
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        sum(assignment[i]) += values(i);
        ++count(assignment[i]);
    }
    Scalar ss = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const int c = assignment[i];
        const Scalar d = values(i) - sum(c) / Scalar(count(c));
        ss += d * d;
    }
    return ss;
}

/// Globally optimal partition of the values into k groups minimising the
/// within-cluster sum of squares. Optimal groups are intervals of the sorted
/// values, so an O(k n^2) dynamic programme over sorted order is exact.
/// Ties are broken towards the earliest split point, which makes the result
/// deterministic. Throws Error(BadK) unless 1 <= k <= n.
template <typename Derived>
Clustering1D<typename Derived::Scalar> kmeans_1d(const Eigen::MatrixBase<Derived>& values, int k) {
    using Scalar = typename Derived::Scalar;
    const auto n = static_cast<int>(values.size());
    if (k < 1 || k > n)
        throw Error(ErrorKind::BadK, "k = " + std::to_string(k) + " must be in [1, " +
                                         std::to_string(n) + "]");
    if (!values.allFinite()) throw Error(ErrorKind::NonFinite, "kmeans_1d: non-finite value");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values(a) < values(b); });
    std::vector<Scalar> v(n);
    for (int i = 0; i < n; ++i) v[i] = values(order[i]);

    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    // cost[m][i]: best cost of the first i sorted values in m+1 groups.
    std::vector<std::vector<Scalar>> cost(k, std::vector<Scalar>(n + 1, inf));
    std::vector<std::vector<int>> split(k, std::vector<int>(n + 1, 0));

    // Range statistics are accumulated with Welford updates while the start
    // of the last group moves left, which avoids prefix-sum cancellation.
    for (int i = 1; i <= n; ++i) {
        Scalar mean = 0, m2 = 0;
        for (int j = i - 1; j >= 0; --j) {
            const Scalar x = v[j];
            const Scalar cnt = Scalar(i - j);
            const Scalar delta = x - mean;
            mean += delta / cnt;
            m2 += delta * (x - mean);
            const Scalar range_cost = std::max(m2, Scalar(0));  // cost of v[j..i)
            if (j == 0) {
                cost[0][i] = range_cost;
            }
            for (int m = 1; m < k; ++m) {
                if (j < m) break;
                const Scalar c = cost[m - 1][j] + range_cost;
                if (c <= cost[m][i]) {
                    cost[m][i] = c;
                    split[m][i] = j;
                }
            }
        }
    }

    Clustering1D<Scalar> out;
    out.assignment.assign(n, 0);
    int end = n;
    for (int m = k - 1; m >= 0; --m) {
        const int begin = m == 0 ? 0 : split[m][end];
        for (int p = begin; p < end; ++p) out.assignment[order[p]] = m;
        end = begin;
    }
    out.centres = VectorX<Scalar>::Zero(k);
    Eigen::VectorXi count = Eigen::VectorXi::Zero(k);
    for (int i = 0; i < n; ++i) {
        out.centres(out.assignment[i]) += values(i);
        ++count(out.assignment[i]);
    }
    for (int c = 0; c < k; ++c) out.centres(c) /= Scalar(count(c));
    out.objective = within_cluster_ss(values, out.assignment, k);
    return out;
}

// ---------------------------------------------------------------------------
// Weight step
// ---------------------------------------------------------------------------

/// Euclidean projection onto the probability simplex (sort-based).
template <typename Derived>
VectorX<typename Derived::Scalar> project_to_simplex(const Eigen::MatrixBase<Derived>& v) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index m = v.size();
    std::vector<Scalar> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    Scalar cumsum = 0, theta = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
        cumsum += u[j];
        const Scalar t = (cumsum - Scalar(1)) / Scalar(j + 1);
        if (u[j] - t > Scalar(0)) theta = t;
    }
    VectorX<Scalar> w = (v.array() - theta).max(Scalar(0)).matrix();
    const Scalar s = w.sum();
    return s > Scalar(0) ? VectorX<Scalar>(w / s) : VectorX<Scalar>::Constant(m, Scalar(1) / Scalar(m));
}

/// Objective of the stratification problem for fixed weights and partition,
/// with each centre at its stratum mean of the combined criterion.
template <typename DerivedX, typename DerivedW>
typename DerivedX::Scalar stratification_objective(const Eigen::MatrixBase<DerivedX>& x,
                                                   const Eigen::MatrixBase<DerivedW>& w,
                                                   std::span<const int> assignment, int k) {
    return within_cluster_ss(combined_criterion(x, w), assignment, k);
}

/// Scatter matrix Q = sum_k sum_{i in S_k} (x_i - mu_k)(x_i - mu_k)'.
/// Throws Error(EmptyStratum) if a label in [0, k) has no members.
template <typename Derived>
MatrixX<typename Derived::Scalar> within_strata_scatter(const Eigen::MatrixBase<Derived>& x,
                                                        std::span<const int> assignment, int k) {
    using Scalar = typename Derived::Scalar;
    if (static_cast<Eigen::Index>(assignment.size()) != x.rows())
        throw Error(ErrorKind::DimensionMismatch, "assignment length differs from row count");
    MatrixX<Scalar> mu = MatrixX<Scalar>::Zero(k, x.cols());
    Eigen::VectorXi count = Eigen::VectorXi::Zero(k);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const int c = assignment[i];
        if (c < 0 || c >= k) throw Error(ErrorKind::DimensionMismatch, "stratum label out of range");
        mu.row(c) += x.row(i);
        ++count(c);
    }
    for (int c = 0; c < k; ++c) {
        if (count(c) == 0)
            throw Error(ErrorKind::EmptyStratum, "stratum " + std::to_string(c + 1) + " is empty");
        mu.row(c) /= Scalar(count(c));
    }
    MatrixX<Scalar> centred(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) centred.row(i) = x.row(i) - mu.row(assignment[i]);
    return centred.transpose() * centred;
}

struct WeightSolverOptions {
    int max_iterations = 500;
    double relative_tolerance = 1e-10;
};

template <typename Scalar>
struct WeightFit {
    VectorX<Scalar> weights;
    Scalar objective = 0;
    int iterations = 0;
};

namespace detail {

// Exact minimiser of w'Qw on the affine hull of a support {j : w_j > 0},
// from the KKT system [2Q_SS 1; 1' 0][w; nu] = [0; 1]. Returns false if the
// solution leaves the simplex.
template <typename Scalar>
bool solve_on_support(const MatrixX<Scalar>& q, const std::vector<Eigen::Index>& support,
                      VectorX<Scalar>& w) {
    const auto s = static_cast<Eigen::Index>(support.size());
    MatrixX<Scalar> kkt = MatrixX<Scalar>::Zero(s + 1, s + 1);
    for (Eigen::Index a = 0; a < s; ++a) {
        for (Eigen::Index b = 0; b < s; ++b) kkt(a, b) = Scalar(2) * q(support[a], support[b]);
        kkt(a, s) = kkt(s, a) = Scalar(1);
    }
    VectorX<Scalar> rhs = VectorX<Scalar>::Zero(s + 1);
    rhs(s) = Scalar(1);
    const VectorX<Scalar> sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    if (!sol.allFinite()) return false;
    VectorX<Scalar> cand = VectorX<Scalar>::Zero(q.rows());
    for (Eigen::Index a = 0; a < s; ++a) {
        if (sol(a) < Scalar(0)) return false;
        cand(support[a]) = sol(a);
    }
    const Scalar total = cand.sum();
    if (!(total > Scalar(0))) return false;
    w = cand / total;
    return true;
}

}  // namespace detail

/// Minimises w'Qw over the simplex by projected gradient with Armijo
/// backtracking, then snaps to the exact minimiser on the detected support
/// when that is feasible and no worse. The result is never worse than the
/// warm start.
template <typename Scalar>
WeightFit<Scalar> minimize_on_simplex(const MatrixX<Scalar>& q, const VectorX<Scalar>& start,
                                      const WeightSolverOptions& opt = {}) {
    const Eigen::Index m = q.rows();
    auto value = [&](const VectorX<Scalar>& w) { return Scalar(w.dot(q * w)); };

    WeightFit<Scalar> fit;
    fit.weights = project_to_simplex(start);
    fit.objective = value(fit.weights);
    if (m == 1) return fit;

    const Scalar lipschitz = Scalar(2) * q.norm();
    if (!(lipschitz > Scalar(0))) return fit;

    VectorX<Scalar> w = fit.weights;
    Scalar f = fit.objective;
    Scalar step = Scalar(1) / lipschitz;
    for (int it = 0; it < opt.max_iterations; ++it) {
        fit.iterations = it + 1;
        const VectorX<Scalar> grad = Scalar(2) * (q * w);
        VectorX<Scalar> next;
        Scalar f_next = f;
        Scalar trial = step * Scalar(4);
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            next = project_to_simplex(w - trial * grad);
            const VectorX<Scalar> d = next - w;
            f_next = value(next);
            if (f_next <= f + grad.dot(d) + d.squaredNorm() / (Scalar(2) * trial)) {
                accepted = true;
                break;
            }
            trial /= Scalar(2);
        }
        if (!accepted || !(f_next < f)) break;
        step = trial;
        const Scalar improvement = f - f_next;
        w = next;
        f = f_next;
        if (improvement <= Scalar(opt.relative_tolerance) * std::max(f, std::numeric_limits<Scalar>::min()))
            break;
    }

    // Active-set polish: grow the support while some excluded coordinate has
    // a gradient below the multiplier.
    std::vector<Eigen::Index> support;
    const Scalar floor = Scalar(1e-10);
    for (Eigen::Index j = 0; j < m; ++j)
        if (w(j) > floor) support.push_back(j);
    for (Eigen::Index round = 0; round < m && !support.empty(); ++round) {
        VectorX<Scalar> cand;
        if (!detail::solve_on_support(q, support, cand)) break;
        const Scalar f_cand = value(cand);
        if (f_cand <= f) {
            w = cand;
            f = f_cand;
        }
        const VectorX<Scalar> grad = Scalar(2) * (q * cand);
        const Scalar nu = grad(support.front());
        Eigen::Index worst = -1;
        Scalar worst_gap = -Scalar(1e-12) * std::max(Scalar(1), std::abs(nu));
        for (Eigen::Index j = 0; j < m; ++j) {
            if (std::find(support.begin(), support.end(), j) != support.end()) continue;
            if (grad(j) - nu < worst_gap) {
                worst_gap = grad(j) - nu;
                worst = j;
            }
        }
        if (worst < 0) break;
        support.push_back(worst);
        std::sort(support.begin(), support.end());
    }

    if (f <= fit.objective) {
        fit.weights = w;
        fit.objective = f;
    }
    return fit;
}

/// Best simplex weights for a fixed partition: minimises the within-strata
/// scatter of the combined criterion. `objective` is the stratification
/// objective recomputed from the returned weights.
template <typename Derived>
WeightFit<typename Derived::Scalar> solve_weights(const Eigen::MatrixBase<Derived>& x,
                                                  std::span<const int> assignment, int k,
                                                  const VectorX<typename Derived::Scalar>& start,
                                                  const WeightSolverOptions& opt = {}) {
    using Scalar = typename Derived::Scalar;
    if (start.size() != x.cols())
        throw Error(ErrorKind::DimensionMismatch, "warm start has wrong length");
    const MatrixX<Scalar> q = within_strata_scatter(x, assignment, k);
    WeightFit<Scalar> fit = minimize_on_simplex(q, VectorX<Scalar>(start), opt);
    const VectorX<Scalar> start_w = project_to_simplex(start);
    const Scalar start_obj = stratification_objective(x, start_w, assignment, k);
    fit.objective = stratification_objective(x, fit.weights, assignment, k);
    if (start_obj < fit.objective) {
        fit.weights = start_w;
        fit.objective = start_obj;
    }
    return fit;
}

template <typename Derived>
WeightFit<typename Derived::Scalar> solve_weights(const Eigen::MatrixBase<Derived>& x,
                                                  std::span<const int> assignment, int k,
                                                  const WeightSolverOptions& opt = {}) {
    using Scalar = typename Derived::Scalar;
    const VectorX<Scalar> uniform = VectorX<Scalar>::Constant(x.cols(), Scalar(1) / Scalar(x.cols()));
    return solve_weights(x, assignment, k, uniform, opt);
}

// ---------------------------------------------------------------------------
// Alternating minimisation
// ---------------------------------------------------------------------------

struct StratifyOptions {
    int k = 3;
    int restarts = 20;
    std::uint64_t seed = 0;
    int max_iterations = 100;
    double tolerance = 1e-9;
    bool normalize = false;  // rescale every column onto [0, 100] first
    WeightSolverOptions weight_solver{};
};

template <typename Scalar>
struct StratificationSolution {
    VectorX<Scalar> weights;
    VectorX<Scalar> centres;      // strictly ascending
    std::vector<int> assignment;  // 0-based, indexes `centres`
    Scalar objective = 0;
    int iterations = 0;           // of the winning restart
    int best_restart = 0;
    int restarts_used = 0;
    std::vector<int> iterations_per_restart;
    std::vector<std::vector<Scalar>> traces;  // objective after every half step, per restart
};

namespace detail {

// Uniform weights, then each simplex corner, then flat-Dirichlet draws.
template <typename Scalar>
std::vector<VectorX<Scalar>> initial_weights(Eigen::Index m, int count, std::uint64_t seed) {
    std::vector<VectorX<Scalar>> out;
    out.push_back(VectorX<Scalar>::Constant(m, Scalar(1) / Scalar(m)));
    for (Eigen::Index j = 0; j < m && static_cast<int>(out.size()) < count; ++j)
        out.push_back(VectorX<Scalar>::Unit(m, j));
    std::mt19937_64 rng(seed);
    while (static_cast<int>(out.size()) < count) {
        VectorX<Scalar> w(m);
        for (Eigen::Index j = 0; j < m; ++j) {
            // 53-bit uniform in [0, 1), independent of the library's distributions.
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            w(j) = Scalar(-std::log1p(-u));
        }
        const Scalar s = w.sum();
        out.push_back(s > Scalar(0) ? VectorX<Scalar>(w / s) : VectorX<Scalar>(out.front()));
    }
    out.resize(static_cast<std::size_t>(count));
    return out;
}

template <typename Scalar>
bool lexicographically_less(const VectorX<Scalar>& a, const VectorX<Scalar>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

/// Keeps the assignment's labels aligned with strictly ascending centres by
/// merging strata whose centres coincide (only possible for tied values).
template <typename Derived>
void merge_tied_strata(const Eigen::MatrixBase<Derived>& f, std::vector<int>& assignment,
                       VectorX<typename Derived::Scalar>& centres) {
    using Scalar = typename Derived::Scalar;
    const auto k = static_cast<int>(centres.size());
    std::vector<int> relabel(k, 0);
    std::vector<Scalar> kept;
    for (int c = 0; c < k; ++c) {
        const Scalar scale = std::max(Scalar(1), std::abs(centres(c)));
        if (!kept.empty() && std::abs(centres(c) - kept.back()) <= Scalar(1e-12) * scale) {
            relabel[c] = static_cast<int>(kept.size()) - 1;
        } else {
            kept.push_back(centres(c));
            relabel[c] = static_cast<int>(kept.size()) - 1;
        }
    }
    for (int& a : assignment) a = relabel[a];
    const auto k2 = static_cast<int>(kept.size());
    VectorX<Scalar> sum = VectorX<Scalar>::Zero(k2);
    Eigen::VectorXi count = Eigen::VectorXi::Zero(k2);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        sum(assignment[i]) += f(i);
        ++count(assignment[i]);
    }
    centres.resize(k2);
    for (int c = 0; c < k2; ++c) centres(c) = sum(c) / Scalar(count(c));
}

/// Least-squares linear stratification: simplex weights w, centres c and a
/// partition S minimising sum_k sum_{i in S_k} (x_i . w - c_k)^2, found by
/// alternating the exact 1-D k-means step with the weight step from several
/// starts. Deterministic for a given seed.
template <typename Scalar>
StratificationSolution<Scalar> ls_stratify(const CriteriaMatrix<Scalar>& m,
                                           const StratifyOptions& opt = {}) {
    check_criteria(m);
    const auto n = static_cast<int>(m.rows());
    if (opt.k < 1 || opt.k > n)
        throw Error(ErrorKind::BadK, "k = " + std::to_string(opt.k) + " must be in [1, " +
                                         std::to_string(n) + "]");
    if (opt.restarts < 1) throw Error(ErrorKind::BadK, "restarts must be at least 1");

    MatrixX<Scalar> x = m.x;
    if (opt.normalize)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            x.col(j) = minmax_normalize(x.col(j), Scalar(0), Scalar(100));

    StratificationSolution<Scalar> best;
    bool have_best = false;
    const auto starts = detail::initial_weights<Scalar>(x.cols(), opt.restarts, opt.seed);

    for (int r = 0; r < static_cast<int>(starts.size()); ++r) {
        std::vector<Scalar> trace;
        VectorX<Scalar> w = starts[r];
        auto km = kmeans_1d(combined_criterion(x, w), opt.k);
        std::vector<int> s = km.assignment;
        Scalar obj = km.objective;
        trace.push_back(obj);
        int it = 0;
        while (it < opt.max_iterations) {
            ++it;
            const Scalar before = obj;
            auto fit = solve_weights(x, s, opt.k, w, opt.weight_solver);
            if (fit.objective <= obj) {
                w = fit.weights;
                obj = fit.objective;
            }
            trace.push_back(obj);

            auto next = kmeans_1d(combined_criterion(x, w), opt.k);
            const bool same = next.assignment == s;
            if (!same && next.objective < obj) {
                s = next.assignment;
                obj = next.objective;
            }
            trace.push_back(obj);
            if (same || before - obj < Scalar(opt.tolerance)) break;
        }

        const bool better =
            !have_best || obj < best.objective - Scalar(1e-12) ||
            (std::abs(obj - best.objective) <= Scalar(1e-12) &&
             detail::lexicographically_less(w, best.weights));
        if (better) {
            best.weights = w;
            best.assignment = s;
            best.objective = obj;
            best.iterations = it;
            best.best_restart = r;
            have_best = true;
        }
        best.iterations_per_restart.push_back(it);
        best.traces.push_back(std::move(trace));
    }
    best.restarts_used = static_cast<int>(starts.size());

    const VectorX<Scalar> f = combined_criterion(x, best.weights);
    best.centres = VectorX<Scalar>::Zero(opt.k);
    Eigen::VectorXi count = Eigen::VectorXi::Zero(opt.k);
    for (int i = 0; i < n; ++i) {
        best.centres(best.assignment[i]) += f(i);
        ++count(best.assignment[i]);
    }
    for (int c = 0; c < opt.k; ++c) best.centres(c) /= Scalar(count(c));
    merge_tied_strata(f, best.assignment, best.centres);
    best.objective = within_cluster_ss(f, best.assignment, static_cast<int>(best.centres.size()));
    return best;
}

// ---------------------------------------------------------------------------
// PCA comparator
// ---------------------------------------------------------------------------

template <typename Scalar>
struct PcaAggregate {
    VectorX<Scalar> weights;  // sums to 1
    Scalar eigenvalue = 0;    // leading eigenvalue of X'X
    Scalar residual_share = 0;
    VectorX<Scalar> scores;   // z = X * weights
    int iterations = 0;
};

/// Aggregation along the leading eigenvector of the uncentred Gram matrix
/// X'X, found by power iteration. The residual share is the part of the
/// total scatter trace(X'X) the first component leaves unexplained.
template <typename Scalar>
PcaAggregate<Scalar> pca_aggregate(const CriteriaMatrix<Scalar>& m, double tolerance = 1e-12,
                                   int max_iterations = 100000) {
    check_criteria(m);
    if ((m.x.array() < Scalar(0)).any())
        throw Error(ErrorKind::NegativeEntry, "pca_aggregate expects nonnegative scores");
    if ((m.x.array() == Scalar(0)).all()) throw Error(ErrorKind::ZeroMatrix, "criteria matrix is zero");

    const MatrixX<Scalar> gram = m.x.transpose() * m.x;
    const Eigen::Index dim = gram.rows();
    VectorX<Scalar> v = VectorX<Scalar>::Constant(dim, Scalar(1) / std::sqrt(Scalar(dim)));

    PcaAggregate<Scalar> out;
    for (int it = 0; it < max_iterations; ++it) {
        out.iterations = it + 1;
        VectorX<Scalar> next = gram * v;
        const Scalar norm = next.norm();
        if (!(norm > Scalar(0))) break;
        next /= norm;
        const Scalar change = (next - v).norm();
        v = next;
        if (change < Scalar(tolerance)) break;
    }
    if (v.sum() < Scalar(0)) v = -v;
    out.eigenvalue = v.dot(gram * v);
    out.weights = v / v.sum();
    out.residual_share = std::clamp(Scalar(1) - out.eigenvalue / gram.trace(), Scalar(0), Scalar(1));
    out.scores = m.x * out.weights;
    return out;
}

}  // namespace scirank

#endif  // SCIRANK_STRATIFY_HPP
