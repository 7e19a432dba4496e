#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "scirank/stats.hpp"

using namespace scirank;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd random_vector(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g(3, 2);
    VectorXd v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

ErrorKind error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("pearson exact cases") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        const VectorXd x = random_vector(rng, 2 + static_cast<int>(rng() % 40));
        CHECK(pearson(x, x) == 1.0);
        CHECK(pearson(x, VectorXd(-x)) == -1.0);
    }
}

TEST_CASE("pearson on the two-criterion example") {
    const auto tc = fixtures::two_criteria();
    const std::vector<double> x(tc.x.col(0).begin(), tc.x.col(0).end());
    const std::vector<double> y(tc.x.col(1).begin(), tc.x.col(1).end());
    const double r = pearson(tc.x.col(0), tc.x.col(1));
    CHECK(std::abs(r - oracle::pearson_from_sums(x, y)) < 1e-12);
    CHECK(std::abs(r - (-53.5 / std::sqrt(231.0 * 71.75))) < 1e-12);
}

TEST_CASE("pearson properties") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.5, 4);
    for (int t = 0; t < 200; ++t) {
        const int n = 3 + static_cast<int>(rng() % 30);
        const VectorXd x = random_vector(rng, n), y = random_vector(rng, n);
        const double r = pearson(x, y);
        CHECK(r >= -1);
        CHECK(r <= 1);
        CHECK(pearson(y, x) == doctest::Approx(r).epsilon(1e-14));
        std::vector<double> xs(x.begin(), x.end()), ys(y.begin(), y.end());
        CHECK(std::abs(r - oracle::pearson_from_sums(xs, ys)) < 1e-12);

        const double a = u(rng), b = u(rng) * 10 - 20;
        const VectorXd z = (a * x.array() + b).matrix();
        CHECK(std::abs(pearson(z, y) - r) < 1e-12);
        CHECK(std::abs(pearson(VectorXd(-z), y) + r) < 1e-12);
    }
}

TEST_CASE("pearson errors") {
    const VectorXd a = VectorXd::LinSpaced(5, 0, 4);
    CHECK(error_of([&] { pearson(a, VectorXd(VectorXd::Ones(4))); }) == ErrorKind::LengthMismatch);
    CHECK(error_of([&] { pearson(a, VectorXd(VectorXd::Ones(5))); }) == ErrorKind::ConstantInput);
    CHECK(error_of([&] { pearson(VectorXd::Ones(1), VectorXd::Ones(1)); }) == ErrorKind::LengthMismatch);
}

TEST_CASE("correlation matrix") {
    std::mt19937_64 rng(3);
    SUBCASE("independent draws at N = 1000") {
        std::vector<CriterionVector<double>> v;
        for (int j = 0; j < 4; ++j) v.push_back({"c" + std::to_string(j), random_vector(rng, 1000)});
        const MatrixXd r = correlation_matrix(v);
        for (int a = 0; a < 4; ++a) {
            CHECK(r(a, a) == 1.0);
            for (int b = 0; b < 4; ++b) {
                CHECK(r(a, b) == r(b, a));
                if (a != b) CHECK(std::abs(r(a, b)) < 0.2);
            }
        }
    }
    SUBCASE("positive semidefinite") {
        for (int t = 0; t < 50; ++t) {
            const int m = 2 + static_cast<int>(rng() % 5);
            const int n = 3 + static_cast<int>(rng() % 10);
            std::vector<CriterionVector<double>> v;
            for (int j = 0; j < m; ++j) v.push_back({"c", random_vector(rng, n)});
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(correlation_matrix(v));
            CHECK(es.eigenvalues().minCoeff() > -1e-10);
        }
    }
    SUBCASE("constant criterion") {
        std::vector<CriterionVector<double>> v{{"a", VectorXd::Ones(5)}};
        CHECK(error_of([&] { correlation_matrix(v); }) == ErrorKind::ConstantInput);
    }
}

TEST_CASE("minmax_normalize") {
    const VectorXd v = (VectorXd(4) << 3, 7, 5, 11).finished();
    const VectorXd out = minmax_normalize(v, 0.0, 100.0);
    CHECK(out(0) == 0.0);
    CHECK(out(3) == 100.0);
    CHECK(out(1) == doctest::Approx(50.0));
    CHECK(out(2) == doctest::Approx(25.0));
    const VectorXd rev = minmax_normalize(v, 100.0, 0.0);
    CHECK(rev(0) == 100.0);
    CHECK(rev(3) == 0.0);
    CHECK(error_of([] { minmax_normalize(VectorXd::Constant(3, 2.0), 0.0, 1.0); }) == ErrorKind::ConstantInput);
    CHECK(error_of([] { minmax_normalize(VectorXd(0), 0.0, 1.0); }) == ErrorKind::ConstantInput);
}
