#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "miri/errors.hpp"
#include "miri/metrics.hpp"
#include "miri/rng.hpp"

using namespace miri;

TEST_CASE("masked errors on hand-sized cases") {
    Matrix truth(2, 2, 0.0);
    Matrix imputed(2, 2, 0.0);
    Matrix mask(2, 2, 1.0);

    mask(0, 0) = 0.0;
    SUBCASE("exact imputation scores zero") {
        CHECK(rmse_masked(imputed, truth, mask) == 0.0);
        CHECK(mae_masked(imputed, truth, mask) == 0.0);
    }
    SUBCASE("single masked cell with error 2") {
        imputed(0, 0) = 2.0;
        CHECK(rmse_masked(imputed, truth, mask) == doctest::Approx(2.0));
        CHECK(mae_masked(imputed, truth, mask) == doctest::Approx(2.0));
    }
    SUBCASE("two masked cells with errors 0 and 2") {
        mask(1, 1) = 0.0;
        imputed(1, 1) = 2.0;
        CHECK(mae_masked(imputed, truth, mask) == doctest::Approx(1.0));
        CHECK(rmse_masked(imputed, truth, mask) == doctest::Approx(std::sqrt(2.0)));
    }
}

TEST_CASE("masked errors require at least one masked cell") {
    Matrix m(2, 2, 1.0);
    CHECK_THROWS_AS(rmse_masked(m, m, m), MetricError);
    CHECK_THROWS_AS(mae_masked(m, m, m), MetricError);
    CHECK_THROWS_AS(rmse_masked(m, m, Matrix(3, 2, 0.0)), ShapeError);
}

TEST_CASE("whole-matrix errors weight masked errors by the missing rate") {
    Matrix truth(2, 2, 0.0);
    Matrix imputed(2, 2, 0.0);
    imputed(0, 0) = 2.0;  // one cell of four off by 2
    CHECK(rmse_all(imputed, truth) == doctest::Approx(1.0));
    CHECK(mae_all(imputed, truth) == doctest::Approx(0.5));
}

TEST_CASE("mmd of a sample against itself is zero") {
    Rng rng(1);
    Matrix a(100, 2);
    for (double& v : a.storage()) v = rng.normal();
    CHECK(mmd_rbf(a, a) < 1e-12);
}

TEST_CASE("mmd separates shifted samples") {
    Rng rng(2);
    Matrix a(500, 2), b(500, 2);
    for (double& v : a.storage()) v = rng.normal();
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < 2; ++j) b(i, j) = a(i, j) + 10.0;
    const double got = mmd_rbf(a, b);
    CHECK(got > 0.5);
    // brute force agrees on the same draws at the same bandwidth
    const double h = median_pairwise_distance(a, b);
    CHECK(std::abs(got - testutil::brute_force_mmd(a, b, h)) < 1e-10);
}

TEST_CASE("mmd matches the exhaustive 4-term expansion at n = 2") {
    Matrix a(2, 1), b(2, 1);
    a(0, 0) = 0.0; a(1, 0) = 1.0;
    b(0, 0) = 2.0; b(1, 0) = 3.5;
    const double h = 1.3;
    CHECK(std::abs(mmd_rbf(a, b, h) - testutil::brute_force_mmd(a, b, h)) < 1e-12);
}

TEST_CASE("mmd estimator equivalence, symmetry and self-distance over random instances") {
    Rng rng(3);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t na = 2 + static_cast<std::size_t>(rng.below(48));
        const std::size_t nb = 2 + static_cast<std::size_t>(rng.below(48));
        const std::size_t d = 1 + static_cast<std::size_t>(rng.below(4));
        Matrix a(na, d), b(nb, d);
        for (double& v : a.storage()) v = 2.0 * rng.normal();
        for (double& v : b.storage()) v = rng.normal() + 0.5;

        const double got = mmd_rbf(a, b);
        const double h = testutil::brute_force_median_distance(a, b);
        const double expected = testutil::brute_force_mmd(a, b, h);
        CHECK(std::abs(got - expected) < 1e-12);
        CHECK(std::abs(mmd_rbf(a, b) - mmd_rbf(b, a)) < 1e-12);
        CHECK(mmd_rbf(a, a) <= 1e-12);
    }
}

TEST_CASE("mmd degenerate pooled sample returns zero") {
    Matrix a(3, 2, 1.0), b(4, 2, 1.0);
    CHECK(mmd_rbf(a, b) == 0.0);
}

TEST_CASE("mmd input validation") {
    Matrix a(1, 2), b(5, 2);
    CHECK_THROWS_AS(mmd_rbf(a, b), MetricError);
    CHECK_THROWS_AS(mmd_rbf(Matrix(5, 2), Matrix(5, 3)), ShapeError);
}

TEST_CASE("mi is exactly zero for a constant mask") {
    Rng rng(4);
    Matrix x(500, 2);
    for (double& v : x.storage()) v = rng.normal();
    Matrix mask(500, 2, 1.0);
    CHECK(mi_plugin(x, mask, 8) == 0.0);
}

TEST_CASE("mi near zero when mask is independent of the data") {
    Rng rng(5);
    const std::size_t n = 10000;
    Matrix x(n, 2);
    for (double& v : x.storage()) v = rng.normal();
    Matrix mask(n, 2, 1.0);
    for (double& m : mask.storage())
        if (rng.uniform() < 0.3) m = 0.0;
    CHECK(mi_plugin(x, mask, 8) < 0.05);

    // permutation null: permuting mask rows must stay in the same regime
    const auto perm = rng.permutation(n);
    Matrix shuffled(n, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < 2; ++j) shuffled(i, j) = mask(perm[i], j);
    CHECK(mi_plugin(x, shuffled, 8) < 0.05);
}

TEST_CASE("mi recovers ln 2 when the sign is determined by the mask") {
    Rng rng(6);
    const std::size_t n = 20000;
    Matrix x(n, 1);
    Matrix mask(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const bool observed = rng.uniform() < 0.5;
        mask(i, 0) = observed ? 1.0 : 0.0;
        const double magnitude = 0.5 + rng.uniform();
        x(i, 0) = observed ? magnitude : -magnitude;
    }
    CHECK(std::abs(mi_plugin(x, mask, 2) - std::log(2.0)) < 0.05);
}

TEST_CASE("mi increases with coupling strength") {
    Rng rng(7);
    const std::size_t n = 20000;
    std::vector<double> estimates;
    for (double coupling : {0.0, 0.5, 1.0}) {
        Rng local(17);
        Matrix x(n, 1);
        Matrix mask(n, 1);
        for (std::size_t i = 0; i < n; ++i) {
            const bool flag = local.uniform() < 0.5;
            mask(i, 0) = flag ? 1.0 : 0.0;
            const double noise = local.normal();
            x(i, 0) = coupling * (flag ? 2.0 : -2.0) + noise;
        }
        estimates.push_back(mi_plugin(x, mask, 8));
    }
    CHECK(estimates[0] < estimates[1]);
    CHECK(estimates[1] < estimates[2]);
}

TEST_CASE("mi non-negative and input checks") {
    Matrix x(10, 1, 0.0);
    Matrix mask(10, 1, 1.0);
    CHECK(mi_plugin(x, mask, 4) >= 0.0);
    CHECK_THROWS_AS(mi_plugin(x, mask, 1), MetricError);
    CHECK_THROWS_AS(mi_plugin(Matrix(10, 5), Matrix(10, 5, 1.0), 4), MetricError);
}

TEST_CASE("metrics report serializes one key per line") {
    MetricsReport rep;
    rep.rmse = 0.5;
    rep.mae = 0.25;
    rep.mmd = 0.0625;
    rep.mi = 0.015625;
    rep.rows = 10;
    rep.cells_evaluated = 20;
    const std::string text = rep.to_text();
    CHECK(text.find("rmse 0.5\n") != std::string::npos);
    CHECK(text.find("mmd 0.0625") != std::string::npos);
    CHECK(text.find("mi 0.015625") != std::string::npos);
    CHECK(text.find("rows 10") != std::string::npos);
}
