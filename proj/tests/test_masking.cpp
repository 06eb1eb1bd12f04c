#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "miri/errors.hpp"
#include "miri/masking.hpp"
#include "miri/rng.hpp"

using namespace miri;

namespace {

Matrix gaussian_data(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(n, d);
    for (double& v : x.storage()) v = rng.normal();
    return x;
}

}  // namespace

TEST_CASE("mcar hits the target rate") {
    Rng rng(100);
    Matrix mask = gen_mcar(6000, 2, 0.3, rng);
    CHECK(std::abs(missing_fraction(mask) - 0.3) < 0.015);
}

TEST_CASE("mcar tiny rate leaves small masks fully observed") {
    Rng rng(101);
    Matrix mask = gen_mcar(5, 4, 0.0001, rng);
    for (double m : mask.storage()) CHECK(m == 1.0);
}

TEST_CASE("mcar is reproducible and independent of the data") {
    Rng a(7), b(7);
    Matrix m1 = gen_mcar(50, 3, 0.4, a);
    Matrix m2 = gen_mcar(50, 3, 0.4, b);
    CHECK(m1 == m2);
}

TEST_CASE("mcar rejects rates outside the open interval") {
    Rng rng(1);
    CHECK_THROWS_AS(gen_mcar(10, 2, 0.0, rng), MaskSpecError);
    CHECK_THROWS_AS(gen_mcar(10, 2, 1.0, rng), MaskSpecError);
    CHECK_THROWS_AS(gen_mcar(10, 2, -0.1, rng), MaskSpecError);
}

TEST_CASE("mar keeps conditioning features fully observed") {
    Matrix x = gaussian_data(400, 4, 11);
    Rng rng(12);
    Matrix mask = gen_mar(x, 0.2, 0.5, rng);
    std::size_t fully_observed_features = 0;
    for (std::size_t j = 0; j < 4; ++j) {
        bool complete = true;
        for (std::size_t i = 0; i < 400; ++i)
            if (mask(i, j) == 0.0) complete = false;
        fully_observed_features += complete;
    }
    CHECK(fully_observed_features == 2);
}

TEST_CASE("mar calibrates the overall rate") {
    Matrix x = gaussian_data(5000, 8, 21);
    Rng rng(22);
    Matrix mask = gen_mar(x, 0.4, 0.5, rng);
    CHECK(std::abs(missing_fraction(mask) - 0.4) < 0.02);
}

TEST_CASE("mar missingness depends on the conditioning features") {
    // With slope 1, rows with larger conditioning sums must be masked more.
    Matrix x = gaussian_data(4000, 2, 23);
    Rng rng(24);
    Matrix mask = gen_mar(x, 0.25, 0.5, rng);
    // find the conditioning column (fully observed one)
    std::size_t cond = 2;
    for (std::size_t j = 0; j < 2; ++j) {
        bool complete = true;
        for (std::size_t i = 0; i < 4000; ++i)
            if (mask(i, j) == 0.0) complete = false;
        if (complete) cond = j;
    }
    REQUIRE(cond < 2);
    const std::size_t maskable = 1 - cond;
    double mean_cond_masked = 0.0, mean_cond_observed = 0.0;
    std::size_t n_masked = 0, n_observed = 0;
    for (std::size_t i = 0; i < 4000; ++i) {
        if (mask(i, maskable) == 0.0) {
            mean_cond_masked += x(i, cond);
            ++n_masked;
        } else {
            mean_cond_observed += x(i, cond);
            ++n_observed;
        }
    }
    REQUIRE(n_masked > 100);
    REQUIRE(n_observed > 100);
    CHECK(mean_cond_masked / n_masked > mean_cond_observed / n_observed + 0.2);
}

TEST_CASE("mar rejects infeasible requests") {
    Matrix x = gaussian_data(100, 2, 31);
    Rng rng(32);
    // half the features conditioning => at most 50% of cells maskable
    CHECK_THROWS_AS(gen_mar(x, 0.6, 0.5, rng), MaskSpecError);
    CHECK_THROWS_AS(gen_mar(x, 0.2, 1.0, rng), MaskSpecError);
    Matrix one_col = gaussian_data(100, 1, 33);
    CHECK_THROWS_AS(gen_mar(one_col, 0.2, 0.5, rng), MaskSpecError);
}

TEST_CASE("mnar calibrates the overall rate") {
    Matrix x = gaussian_data(5000, 4, 41);
    Rng rng(42);
    Matrix mask = gen_mnar(x, 0.2, rng);
    CHECK(std::abs(missing_fraction(mask) - 0.2) < 0.02);
}

TEST_CASE("mnar masks large values preferentially") {
    Matrix x = gaussian_data(8000, 1, 43);
    Rng rng(44);
    Matrix mask = gen_mnar(x, 0.3, rng);
    double masked_mean = 0.0, observed_mean = 0.0;
    std::size_t n_masked = 0, n_observed = 0;
    for (std::size_t i = 0; i < 8000; ++i) {
        if (mask(i, 0) == 0.0) {
            masked_mean += x(i, 0);
            ++n_masked;
        } else {
            observed_mean += x(i, 0);
            ++n_observed;
        }
    }
    CHECK(masked_mean / n_masked > observed_mean / n_observed);
}

TEST_CASE("mnar is reproducible for a fixed seed") {
    Matrix x = gaussian_data(300, 3, 51);
    Rng a(5), b(5);
    CHECK(gen_mnar(x, 0.25, a) == gen_mnar(x, 0.25, b));
}

TEST_CASE("apply_mask keeps observed values and recomposes exactly") {
    Matrix x = gaussian_data(50, 3, 61);
    Rng rng(62);
    Matrix mask = gen_mcar(50, 3, 0.4, rng);
    MaskedDataset ds = apply_mask(x, mask);
    for (std::size_t i = 0; i < 50; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            if (mask(i, j) == 1.0) {
                CHECK(ds.raw(i, j) == x(i, j));
            } else {
                CHECK(std::isnan(ds.raw(i, j)));
            }
            // m .* raw + (1-m) .* truth == truth
            const double recomposed =
                mask(i, j) == 1.0 ? ds.raw(i, j) : x(i, j);
            CHECK(recomposed == x(i, j));
        }
    }
}

TEST_CASE("apply_mask handles degenerate masks") {
    Matrix x = gaussian_data(4, 2, 63);
    Matrix all_ones(4, 2, 1.0);
    MaskedDataset full = apply_mask(x, all_ones);
    CHECK(full.raw == x);

    Matrix row_zero(4, 2, 1.0);
    row_zero(2, 0) = 0.0;
    row_zero(2, 1) = 0.0;
    MaskedDataset partial = apply_mask(x, row_zero);
    CHECK(std::isnan(partial.raw(2, 0)));
    CHECK(std::isnan(partial.raw(2, 1)));

    CHECK_THROWS_AS(apply_mask(x, Matrix(3, 2, 1.0)), ShapeError);
}

TEST_CASE("generate_mask dispatches with its own seed") {
    Matrix x = gaussian_data(200, 4, 71);
    MaskSpec spec;
    spec.mechanism = Mechanism::Mar;
    spec.rate = 0.2;
    spec.cond_fraction = 0.5;
    spec.seed = 99;
    Matrix m1 = generate_mask(x, spec);
    Matrix m2 = generate_mask(x, spec);
    CHECK(m1 == m2);
    spec.seed = 100;
    Matrix m3 = generate_mask(x, spec);
    CHECK(!(m1 == m3));
}

TEST_CASE("mask spec validation") {
    MaskSpec spec;
    spec.rate = 1.5;
    CHECK_THROWS_AS(spec.validate(4), MaskSpecError);
    spec.rate = 0.3;
    spec.mechanism = Mechanism::Mar;
    spec.cond_fraction = 1.0;
    CHECK_THROWS_AS(spec.validate(4), MaskSpecError);
    spec.cond_fraction = 0.5;
    CHECK_NOTHROW(spec.validate(4));
    CHECK_THROWS_AS(parse_mechanism("bogus"), ConfigError);
    CHECK(parse_mechanism("MNAR") == Mechanism::Mnar);
}
