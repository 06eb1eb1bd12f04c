#include "miri/masking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "miri/errors.hpp"

namespace miri {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_rate(double rate) {
    if (!(rate > 0.0 && rate < 1.0))
        throw MaskSpecError("missing rate must lie in (0,1), got " + std::to_string(rate));
}

// Finds the intercept c such that mean_i logistic(scores[i] + c) == target.
double bisect_intercept(const std::vector<double>& scores, double target) {
    auto mean_prob = [&](double c) {
        double s = 0.0;
        for (double z : scores) s += logistic(z + c);
        return s / static_cast<double>(scores.size());
    };
    double lo = -60.0, hi = 60.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean_prob(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Mechanism parse_mechanism(const std::string& name) {
    if (name == "mcar" || name == "MCAR") return Mechanism::Mcar;
    if (name == "mar" || name == "MAR") return Mechanism::Mar;
    if (name == "mnar" || name == "MNAR") return Mechanism::Mnar;
    throw ConfigError("unknown mechanism '" + name + "' (expected mcar|mar|mnar)");
}

std::string to_string(Mechanism m) {
    switch (m) {
        case Mechanism::Mcar: return "mcar";
        case Mechanism::Mar: return "mar";
        case Mechanism::Mnar: return "mnar";
    }
    return "?";
}

void MaskSpec::validate(std::size_t d) const {
    check_rate(rate);
    if (mechanism == Mechanism::Mar) {
        if (d < 2) throw MaskSpecError("MAR requires at least 2 features");
        if (!(cond_fraction > 0.0 && cond_fraction <= 1.0))
            throw MaskSpecError("conditioning fraction must lie in (0,1]");
        const auto n_cond = static_cast<std::size_t>(std::llround(cond_fraction * d));
        if (n_cond >= d)
            throw MaskSpecError("conditioning fraction leaves no maskable feature");
    }
}

Matrix gen_mcar(std::size_t n, std::size_t d, double rate, Rng& rng) {
    check_rate(rate);
    Matrix mask(n, d, 1.0);
    for (double& m : mask.storage())
        if (rng.uniform() < rate) m = 0.0;
    return mask;
}

Matrix gen_mar(const Matrix& x_true, double rate, double cond_fraction, Rng& rng) {
    check_rate(rate);
    const std::size_t n = x_true.rows(), d = x_true.cols();
    if (d < 2) throw MaskSpecError("MAR requires at least 2 features");
    if (!x_true.all_finite()) throw MaskSpecError("MAR requires fully observed data");
    if (!(cond_fraction > 0.0 && cond_fraction <= 1.0))
        throw MaskSpecError("conditioning fraction must lie in (0,1]");

    std::size_t n_cond = static_cast<std::size_t>(std::llround(cond_fraction * d));
    n_cond = std::max<std::size_t>(n_cond, 1);
    if (n_cond >= d) throw MaskSpecError("conditioning fraction leaves no maskable feature");
    const std::size_t n_maskable = d - n_cond;

    const double maskable_fraction = static_cast<double>(n_maskable) / static_cast<double>(d);
    if (rate >= maskable_fraction)
        throw MaskSpecError("rate " + std::to_string(rate) +
                            " is infeasible: only a fraction " +
                            std::to_string(maskable_fraction) + " of cells is maskable");

    const auto perm = rng.permutation(d);
    std::vector<bool> is_cond(d, false);
    for (std::size_t k = 0; k < n_cond; ++k) is_cond[perm[k]] = true;

    std::vector<double> scores(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j)
            if (is_cond[j]) s += x_true(i, j);
        scores[i] = s;
    }

    // Per-maskable-cell probability needed to reach `rate` over all cells.
    const double target = rate / maskable_fraction;
    const double intercept = bisect_intercept(scores, target);

    Matrix mask(n, d, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = logistic(scores[i] + intercept);
        for (std::size_t j = 0; j < d; ++j) {
            if (is_cond[j]) continue;
            if (rng.uniform() < p) mask(i, j) = 0.0;
        }
    }
    return mask;
}

Matrix gen_mnar(const Matrix& x_true, double rate, Rng& rng) {
    check_rate(rate);
    if (!x_true.all_finite()) throw MaskSpecError("MNAR requires fully observed data");

    std::vector<double> scores(x_true.storage());
    const double intercept = bisect_intercept(scores, rate);

    Matrix mask(x_true.rows(), x_true.cols(), 1.0);
    for (std::size_t idx = 0; idx < mask.size(); ++idx) {
        const double p = logistic(x_true.data()[idx] + intercept);
        if (rng.uniform() < p) mask.data()[idx] = 0.0;
    }
    return mask;
}

Matrix generate_mask(const Matrix& x_true, const MaskSpec& spec) {
    spec.validate(x_true.cols());
    Rng rng(spec.seed);
    switch (spec.mechanism) {
        case Mechanism::Mcar:
            return gen_mcar(x_true.rows(), x_true.cols(), spec.rate, rng);
        case Mechanism::Mar:
            return gen_mar(x_true, spec.rate, spec.cond_fraction, rng);
        case Mechanism::Mnar:
            return gen_mnar(x_true, spec.rate, rng);
    }
    throw MaskSpecError("unreachable mechanism");
}

MaskedDataset apply_mask(const Matrix& x_true, const Matrix& mask) {
    if (!x_true.same_shape(mask)) throw ShapeError("apply_mask: shape mismatch");
    MaskedDataset ds;
    ds.mask = mask;
    ds.raw = x_true;
    for (std::size_t idx = 0; idx < mask.size(); ++idx)
        if (mask.data()[idx] == 0.0) ds.raw.data()[idx] = kNaN;
    ds.validate();
    return ds;
}

double missing_fraction(const Matrix& mask) {
    if (mask.size() == 0) return 0.0;
    std::size_t zeros = 0;
    for (double m : mask.storage()) zeros += (m == 0.0);
    return static_cast<double>(zeros) / static_cast<double>(mask.size());
}

}  // namespace miri
